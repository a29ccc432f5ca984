#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlscat/grid.hpp"
#include "nlscat/ratefit.hpp"

namespace nlscat {

// Short-range correction to the cubic phase: F(r) = mu * r^(1 + delta_exp),
// entering the equation as u * F(|u|^2).
struct Perturbation {
  double mu = 0.0;
  double delta_exp = 0.25;  // must be > 0: F must vanish faster than r at 0
};

struct SimConfig {
  int lambda = 1;  // +1 defocusing, -1 focusing, 0 turns the cubic term off
  std::optional<Perturbation> perturbation;
  double epsilon = 0.1;  // data amplitude, carried into outputs for bookkeeping
  double dt = 5e-3;
  double t_start = 0.0;
  double t_end = 1.0;
  // Times at which diagnostics are recorded, fields are stored, and the
  // observer fires.  Must be sorted, distinct, inside [t_start, t_end].
  // The solver lands on each exactly, shrinking the final step of a leg.
  std::vector<double> checkpoint_times;
  double mass_tolerance = 1e-6;       // relative drift that aborts the run
  double boundary_tolerance = 1e-10;  // mass fraction at |x| > 0.9 L that aborts
  bool disable_linear = false;        // test hook: freeze the dispersive half
  void validate() const;              // throws config_error
};

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;           // L2 norm squared
  double sup_norm = 0.0;
  double lu_l2 = 0.0;          // L2 norm of (x + i t d/dx) u
  double boundary_mass = 0.0;  // mass fraction at |x| > 0.9 L
};

struct Trajectory {
  SimConfig config;
  std::vector<DiagnosticsRow> diagnostics;  // one row per checkpoint time
  std::vector<ComplexField> checkpoints;    // fields at checkpoint times
};

// One split step: exact half nonlinear phase rotation, exact dispersive step
// in Fourier space, second half rotation.  Both substeps preserve |u| mass
// exactly, so mass is conserved to rounding across the whole run.  Throws
// numerical_error if the result is not finite.
ComplexField strang_step(const ComplexField& u, double dt, const SimConfig& cfg);

using Observer = std::function<void(const ComplexField&)>;

// Steps u0 from t_start to t_end with uniform dt (shrinking the last step of
// each checkpoint leg), recording diagnostics at every checkpoint time.  The
// observer (if given) fires at each checkpoint; fields are retained in the
// trajectory only when store_fields is true, so long runs with dense
// diagnostics need not hold every snapshot in memory.
Trajectory evolve(const ComplexField& u0, const SimConfig& cfg);
Trajectory evolve(const ComplexField& u0, const SimConfig& cfg,
                  const Observer& observer, bool store_fields);

// Co-evolves a solution w of the linearization around the flow launched from
// background_u0 (re-run internally with the same step sequence):
//   i w_t + w_xx / 2 = lambda (2 |u|^2 w + u^2 conj(w)) + dF contribution.
// Each nonlinear substep applies the exact tangent of the substep map, so w
// is the exact derivative of the numerical flow.  Returns w at cfg.t_end.
ComplexField evolve_linearized(const ComplexField& w0, const ComplexField& background_u0,
                               const SimConfig& cfg);

// Runs cfg at dt and dt/2 and reports the relative L2 distance of the final
// fields; a second-order splitting should show ~4x reduction under halving.
double richardson_error(const ComplexField& u0, const SimConfig& cfg);

// Fits ||Lu||_{L2} against t over diagnostics with t >= t_min.  Requires the
// fitted window to span at least 2 decades.  The claim of interest is a tiny
// exponent, so callers should disable the r^2 gate when judging it.
RateFit energy_growth_exponent(const Trajectory& traj, double t_min = 1.0);

}  // namespace nlscat

#include "nlscat/solver.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "nlscat/errors.hpp"
#include "nlscat/fft.hpp"
#include "nlscat/field_ops.hpp"

namespace nlscat {

namespace {

// Phase density theta(r) = lambda r + mu r^(1+delta), r = |u|^2, and its
// derivative; the nonlinear substep rotates u by exp(-i h theta(|u|^2)).
struct PhaseLaw {
  int lambda;
  bool has_pert;
  double mu, delta;

  explicit PhaseLaw(const SimConfig& cfg)
      : lambda(cfg.lambda),
        has_pert(cfg.perturbation.has_value()),
        mu(has_pert ? cfg.perturbation->mu : 0.0),
        delta(has_pert ? cfg.perturbation->delta_exp : 0.0) {}

  bool trivial() const { return lambda == 0 && !has_pert; }
  double theta(double r) const {
    double th = lambda * r;
    if (has_pert) th += mu * std::pow(r, 1.0 + delta);
    return th;
  }
  double theta_prime(double r) const {
    double th = lambda;
    if (has_pert) th += mu * (1.0 + delta) * std::pow(r, delta);
    return th;
  }
};

void rotate_nonlinear(ComplexField& u, double h, const PhaseLaw& law) {
  if (law.trivial()) return;
  for (auto& v : u.values) {
    const double r = std::norm(v);
    v *= std::polar(1.0, -h * law.theta(r));
  }
}

// Exact tangent of the substep map u -> u exp(-i h theta(|u|^2)):
//   w -> exp(-i h theta) (w - 2 i h theta'(r) Re(conj(u) w) u).
// Differentiating the discrete map keeps w the exact derivative of the
// numerical flow, so comparisons against (x + i t d/dx) u see no extra
// splitting error.  Updates w first (needs the pre-substep u), then u.
void rotate_nonlinear_tangent(ComplexField& u, ComplexField& w, double h,
                              const PhaseLaw& law) {
  if (law.trivial()) return;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const cplx uk = u.values[k];
    const double r = std::norm(uk);
    const cplx rot = std::polar(1.0, -h * law.theta(r));
    const double re = uk.real() * w.values[k].real() + uk.imag() * w.values[k].imag();
    w.values[k] = rot * (w.values[k] - cplx(0.0, 2.0 * h * law.theta_prime(r) * re) * uk);
    u.values[k] = rot * uk;
  }
}

void dispersive_step(ComplexField& u, double h) {
  SpectralField f = fourier_forward(u);
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    const double xi = f.grid->xi_samples[j];
    f.values[j] *= std::polar(1.0, -0.5 * h * xi * xi);
  }
  ComplexField back = fourier_inverse(f);
  u.values = std::move(back.values);
}

void check_finite(const ComplexField& u, double h) {
  if (all_finite(u)) return;
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "strang_step: non-finite value after step of %.3e at t = %.6f "
                "(sup before overflow unavailable)", h, u.time);
  throw numerical_error(msg);
}

void step_in_place(ComplexField& u, double h, const SimConfig& cfg, const PhaseLaw& law) {
  rotate_nonlinear(u, 0.5 * h, law);
  if (!cfg.disable_linear) dispersive_step(u, h);
  rotate_nonlinear(u, 0.5 * h, law);
  u.time += h;
  check_finite(u, h);
}

// Steps from the field's current time to target, landing exactly on it.
void advance_to(ComplexField& u, double target, const SimConfig& cfg,
                const PhaseLaw& law,
                const std::function<void(ComplexField&, double)>& stepper) {
  const double gap = target - u.time;
  if (gap <= 0.0) { u.time = target; return; }
  const auto n_full = static_cast<std::size_t>(std::floor(gap / cfg.dt * (1.0 + 1e-12)));
  for (std::size_t s = 0; s < n_full; ++s) stepper(u, cfg.dt);
  const double rem = target - u.time;
  if (rem > 1e-9 * cfg.dt) stepper(u, rem);
  u.time = target;  // discard accumulated rounding in the time label
  (void)law;
}

DiagnosticsRow make_row(const ComplexField& u, const SimConfig& cfg) {
  DiagnosticsRow row;
  row.t = u.time;
  const double l2 = norm_l2(u);
  row.mass = l2 * l2;
  row.sup_norm = norm_linf(u);
  row.boundary_mass = boundary_mass_fraction(u);
  if (row.boundary_mass > cfg.boundary_tolerance) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "evolve: boundary mass fraction %.3e exceeds %.3e at t = %.6f; "
                  "the box is too small for this run", row.boundary_mass,
                  cfg.boundary_tolerance, u.time);
    throw numerical_error(msg);
  }
  row.lu_l2 = norm_l2(apply_L(u, cfg.boundary_tolerance));
  return row;
}

}  // namespace

void SimConfig::validate() const {
  if (lambda != -1 && lambda != 0 && lambda != 1)
    throw config_error("SimConfig: lambda must be -1, 0, or +1");
  if (perturbation && !(perturbation->delta_exp > 0.0))
    throw config_error("SimConfig: perturbation delta_exp must be positive");
  if (perturbation && !std::isfinite(perturbation->mu))
    throw config_error("SimConfig: perturbation mu must be finite");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw config_error("SimConfig: epsilon must be positive and finite");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw config_error("SimConfig: dt must be positive and finite");
  if (!(t_start < t_end))
    throw config_error("SimConfig: t_start must be below t_end");
  double prev = t_start - 1.0;
  for (double tc : checkpoint_times) {
    if (!(tc >= t_start) || !(tc <= t_end))
      throw config_error("SimConfig: checkpoint time outside [t_start, t_end]");
    if (!(tc > prev))
      throw config_error("SimConfig: checkpoint times must be strictly increasing");
    prev = tc;
  }
  if (!(mass_tolerance > 0.0))
    throw config_error("SimConfig: mass_tolerance must be positive");
  if (!(boundary_tolerance > 0.0))
    throw config_error("SimConfig: boundary_tolerance must be positive");
}

ComplexField strang_step(const ComplexField& u, double dt, const SimConfig& cfg) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw config_error("strang_step: dt must be positive and finite");
  const PhaseLaw law(cfg);
  ComplexField out = u;
  step_in_place(out, dt, cfg, law);
  return out;
}

Trajectory evolve(const ComplexField& u0, const SimConfig& cfg) {
  return evolve(u0, cfg, Observer(), true);
}

Trajectory evolve(const ComplexField& u0, const SimConfig& cfg,
                  const Observer& observer, bool store_fields) {
  cfg.validate();
  if (std::abs(u0.time - cfg.t_start) > 1e-12 * std::max(1.0, std::abs(cfg.t_start)))
    throw config_error("evolve: u0.time must equal t_start");
  if (!all_finite(u0)) throw numerical_error("evolve: non-finite initial data");

  const PhaseLaw law(cfg);
  Trajectory traj;
  traj.config = cfg;

  std::vector<double> targets = cfg.checkpoint_times;
  if (targets.empty()) targets.push_back(cfg.t_end);

  ComplexField u = u0;
  u.time = cfg.t_start;
  const double mass0 = [&] {
    const double l2 = norm_l2(u);
    return l2 * l2;
  }();

  const auto stepper = [&](ComplexField& f, double h) { step_in_place(f, h, cfg, law); };
  for (double target : targets) {
    advance_to(u, target, cfg, law, stepper);
    DiagnosticsRow row = make_row(u, cfg);
    if (std::abs(row.mass / mass0 - 1.0) > cfg.mass_tolerance) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "evolve: relative mass drift %.3e exceeds %.3e at t = %.6f",
                    row.mass / mass0 - 1.0, cfg.mass_tolerance, u.time);
      throw numerical_error(msg);
    }
    traj.diagnostics.push_back(row);
    if (store_fields) traj.checkpoints.push_back(u);
    if (observer) observer(u);
  }
  // Reach t_end even when it is not a checkpoint, so the run covers the
  // advertised interval (nothing is recorded past the last checkpoint).
  if (u.time < cfg.t_end) advance_to(u, cfg.t_end, cfg, law, stepper);
  return traj;
}

ComplexField evolve_linearized(const ComplexField& w0, const ComplexField& background_u0,
                               const SimConfig& cfg) {
  cfg.validate();
  if (w0.grid != background_u0.grid)
    throw config_error("evolve_linearized: w0 and background share one grid");
  if (std::abs(w0.time - cfg.t_start) > 1e-12 * std::max(1.0, std::abs(cfg.t_start)))
    throw config_error("evolve_linearized: w0.time must equal t_start");
  if (!all_finite(w0) || !all_finite(background_u0))
    throw numerical_error("evolve_linearized: non-finite input");

  const PhaseLaw law(cfg);
  ComplexField u = background_u0;
  ComplexField w = w0;
  u.time = cfg.t_start;

  const auto pair_step = [&](double h) {
    rotate_nonlinear_tangent(u, w, 0.5 * h, law);
    if (!cfg.disable_linear) {
      dispersive_step(u, h);
      dispersive_step(w, h);
    }
    rotate_nonlinear_tangent(u, w, 0.5 * h, law);
    u.time += h;
    w.time += h;
    check_finite(u, h);
    check_finite(w, h);
  };

  const double gap = cfg.t_end - cfg.t_start;
  const auto n_full = static_cast<std::size_t>(std::floor(gap / cfg.dt * (1.0 + 1e-12)));
  for (std::size_t s = 0; s < n_full; ++s) pair_step(cfg.dt);
  const double rem = cfg.t_end - u.time;
  if (rem > 1e-9 * cfg.dt) pair_step(rem);
  w.time = cfg.t_end;
  return w;
}

double richardson_error(const ComplexField& u0, const SimConfig& cfg) {
  SimConfig coarse = cfg;
  coarse.checkpoint_times.clear();
  SimConfig fine = coarse;
  fine.dt = 0.5 * cfg.dt;
  const Trajectory a = evolve(u0, coarse);
  const Trajectory b = evolve(u0, fine);
  const ComplexField& ua = a.checkpoints.back();
  const ComplexField& ub = b.checkpoints.back();
  double diff2 = 0.0;
  for (std::size_t k = 0; k < ua.values.size(); ++k)
    diff2 += std::norm(ua.values[k] - ub.values[k]);
  return std::sqrt(diff2 * ua.grid->dx) / norm_l2(ub);
}

RateFit energy_growth_exponent(const Trajectory& traj, double t_min) {
  std::vector<double> t, y;
  for (const auto& row : traj.diagnostics)
    if (row.t >= t_min) {
      t.push_back(row.t);
      y.push_back(row.lu_l2);
    }
  if (t.size() < 4 || t.back() / t.front() < 100.0)
    throw config_error("energy_growth_exponent: need diagnostics spanning 2 decades");
  return fit_power_law(t, y, t.front(), t.back());
}

}  // namespace nlscat

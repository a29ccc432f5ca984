#pragma once

#include <string>
#include <vector>

#include "nlscat/ratefit.hpp"
#include "nlscat/wavepacket.hpp"

namespace nlscat {

// Asymptotic amplitude of the flow along rays: the packet observable gamma
// with the logarithmic phase removed,
//   W(v) = gamma(t,v) * exp(+i*lambda*|gamma(t,v)|^2 * log t).
// The phase uses |gamma|^2 in place of the limiting |W|^2 (they share the
// modulus exactly), recorded in phase_convention.
struct ScatteringProfile {
  double extraction_time = 0.0;
  int lambda = 1;          // nonlinearity sign used in the phase removal
  double epsilon = 0.0;    // data amplitude of the source run (0 = unknown)
  std::string phase_convention = "gamma-modulus";
  std::vector<double> v_samples;
  std::vector<cplx> values;
};

double norm_l2_v(const ScatteringProfile& w);
double norm_linf_v(const ScatteringProfile& w);

// Removes the logarithmic phase from gamma at a single late time.  The
// correction is a pure rotation: |W(v)| = |gamma(t,v)| and the L^2 norms agree
// to rounding.  Gauge covariant: extracting from e^{i*theta} gamma yields
// e^{i*theta} W.
// pre: g.time >= 16 (the log phase must dominate transients), lambda in
//      {-1, 0, +1}, nonempty samples.
ScatteringProfile extract_profile(const GammaField& g, int lambda,
                                  double epsilon = 0.0);

// Successive-extraction differences ||W_{t_{k+1}} - W_{t_k}|| attributed to
// the earlier time t_k, plus their fitted decay rates.  When every difference
// sits at rounding level relative to the profile size the sequence is flagged
// converged and no fit is attempted (the logs would be noise).
struct ProfileConvergence {
  std::vector<double> times;      // earlier member of each pair
  std::vector<double> diff_l2;    // L^2_v norm of W_{k+1} - W_k
  std::vector<double> diff_linf;  // sup norm of W_{k+1} - W_k
  bool converged = false;
  RateFit rate_l2;    // valid only when !converged
  RateFit rate_linf;  // valid only when !converged
};

// pre: >= 5 gamma fields (so >= 4 differences feed the fit), strictly
// increasing times all >= 16, identical v grids, difference times spanning
// >= 2 octaves.  Throws config_error otherwise.
ProfileConvergence profile_convergence(const std::vector<GammaField>& run,
                                       int lambda);

// Residuals of the two asymptotic expansions against a fixed profile W:
//   along rays:   u(t, vt)  vs  t^{-1/2} e^{i v^2 t/2} W(v) e^{-i*lambda*|W|^2 log t}
//   in frequency: u_hat(xi) vs  e^{i pi/4} e^{-i t xi^2/2} W(xi) e^{-i*lambda*|W|^2 log t}
// The stationary-phase constant e^{i pi/4} ties the two sides to one profile;
// evaluated at u.time (which may differ from W.extraction_time; freezing W at
// a late time and sweeping u over checkpoints measures how fast the flow
// settles onto the limit profile).  W is sampled on its v grid; frequency-side
// evaluation interpolates W onto the spectral points inside the v window with
// an 8-point Lagrange rule.
struct AsymptoticError {
  double time = 0.0;
  double err_x_linf = 0.0;
  double err_x_l2 = 0.0;   // sqrt(dv * sum over v samples)
  double err_xi_linf = 0.0;
  double err_xi_l2 = 0.0;  // sqrt(dxi * sum over spectral points in window)
};

// pre: u.time >= 1; every ray v*u.time inside 0.8*half_length; at least 8
// spectral points fall strictly inside the v window.
AsymptoticError asymptotic_error(const ComplexField& u,
                                 const ScatteringProfile& w);

// Interpolates uniformly sampled data at x with the 8-point Lagrange rule
// (exact on degree-7 polynomials; stencil clamped at the ends).
// pre: xs uniform with >= 8 samples, x within [xs.front(), xs.back()].
cplx interp_uniform8(const std::vector<double>& xs, const std::vector<cplx>& ys,
                     double x);

// ||W||_{H^s} over the periodic v window, reading the Sobolev weight off the
// raw DFT:  ||W||_{H^s}^2 = window_length * sum_m (1 + kappa_m^2)^s |w_hat_m|^2.
// Any s >= 0 (unlike the grid-side sobolev_norm, profiles are short arrays and
// high weights stay meaningful).
double profile_sobolev_norm(const ScatteringProfile& w, double s);

// The same norms tabulated as (s, norm) pairs for s = 0, 0.01, ..., 2.
std::vector<std::pair<double, double>> regularity_scan(
    const ScatteringProfile& w);

// Proxy regularity index: the largest scanned s with
// ||W||_{H^s} <= 10 * ||W||_{H^0}.  Smooth window-adapted profiles cap at the
// scan ceiling 2; profiles dominated by a discontinuity land below 0.5.
double profile_regularity(const ScatteringProfile& w);

}  // namespace nlscat

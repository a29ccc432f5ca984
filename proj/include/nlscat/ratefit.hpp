#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace nlscat {

// Least-squares fit of log y against log t.
struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;   // log of the prefactor
  double r_squared = 0.0;   // 1 for an exact power law (or a constant series)
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t n_samples = 0;
};

// Fits over samples with window_lo <= t <= window_hi.  Throws config_error on
// nonpositive y or t, fewer than 4 in-window samples, or a window spanning
// less than 2 octaves (t_max/t_min < 4).
RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                      double window_lo, double window_hi);

// A decay/growth claim on a fitted exponent.  one-sided: exponent must not
// exceed target+slack.  two-sided: |exponent - target| <= slack.  r2_min = 0
// disables the fit-quality gate (sensible for near-flat series, where the
// log-log variance explained is meaningless).
struct Claim {
  std::string id;
  double target_exponent = 0.0;
  double slack = 0.0;
  bool two_sided = false;
  double r2_min = 0.9;
};

struct Verdict {
  Claim claim;
  RateFit fit;
  bool pass = false;
};

Verdict evaluate_claim(const Claim& claim, const RateFit& fit);

// One JSON object per line, fixed key order, %.17g numbers: reruns must be
// byte-identical.
std::string verdict_json_line(const Verdict& v);

// Time series rows carrying both inner norms used by the dyadic windows.
struct SeriesRow {
  double t = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

struct DyadicWindowValue {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double sup_l2 = 0.0;       // max of l2 over the window
  double l4_linf = 0.0;      // (integral of linf^4 dt)^{1/4}, trapezoid rule
  double weighted = 0.0;     // weight(t_lo) * (sup_l2 + l4_linf)
};

// Splits [t_start, t_final] into dyadic windows [T, 2T) and evaluates the
// weighted inner norms on each.  Throws config_error when a window holds
// fewer than 4 samples; sup-style norms on sparse windows are meaningless.
std::vector<DyadicWindowValue> dyadic_sup_norm(const std::vector<SeriesRow>& rows,
                                               double t_start,
                                               const std::function<double(double)>& weight);

}  // namespace nlscat

#include "nlscat/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nlscat/errors.hpp"

namespace nlscat {

RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                      double window_lo, double window_hi) {
  if (t.size() != y.size())
    throw config_error("fit_power_law: t and y lengths differ");
  if (!(window_lo > 0.0) || !(window_hi > window_lo))
    throw config_error("fit_power_law: window must satisfy 0 < lo < hi");

  std::vector<double> lt, ly;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < window_lo || t[k] > window_hi) continue;
    if (!(t[k] > 0.0))
      throw config_error("fit_power_law: nonpositive t sample in window");
    if (!(y[k] > 0.0))
      throw config_error("fit_power_law: nonpositive y sample in window");
    lt.push_back(std::log(t[k]));
    ly.push_back(std::log(y[k]));
  }
  if (lt.size() < 4)
    throw config_error("fit_power_law: fewer than 4 samples in window");

  const auto [lo_it, hi_it] = std::minmax_element(lt.begin(), lt.end());
  if (*hi_it - *lo_it < std::log(4.0) * (1.0 - 1e-12))
    throw config_error("fit_power_law: window narrower than 2 octaves");

  const double n = static_cast<double>(lt.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lt.size(); ++k) { mt += lt[k]; my += ly[k]; }
  mt /= n; my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < lt.size(); ++k) {
    const double a = lt[k] - mt, b = ly[k] - my;
    stt += a * a; sty += a * b; syy += b * b;
  }

  RateFit fit;
  fit.exponent = sty / stt;
  fit.intercept = my - fit.exponent * mt;
  // A constant series has syy at rounding level (not exactly 0: the mean of n
  // identical logs need not equal them); call the fit perfect rather than 0/0.
  const double syy_floor = 64.0 * n * 4.93e-32 * (1.0 + my * my);
  fit.r_squared = (syy > syy_floor) ? (sty * sty) / (stt * syy) : 1.0;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.n_samples = lt.size();
  return fit;
}

Verdict evaluate_claim(const Claim& claim, const RateFit& fit) {
  Verdict v;
  v.claim = claim;
  v.fit = fit;
  const bool exponent_ok = claim.two_sided
      ? std::abs(fit.exponent - claim.target_exponent) <= claim.slack
      : fit.exponent <= claim.target_exponent + claim.slack;
  const bool quality_ok = (claim.r2_min <= 0.0) || (fit.r_squared >= claim.r2_min);
  v.pass = exponent_ok && quality_ok;
  return v;
}

std::string verdict_json_line(const Verdict& v) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\"id\":\"%s\",\"pass\":%s,\"exponent\":%.17g,\"target\":%.17g,"
                "\"slack\":%.17g,\"two_sided\":%s,\"r_squared\":%.17g,"
                "\"window\":[%.17g,%.17g],\"n_samples\":%zu}",
                v.claim.id.c_str(), v.pass ? "true" : "false", v.fit.exponent,
                v.claim.target_exponent, v.claim.slack,
                v.claim.two_sided ? "true" : "false", v.fit.r_squared,
                v.fit.window_lo, v.fit.window_hi, v.fit.n_samples);
  return std::string(buf);
}

std::vector<DyadicWindowValue> dyadic_sup_norm(const std::vector<SeriesRow>& rows,
                                               double t_start,
                                               const std::function<double(double)>& weight) {
  if (!(t_start > 0.0))
    throw config_error("dyadic_sup_norm: t_start must be positive");
  if (rows.empty())
    throw config_error("dyadic_sup_norm: empty series");
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].t > rows[k - 1].t))
      throw config_error("dyadic_sup_norm: times must be strictly increasing");

  const double t_final = rows.back().t;
  std::vector<DyadicWindowValue> out;
  for (double lo = t_start; lo < t_final; lo *= 2.0) {
    const double hi = std::min(lo * 2.0, t_final);
    DyadicWindowValue w;
    w.t_lo = lo;
    w.t_hi = hi;
    std::vector<const SeriesRow*> in;
    for (const auto& r : rows)
      if (r.t >= lo && r.t <= hi) in.push_back(&r);
    if (in.size() < 4)
      throw config_error("dyadic_sup_norm: window holds fewer than 4 samples");
    double quart = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      w.sup_l2 = std::max(w.sup_l2, in[k]->l2);
      if (k + 1 < in.size()) {
        const double a = std::pow(in[k]->linf, 4), b = std::pow(in[k + 1]->linf, 4);
        quart += 0.5 * (a + b) * (in[k + 1]->t - in[k]->t);
      }
    }
    w.l4_linf = std::pow(quart, 0.25);
    w.weighted = weight(lo) * (w.sup_l2 + w.l4_linf);
    out.push_back(w);
  }
  if (out.empty())
    throw config_error("dyadic_sup_norm: no complete window before the series ends");
  return out;
}

}  // namespace nlscat

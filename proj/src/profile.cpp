#include "nlscat/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nlscat/errors.hpp"
#include "nlscat/fft.hpp"
#include "nlscat/field_ops.hpp"

namespace nlscat {

namespace {

constexpr double kMinExtractionTime = 16.0;

// Validates uniform spacing and returns it.
double uniform_dv(const std::vector<double>& v) {
  if (v.size() < 2) throw config_error("profile: need at least 2 v samples");
  const double dv = v[1] - v[0];
  if (!(dv > 0.0)) throw config_error("profile: v samples must increase");
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    if (std::abs((v[k + 1] - v[k]) - dv) > 1e-9 * dv)
      throw config_error("profile: v samples must be uniformly spaced");
  }
  return dv;
}

void check_lambda(int lambda) {
  if (lambda < -1 || lambda > 1)
    throw config_error("profile: lambda must be -1, 0, or +1");
}

}  // namespace

double norm_l2_v(const ScatteringProfile& w) {
  const double dv = uniform_dv(w.v_samples);
  double s = 0.0;
  for (const cplx& z : w.values) s += std::norm(z);
  return std::sqrt(dv * s);
}

double norm_linf_v(const ScatteringProfile& w) {
  double m = 0.0;
  for (const cplx& z : w.values) m = std::max(m, std::abs(z));
  return m;
}

ScatteringProfile extract_profile(const GammaField& g, int lambda,
                                  double epsilon) {
  check_lambda(lambda);
  if (g.values.empty() || g.values.size() != g.v_samples.size())
    throw config_error("extract_profile: empty or inconsistent gamma field");
  if (g.time < kMinExtractionTime) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "extract_profile: time %.6g below extraction floor %.6g",
                  g.time, kMinExtractionTime);
    throw config_error(buf);
  }
  ScatteringProfile w;
  w.extraction_time = g.time;
  w.lambda = lambda;
  w.epsilon = epsilon;
  w.v_samples = g.v_samples;
  w.values.resize(g.values.size());
  const double log_t = std::log(g.time);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const cplx gam = g.values[k];
    // gamma solves gamma' = -i*lambda*|gamma|^2 gamma / t + R, so the settled
    // phase is e^{-i*lambda*|W|^2 log t}; removing it multiplies by the
    // conjugate rotation.
    w.values[k] = gam * std::polar(1.0, lambda * std::norm(gam) * log_t);
  }
  return w;
}

ProfileConvergence profile_convergence(const std::vector<GammaField>& run,
                                       int lambda) {
  if (run.size() < 5)
    throw config_error(
        "profile_convergence: need at least 5 extractions (4 successive "
        "differences feed the rate fit)");
  for (std::size_t k = 0; k + 1 < run.size(); ++k) {
    if (!(run[k].time < run[k + 1].time))
      throw config_error("profile_convergence: times must strictly increase");
    if (run[k].v_samples.size() != run[k + 1].v_samples.size())
      throw config_error("profile_convergence: v grids differ in size");
    for (std::size_t j = 0; j < run[k].v_samples.size(); ++j) {
      const double a = run[k].v_samples[j];
      const double b = run[k + 1].v_samples[j];
      if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
        throw config_error("profile_convergence: v grids differ");
    }
  }

  std::vector<ScatteringProfile> ws;
  ws.reserve(run.size());
  for (const GammaField& g : run) ws.push_back(extract_profile(g, lambda));
  const double dv = uniform_dv(ws.front().v_samples);

  ProfileConvergence out;
  double scale = 0.0;
  for (const ScatteringProfile& w : ws) scale = std::max(scale, norm_linf_v(w));
  for (std::size_t k = 0; k + 1 < ws.size(); ++k) {
    double sumsq = 0.0;
    double sup = 0.0;
    for (std::size_t j = 0; j < ws[k].values.size(); ++j) {
      const double d = std::abs(ws[k + 1].values[j] - ws[k].values[j]);
      sumsq += d * d;
      sup = std::max(sup, d);
    }
    out.times.push_back(ws[k].extraction_time);
    out.diff_l2.push_back(std::sqrt(dv * sumsq));
    out.diff_linf.push_back(sup);
  }

  // Rounding-level differences carry no rate information; flag and skip the fit.
  const double floor_ = 1e-12 * scale;
  double max_diff = 0.0;
  for (const double d : out.diff_linf) max_diff = std::max(max_diff, d);
  out.converged = (scale == 0.0) || (max_diff <= floor_);
  if (!out.converged) {
    out.rate_l2 =
        fit_power_law(out.times, out.diff_l2, out.times.front(), out.times.back());
    out.rate_linf = fit_power_law(out.times, out.diff_linf, out.times.front(),
                                  out.times.back());
  }
  return out;
}

cplx interp_uniform8(const std::vector<double>& xs, const std::vector<cplx>& ys,
                     double x) {
  const std::size_t n = xs.size();
  if (n < 8 || ys.size() != n)
    throw config_error("interp_uniform8: need >= 8 samples");
  const double dx = xs[1] - xs[0];
  if (!(x >= xs.front() - 1e-12 * dx) || !(x <= xs.back() + 1e-12 * dx))
    throw config_error("interp_uniform8: point outside sample range");
  // Center an 8-node stencil on x, clamped at the ends.
  double pos = (x - xs.front()) / dx;
  long i0 = static_cast<long>(std::floor(pos)) - 3;
  i0 = std::max(0L, std::min(i0, static_cast<long>(n) - 8));
  // Barycentric weights for 8 uniform nodes: (-1)^k * C(7, k).
  static const double bw[8] = {1.0, -7.0, 21.0, -35.0, 35.0, -21.0, 7.0, -1.0};
  cplx num = 0.0;
  double den = 0.0;
  for (int k = 0; k < 8; ++k) {
    const std::size_t i = static_cast<std::size_t>(i0) + k;
    const double diff = x - xs[i];
    if (std::abs(diff) < 1e-14 * dx) return ys[i];  // node hit
    const double wk = bw[k] / diff;
    num += wk * ys[i];
    den += wk;
  }
  return num / den;
}

AsymptoticError asymptotic_error(const ComplexField& u,
                                 const ScatteringProfile& w) {
  check_lambda(w.lambda);
  if (!u.grid || u.values.size() != u.grid->n_points)
    throw config_error("asymptotic_error: field/grid mismatch");
  if (!(u.time >= 1.0))
    throw config_error("asymptotic_error: need u.time >= 1");
  if (w.values.size() != w.v_samples.size() || w.values.size() < 8)
    throw config_error("asymptotic_error: profile needs >= 8 samples");
  const double t = u.time;
  const double dv = uniform_dv(w.v_samples);
  const double reach =
      std::max(std::abs(w.v_samples.front()), std::abs(w.v_samples.back())) * t;
  if (reach > 0.8 * u.grid->half_length)
    throw config_error(
        "asymptotic_error: ray window v*t exceeds 0.8*half_length");

  AsymptoticError err;
  err.time = t;
  const double log_t = std::log(t);
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  const int lam = w.lambda;

  // Ray side: u(t, vt) against the modulated profile.
  std::vector<double> xs(w.v_samples.size());
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = w.v_samples[k] * t;
  const std::vector<cplx> u_at = evaluate_at(u, xs);
  double sumsq = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double v = w.v_samples[k];
    const cplx model = w.values[k] * std::polar(inv_sqrt_t,
                                                0.5 * v * v * t -
                                                    lam * std::norm(w.values[k]) * log_t);
    const double d = std::abs(u_at[k] - model);
    sumsq += d * d;
    err.err_x_linf = std::max(err.err_x_linf, d);
  }
  err.err_x_l2 = std::sqrt(dv * sumsq);

  // Frequency side: u_hat on the spectral points inside the v window against
  // the interpolated profile under the free flow phase.  The Fresnel constant
  // e^{i pi/4} relates the ray-side profile to the Fourier transform: for the
  // settled field u_hat(xi) = e^{i pi/4} e^{-i t xi^2/2} W(xi) e^{-i lam |W|^2 log t}.
  const SpectralField U = fourier_forward(u);
  const cplx fresnel = std::polar(1.0, M_PI / 4.0);
  sumsq = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < U.values.size(); ++j) {
    const double xi = u.grid->xi_samples[j];
    if (xi < w.v_samples.front() || xi > w.v_samples.back()) continue;
    const cplx w_at = interp_uniform8(w.v_samples, w.values, xi);
    const cplx model =
        fresnel * w_at *
        std::polar(1.0, -0.5 * t * xi * xi - lam * std::norm(w_at) * log_t);
    const double d = std::abs(U.values[j] - model);
    sumsq += d * d;
    err.err_xi_linf = std::max(err.err_xi_linf, d);
    ++count;
  }
  if (count < 8)
    throw config_error(
        "asymptotic_error: fewer than 8 spectral points in the v window");
  err.err_xi_l2 = std::sqrt(u.grid->dxi * sumsq);
  return err;
}

namespace {

// (1 + kappa_m^2, |w_hat_m|^2) per mode of the window-periodic raw DFT.
void window_spectrum(const ScatteringProfile& w, std::vector<double>& base,
                     std::vector<double>& power, double& period) {
  const double dv = uniform_dv(w.v_samples);
  const std::size_t n = w.values.size();
  period = dv * static_cast<double>(n);

  std::vector<cplx> hat = w.values;
  dft_forward_raw(hat);
  base.resize(n);
  power.resize(n);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double m_signed = (m <= n / 2) ? static_cast<double>(m)
                                         : static_cast<double>(m) - static_cast<double>(n);
    const double kappa = two_pi * m_signed / period;
    base[m] = 1.0 + kappa * kappa;
    power[m] = std::norm(hat[m] / static_cast<double>(n));
  }
}

}  // namespace

double profile_sobolev_norm(const ScatteringProfile& w, double s) {
  if (!(s >= 0.0)) throw config_error("profile_sobolev_norm: need s >= 0");
  std::vector<double> base, power;
  double period = 0.0;
  window_spectrum(w, base, power, period);
  double sum = 0.0;
  for (std::size_t m = 0; m < base.size(); ++m)
    sum += std::pow(base[m], s) * power[m];
  return std::sqrt(period * sum);
}

std::vector<std::pair<double, double>> regularity_scan(
    const ScatteringProfile& w) {
  std::vector<double> base, power;
  double period = 0.0;
  window_spectrum(w, base, power, period);
  const std::size_t n = base.size();

  std::vector<std::pair<double, double>> scan;
  scan.reserve(201);
  for (int i = 0; i <= 200; ++i) {
    const double s = 0.01 * i;
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) sum += std::pow(base[m], s) * power[m];
    scan.emplace_back(s, std::sqrt(period * sum));
  }
  return scan;
}

double profile_regularity(const ScatteringProfile& w) {
  const auto scan = regularity_scan(w);
  const double h0 = scan.front().second;
  double index = 0.0;
  for (const auto& [s, norm_s] : scan) {
    if (norm_s <= 10.0 * h0) index = s;
    else break;
  }
  return index;
}

}  // namespace nlscat

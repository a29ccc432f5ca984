#include "nlscat/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nlscat/errors.hpp"
#include "nlscat/fft.hpp"

namespace nlscat {

double norm_l2(const ComplexField& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.grid->dx);
}

double norm_linf(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double norm_h01(const ComplexField& f) {
  const auto& x = f.grid->x_samples;
  double s = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    s += (1.0 + x[k] * x[k]) * std::norm(f.values[k]);
  return std::sqrt(s * f.grid->dx);
}

double norm_l2(const SpectralField& F) {
  double s = 0.0;
  for (const auto& v : F.values) s += std::norm(v);
  return std::sqrt(s * F.grid->dxi);
}

double sobolev_norm(const SpectralField& F, double s) {
  if (!(s >= 0.0 && s <= 2.0))
    throw config_error("sobolev_norm: order must lie in [0, 2]");
  const auto& xi = F.grid->xi_samples;
  double acc = 0.0;
  for (std::size_t j = 0; j < F.values.size(); ++j)
    acc += std::pow(1.0 + xi[j] * xi[j], s) * std::norm(F.values[j]);
  return std::sqrt(acc * F.grid->dxi);
}

double boundary_mass_fraction(const ComplexField& f) {
  const double edge = 0.9 * f.grid->half_length;
  const auto& x = f.grid->x_samples;
  double total = 0.0, outer = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const double m = std::norm(f.values[k]);
    total += m;
    if (std::abs(x[k]) > edge) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

ComplexField derivative(const ComplexField& u) {
  SpectralField U = fourier_forward(u);
  const auto& xi = U.grid->xi_samples;
  for (std::size_t j = 0; j < U.values.size(); ++j) U.values[j] *= cplx(0.0, xi[j]);
  return fourier_inverse(U);
}

ComplexField apply_L(const ComplexField& u, double boundary_tol) {
  const double frac = boundary_mass_fraction(u);
  if (frac > boundary_tol)
    std::fprintf(stderr,
                 "warning: apply_L at t=%g sees boundary mass fraction %.3e "
                 "(tolerance %.3e); x-weight wraps at the box edge\n",
                 u.time, frac, boundary_tol);
  ComplexField du = derivative(u);
  ComplexField out = u;
  const auto& x = u.grid->x_samples;
  const cplx it(0.0, u.time);
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = x[k] * u.values[k] + it * du.values[k];
  return out;
}

ComplexField modulate(const ComplexField& u, double c) {
  ComplexField out = u;
  const auto& x = u.grid->x_samples;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = std::polar(1.0, c * x[k]) * u.values[k];
  return out;
}

ComplexField shift(const ComplexField& u, double a) {
  SpectralField U = fourier_forward(u);
  const auto& xi = U.grid->xi_samples;
  for (std::size_t j = 0; j < U.values.size(); ++j)
    U.values[j] *= std::polar(1.0, -a * xi[j]);
  return fourier_inverse(U);
}

namespace {

// Smallest symmetric xi-window [jlo, jhi] holding all but tail_tol of the
// spectral mass.  Keeps far-point evaluation O(n_points_kept) per point.
std::pair<std::size_t, std::size_t> spectral_window(const SpectralField& U, double tail_tol) {
  const std::size_t n = U.values.size();
  double total = 0.0;
  for (const auto& v : U.values) total += std::norm(v);
  if (total == 0.0) return {n / 2, n / 2};
  std::size_t lo = n / 2, hi = n / 2;
  double held = std::norm(U.values[n / 2]);
  // Phase 1 captures the bulk.  The running sum saturates near eps*total, so
  // the criterion is floored there; phase 2 then walks outward past every
  // mode whose power exceeds tail_tol*total/n.  Dropped power is at most
  // n * floor = tail_tol * total without relying on cancellation-prone
  // accumulation in the tail.
  const double bulk = (1.0 - std::max(tail_tol, 1e-15)) * total;
  while (held < bulk && (lo > 0 || hi + 1 < n)) {
    const double left = lo > 0 ? std::norm(U.values[lo - 1]) : -1.0;
    const double right = hi + 1 < n ? std::norm(U.values[hi + 1]) : -1.0;
    if (right >= left) {
      held += std::norm(U.values[++hi]);
    } else {
      held += std::norm(U.values[--lo]);
    }
  }
  const double floor_per_mode = tail_tol * total / static_cast<double>(n);
  for (std::size_t j = 0; j < lo; ++j)
    if (std::norm(U.values[j]) > floor_per_mode) { lo = j; break; }
  for (std::size_t j = n; j-- > hi + 1;)
    if (std::norm(U.values[j]) > floor_per_mode) { hi = j; break; }
  return {lo, hi};
}

}  // namespace

std::vector<cplx> evaluate_at(const SpectralField& U, const std::vector<double>& points,
                              double tail_tol) {
  const auto [jlo, jhi] = spectral_window(U, tail_tol);
  const auto& xi = U.grid->xi_samples;
  const double scale = U.grid->dxi / std::sqrt(2.0 * M_PI);
  std::vector<cplx> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = jlo; j <= jhi; ++j)
      acc += U.values[j] * std::polar(1.0, points[p] * xi[j]);
    out[p] = scale * acc;
  }
  return out;
}

std::vector<cplx> evaluate_at(const ComplexField& u, const std::vector<double>& points,
                              double tail_tol) {
  return evaluate_at(fourier_forward(u), points, tail_tol);
}

bool all_finite(const std::vector<cplx>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace nlscat

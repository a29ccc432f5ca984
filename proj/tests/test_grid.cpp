#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "nlscat/errors.hpp"
#include "nlscat/fft.hpp"
#include "nlscat/field_ops.hpp"
#include "nlscat/grid.hpp"
#include "nlscat/synth.hpp"

using namespace nlscat;

namespace {

ComplexField gaussian_field(GridPtr g, double time = 0.0) {
  ComplexField f = make_field(g, time);
  for (std::size_t k = 0; k < g->n_points; ++k)
    f.values[k] = std::exp(-0.5 * g->x_samples[k] * g->x_samples[k]);
  return f;
}

ComplexField random_smooth(GridPtr g, unsigned seed) {
  return random_smooth_field(g, seed);
}

double max_pointwise_error(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("grid construction and validation") {
  auto g = make_grid(8.0, 16);
  CHECK(g->dx == 1.0);
  CHECK(g->x_samples.front() == -8.0);
  CHECK(g->x_samples.back() == 7.0);
  CHECK(g->xi_samples.front() == doctest::Approx(-M_PI).epsilon(1e-15));
  // Nyquist bound: |xi| <= pi/dx, half-open on the right.
  CHECK(g->xi_samples.back() == doctest::Approx(M_PI - M_PI / 8.0).epsilon(1e-15));

  CHECK_THROWS_AS(make_grid(8.0, 48), config_error);   // not a power of two
  CHECK_THROWS_AS(make_grid(8.0, 8), config_error);    // too small
  CHECK_THROWS_AS(make_grid(0.0, 64), config_error);
  CHECK_THROWS_AS(make_grid(-4.0, 64), config_error);
}

TEST_CASE("fourier round trip is lossless") {
  auto g = make_grid(20.0, 512);
  for (unsigned seed : {1u, 2u, 3u}) {
    ComplexField f = random_smooth(g, seed);
    ComplexField back = fourier_inverse(fourier_forward(f));
    CHECK(max_pointwise_error(f.values, back.values) <= 1e-12 * norm_linf(f));
  }
}

TEST_CASE("gaussian transform pair") {
  auto g = make_grid(10.0, 256);
  SpectralField F = fourier_forward(gaussian_field(g));
  double err = 0.0;
  for (std::size_t j = 0; j < g->n_points; ++j) {
    const double xi = g->xi_samples[j];
    err = std::max(err, std::abs(F.values[j] - cplx(std::exp(-0.5 * xi * xi), 0.0)));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("modulated gaussian shifts the spectrum") {
  auto g = make_grid(10.0, 256);
  const double v0 = 16.0 * g->dxi;  // on-grid modulation stays periodic
  ComplexField f = modulate(gaussian_field(g), v0);
  SpectralField F = fourier_forward(f);
  double err = 0.0;
  for (std::size_t j = 0; j < g->n_points; ++j) {
    const double xi = g->xi_samples[j];
    err = std::max(err, std::abs(F.values[j] - cplx(std::exp(-0.5 * (xi - v0) * (xi - v0)), 0.0)));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("parseval identity") {
  auto g = make_grid(25.0, 1024);
  for (unsigned seed : {11u, 12u, 13u, 14u}) {
    ComplexField f = random_smooth(g, seed);
    const double nx = norm_l2(f);
    const double nxi = norm_l2(fourier_forward(f));
    CHECK(std::abs(nx - nxi) <= 1e-12 * nx);
  }
}

TEST_CASE("norm oracles on the unit gaussian") {
  auto g = make_grid(12.0, 512);
  ComplexField f = gaussian_field(g);
  const double pi14 = std::pow(M_PI, 0.25);
  CHECK(std::abs(norm_l2(f) - pi14) <= 1e-10);

  // ||x f|| = pi^{1/4}/sqrt(2), so H^{0,1} = sqrt(3/2)*pi^{1/4}.
  CHECK(std::abs(norm_h01(f) - std::sqrt(1.5) * pi14) <= 1e-10);

  ComplexField xf = f;
  for (std::size_t k = 0; k < g->n_points; ++k) xf.values[k] *= g->x_samples[k];
  CHECK(std::abs(norm_l2(xf) - pi14 / std::sqrt(2.0)) <= 1e-10);
}

TEST_CASE("sobolev norm") {
  auto g = make_grid(12.0, 512);
  SpectralField F = fourier_forward(gaussian_field(g));
  // ||f||_{H^1}^2 = ||f||^2 + ||f'||^2 = sqrt(pi) + sqrt(pi)/2 for the unit gaussian.
  CHECK(std::abs(sobolev_norm(F, 1.0) - std::sqrt(1.5 * std::sqrt(M_PI))) <= 1e-8);
  CHECK(std::abs(sobolev_norm(F, 0.0) - norm_l2(F)) <= 1e-12);
  CHECK_THROWS_AS(sobolev_norm(F, -0.1), config_error);
  CHECK_THROWS_AS(sobolev_norm(F, 2.5), config_error);
}

TEST_CASE("apply_L at time zero multiplies by x") {
  auto g = make_grid(12.0, 512);
  ComplexField f = gaussian_field(g, 0.0);
  ComplexField lf = apply_L(f);
  double err = 0.0;
  for (std::size_t k = 0; k < g->n_points; ++k)
    err = std::max(err, std::abs(lf.values[k] - g->x_samples[k] * f.values[k]));
  CHECK(err <= 1e-12);
}

TEST_CASE("apply_L on the gaussian at t=1 gives (1-i) x u") {
  auto g = make_grid(12.0, 512);
  ComplexField f = gaussian_field(g, 1.0);
  ComplexField lf = apply_L(f);
  double err = 0.0;
  for (std::size_t k = 0; k < g->n_points; ++k) {
    const double x = g->x_samples[k];
    err = std::max(err, std::abs(lf.values[k] - cplx(1.0, -1.0) * x * f.values[k]));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("apply_L commutes with modulation up to the boost term") {
  auto g = make_grid(24.0, 1024);
  const double t = 2.5;
  const double c = 24.0 * g->dxi;
  for (unsigned seed : {5u, 6u}) {
    ComplexField u = random_smooth(g, seed);
    u.time = t;
    ComplexField lhs = apply_L(modulate(u, c));
    ComplexField lu = apply_L(u);
    ComplexField rhs = modulate(lu, c);
    ComplexField mu = modulate(u, c);
    double err = 0.0;
    for (std::size_t k = 0; k < g->n_points; ++k)
      err = std::max(err, std::abs(lhs.values[k] - (rhs.values[k] - c * t * mu.values[k])));
    CHECK(err <= 1e-10 * std::max(1.0, norm_linf(lhs)));
  }
}

TEST_CASE("boundary mass fraction") {
  auto g = make_grid(10.0, 256);
  ComplexField f = gaussian_field(g);
  CHECK(boundary_mass_fraction(f) <= 1e-12);

  ComplexField edge = make_field(g);
  for (std::size_t k = 0; k < g->n_points; ++k) {
    const double x = g->x_samples[k];
    edge.values[k] = std::exp(-0.5 * (x - 9.5) * (x - 9.5) / 0.01);
  }
  CHECK(boundary_mass_fraction(edge) > 0.5);
}

TEST_CASE("spectral shift matches the closed form") {
  auto g = make_grid(16.0, 512);
  ComplexField f = gaussian_field(g);
  const double a = 1.3751;  // deliberately off-grid
  ComplexField sf = shift(f, a);
  double err = 0.0;
  for (std::size_t k = 0; k < g->n_points; ++k) {
    const double x = g->x_samples[k];
    err = std::max(err, std::abs(sf.values[k] - cplx(std::exp(-0.5 * (x - a) * (x - a)), 0.0)));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("band-limited evaluation at off-grid points") {
  auto g = make_grid(16.0, 512);
  ComplexField f = gaussian_field(g);
  std::vector<double> pts = {0.0, 0.31, -2.7183, 5.5551, -9.0001};
  auto vals = evaluate_at(f, pts);
  for (std::size_t p = 0; p < pts.size(); ++p)
    CHECK(std::abs(vals[p] - cplx(std::exp(-0.5 * pts[p] * pts[p]), 0.0)) <= 1e-12);
}

TEST_CASE("rough chirped data realizes its spectral formula") {
  auto g = make_grid(400.0, 16384);
  const double eps = 0.1, ca = 0.8, w = 0.01, b = 4.0;
  ComplexField u = rough_chirped_data(g, eps, ca, w, b);
  CHECK(u.time == 0.0);
  CHECK(std::abs(norm_linf(u) - eps) <= 1e-12);

  // Modulus and phase of u_hat must match the construction up to one real
  // positive normalization constant.
  SpectralField F = fourier_forward(u);
  std::size_t j0 = 0;  // index of xi = 0
  for (std::size_t j = 0; j < g->n_points; ++j)
    if (std::abs(g->xi_samples[j]) < 1e-12) j0 = j;
  const double scale = std::abs(F.values[j0]) /
                       (1.0 + ca * std::sqrt(w));
  double mod_err = 0.0, arg_err = 0.0;
  for (std::size_t j = 0; j < g->n_points; ++j) {
    const double xi = g->xi_samples[j];
    if (std::abs(xi) > 4.0) continue;
    const double mag = std::exp(-0.5 * xi * xi) +
                       ca * std::pow(xi * xi + w * w, 0.25) * std::exp(-xi * xi);
    const double phase = b * (0.25 * std::sqrt(M_PI) * xi * std::erf(xi) +
                              0.5 * std::exp(-xi * xi));
    const cplx want = scale * mag * std::polar(1.0, phase);
    mod_err = std::max(mod_err, std::abs(std::abs(F.values[j]) - std::abs(want)));
    arg_err = std::max(arg_err, std::abs(F.values[j] - want));
  }
  CHECK(mod_err <= 1e-10 * scale);
  CHECK(arg_err <= 1e-10 * scale);

  // The square-root cusp is really there: well above the mollification
  // scale the modulus grows like sqrt(xi), dwarfing the envelope's
  // quadratic change over the same distance.
  const std::size_t jc = j0 + static_cast<std::size_t>(0.05 / g->dxi);
  const double inc = std::abs(F.values[jc]) - std::abs(F.values[j0]);
  const double xi_c = g->xi_samples[jc];
  CHECK(inc > 0.7 * scale * ca * (std::sqrt(xi_c) - std::sqrt(w)));

  // Even frequency profile means an even (complex) field, and the tails
  // (which die like e^{-2 w |x|} in mass) are negligible at this box size.
  double even_err = 0.0;
  for (std::size_t k = 1; k < g->n_points; ++k)
    even_err = std::max(even_err,
                        std::abs(u.values[k] - u.values[g->n_points - k]));
  CHECK(even_err <= 1e-11);
  CHECK(boundary_mass_fraction(u) <= 1e-8);
}

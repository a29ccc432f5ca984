#include "nlscat/synth.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "nlscat/fft.hpp"
#include "nlscat/field_ops.hpp"

namespace nlscat {

ComplexField gaussian_data(GridPtr grid, double amplitude, double width) {
  ComplexField f = make_field(grid);
  const double s2 = 2.0 * width * width;
  for (std::size_t k = 0; k < grid->n_points; ++k) {
    const double x = grid->x_samples[k];
    f.values[k] = amplitude * std::exp(-x * x / s2);
  }
  return f;
}

ComplexField free_gaussian(GridPtr grid, double time) {
  ComplexField f = make_field(grid, time);
  const cplx z(1.0, time);
  const cplx pref = 1.0 / std::sqrt(z);
  for (std::size_t k = 0; k < grid->n_points; ++k) {
    const double x = grid->x_samples[k];
    f.values[k] = pref * std::exp(-x * x / (2.0 * z));
  }
  return f;
}

ComplexField soliton_data(GridPtr grid, double a, double time) {
  ComplexField f = make_field(grid, time);
  const cplx phase = std::polar(1.0, 0.5 * a * a * time);
  for (std::size_t k = 0; k < grid->n_points; ++k)
    f.values[k] = a / std::cosh(a * grid->x_samples[k]) * phase;
  return f;
}

ComplexField rough_chirped_data(GridPtr grid, double amplitude, double cusp_amp,
                                double mollify, double chirp) {
  SpectralField F;
  F.grid = grid;
  F.time = 0.0;
  F.values.resize(grid->n_points);
  for (std::size_t j = 0; j < grid->n_points; ++j) {
    const double xi = grid->xi_samples[j];
    const double mag =
        std::exp(-0.5 * xi * xi) +
        cusp_amp * std::pow(xi * xi + mollify * mollify, 0.25) *
            std::exp(-xi * xi);
    // antiderivative pair of the curvature chirp * xi^2 e^{-xi^2}
    const double phase = chirp * (0.25 * std::sqrt(M_PI) * xi * std::erf(xi) +
                                  0.5 * std::exp(-xi * xi));
    F.values[j] = mag * std::polar(1.0, phase);
  }
  ComplexField u = fourier_inverse(F);
  const double scale = amplitude / norm_linf(u);
  for (cplx& z : u.values) z *= scale;
  return u;
}

ComplexField random_smooth_field(GridPtr grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> cen(-0.1 * grid->half_length,
                                             0.1 * grid->half_length);
  std::uniform_real_distribution<double> wid(0.8, 1.8);
  std::uniform_real_distribution<double> freq(-2.0, 2.0);
  ComplexField f = make_field(grid);
  for (int b = 0; b < 6; ++b) {
    const cplx a(amp(rng), amp(rng));
    const double c = cen(rng), s = wid(rng), k0 = freq(rng);
    for (std::size_t k = 0; k < grid->n_points; ++k) {
      const double x = grid->x_samples[k];
      f.values[k] += a * std::exp(-0.5 * (x - c) * (x - c) / (s * s)) *
                     std::polar(1.0, k0 * x);
    }
  }
  return f;
}

}  // namespace nlscat

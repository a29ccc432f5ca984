#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace nlscat {

using cplx = std::complex<double>;

// Uniform periodic grid on [-half_length, half_length).
//   x_samples[k]  = -half_length + k*dx,          dx = 2*half_length/n_points
//   xi_samples[j] = (j - n_points/2)*pi/half_length   (covers [-pi/dx, pi/dx))
// n_points must be a power of two >= 16 so transforms stay cheap and spacings
// are exact binary fractions for round box sizes.
struct Grid {
  double half_length = 0.0;
  std::size_t n_points = 0;
  double dx = 0.0;
  double dxi = 0.0;
  std::vector<double> x_samples;
  std::vector<double> xi_samples;
};

using GridPtr = std::shared_ptr<const Grid>;

// Throws config_error unless n_points is a power of two >= 16 and half_length > 0.
GridPtr make_grid(double half_length, std::size_t n_points);

// Complex samples on a grid at a fixed time (time is carried so packet-frame
// operations know which frame they act in).
struct ComplexField {
  GridPtr grid;
  double time = 0.0;
  std::vector<cplx> values;
};

// Fourier coefficients on the same grid's xi_samples.
struct SpectralField {
  GridPtr grid;
  double time = 0.0;
  std::vector<cplx> values;
};

ComplexField make_field(GridPtr grid, double time = 0.0);

}  // namespace nlscat

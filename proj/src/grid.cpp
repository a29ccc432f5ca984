#include "nlscat/grid.hpp"

#include <cmath>

#include "nlscat/errors.hpp"

namespace nlscat {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

GridPtr make_grid(double half_length, std::size_t n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw config_error("make_grid: half_length must be positive and finite");
  if (!is_power_of_two(n_points) || n_points < 16)
    throw config_error("make_grid: n_points must be a power of two >= 16");

  auto g = std::make_shared<Grid>();
  g->half_length = half_length;
  g->n_points = n_points;
  g->dx = 2.0 * half_length / static_cast<double>(n_points);
  g->dxi = M_PI / half_length;
  g->x_samples.resize(n_points);
  g->xi_samples.resize(n_points);
  const double nyq = static_cast<double>(n_points / 2);
  for (std::size_t k = 0; k < n_points; ++k) {
    g->x_samples[k] = -half_length + static_cast<double>(k) * g->dx;
    g->xi_samples[k] = (static_cast<double>(k) - nyq) * g->dxi;
  }
  return g;
}

ComplexField make_field(GridPtr grid, double time) {
  ComplexField f;
  f.grid = std::move(grid);
  f.time = time;
  f.values.assign(f.grid->n_points, cplx(0.0, 0.0));
  return f;
}

}  // namespace nlscat

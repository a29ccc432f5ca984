#pragma once

#include "nlscat/grid.hpp"

namespace nlscat {

// amplitude * exp(-x^2 / (2 width^2)) at t = 0.
ComplexField gaussian_data(GridPtr grid, double amplitude, double width = 1.0);

// Exact free-flow evolution of exp(-x^2/2):
//   u(t,x) = (1 + i t)^{-1/2} exp(-x^2 / (2 (1 + i t))).
ComplexField free_gaussian(GridPtr grid, double time);

// Standing soliton of the focusing cubic equation (lambda = -1):
//   u(t,x) = a sech(a x) exp(i a^2 t / 2).
ComplexField soliton_data(GridPtr grid, double a, double time);

// Sum of 6 modulated Gaussian bumps.  Bumps stay many widths away from the
// box edge so fields are periodic-smooth to machine precision and spectra
// carry no near-Nyquist wrap-around mass.
ComplexField random_smooth_field(GridPtr grid, unsigned seed);

// Initial data at the regularity edge of the weighted class: the Fourier
// magnitude carries a square-root cusp at xi = 0, mollified at scale
// `mollify`, under a Gaussian envelope,
//   |u_hat(xi)| = e^{-xi^2/2} + cusp_amp (xi^2 + mollify^2)^{1/4} e^{-xi^2},
// and the Fourier phase has curvature chirp * xi^2 e^{-xi^2}: flat at the
// cusp, convex on its shoulders.  Sup-normalized to `amplitude`.
//
// The cusp makes the packet-approximation and ODE-residual errors decay at
// their slowest admissible power laws instead of the faster rates smooth
// data shows, and the chirp gives the weighted energy ||Lu|| a visible
// nonlinear growth trend; both effects stay resolved on the grid as long as
// t^{-1/2} remains large against `mollify`.
ComplexField rough_chirped_data(GridPtr grid, double amplitude,
                                double cusp_amp = 0.8, double mollify = 0.01,
                                double chirp = 4.0);

}  // namespace nlscat

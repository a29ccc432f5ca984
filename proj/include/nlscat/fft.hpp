#pragma once

#include "nlscat/grid.hpp"

namespace nlscat {

// Transform convention: F(xi) = (2*pi)^{-1/2} * integral e^{-i*x*xi} f(x) dx,
// discretised by the rectangle rule on x_samples.  With x_samples starting at
// -half_length the DFT picks up the phase e^{+i*half_length*xi_j} = (-1)^(j - n/2).
// Round trip is exact up to rounding and Parseval holds exactly:
//   dx * sum |f|^2 = dxi * sum |F|^2.
SpectralField fourier_forward(const ComplexField& f);
ComplexField fourier_inverse(const SpectralField& F);

// Unscaled in-place DFT helpers used where the full field wrapper is overkill
// (n arbitrary, not just power of two).  Sign convention matches the above:
// forward uses e^{-i...}.
void dft_forward_raw(std::vector<cplx>& data);
void dft_inverse_raw(std::vector<cplx>& data);  // unnormalised (no 1/n)

}  // namespace nlscat

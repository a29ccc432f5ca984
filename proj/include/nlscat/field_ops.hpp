#pragma once

#include "nlscat/grid.hpp"

namespace nlscat {

// L2, sup and weighted norms via rectangle-rule quadrature on the grid.
double norm_l2(const ComplexField& f);
double norm_linf(const ComplexField& f);
// sqrt(||f||_L2^2 + ||x f||_L2^2)
double norm_h01(const ComplexField& f);
double norm_l2(const SpectralField& F);

// sqrt( integral (1+xi^2)^s |F(xi)|^2 dxi ).  Throws config_error outside
// s in [0, 2]; higher weights amplify grid-scale noise past usefulness.
double sobolev_norm(const SpectralField& F, double s);

// Fraction of mass sitting in |x| > 0.9*half_length.  Long-time runs monitor
// this; the phase-space analysis silently degrades once the box edge is hit.
double boundary_mass_fraction(const ComplexField& f);

// Threshold above which boundary mass triggers a warning (relative to total).
inline constexpr double kBoundaryTolerance = 1e-10;

// (x + i t d/dx) u with the derivative taken spectrally and t = u.time.
// At time 0 this degenerates to x*u.  Warns on stderr when boundary mass
// exceeds tol: the multiplier x is a sawtooth on the periodic box, so the
// operator is only meaningful for interior-supported fields.
ComplexField apply_L(const ComplexField& u, double boundary_tol = kBoundaryTolerance);

// Spectral d/dx.
ComplexField derivative(const ComplexField& u);

// e^{i c x} u(x).  c should be a multiple of dxi to stay periodic on the box.
ComplexField modulate(const ComplexField& u, double c);

// u(x - a) via the spectral shift e^{-i a xi}; exact for grid-representable
// fields, any real a.
ComplexField shift(const ComplexField& u, double a);

// Band-limited evaluation of u at arbitrary points: sums the Fourier series
// over modes that carry all but `tail_tol` of the spectral mass (symmetric
// window around xi = 0).  Exact for well-resolved fields.
std::vector<cplx> evaluate_at(const ComplexField& u, const std::vector<double>& points,
                              double tail_tol = 1e-24);
std::vector<cplx> evaluate_at(const SpectralField& U, const std::vector<double>& points,
                              double tail_tol = 1e-24);

bool all_finite(const std::vector<cplx>& v);
inline bool all_finite(const ComplexField& f) { return all_finite(f.values); }
inline bool all_finite(const SpectralField& f) { return all_finite(f.values); }

}  // namespace nlscat

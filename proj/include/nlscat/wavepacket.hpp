#pragma once

#include <vector>

#include "nlscat/grid.hpp"

namespace nlscat {

// Gaussian packet envelope chi(y) = (2pi)^{-1/2} exp(-y^2/2), normalized so
// that its integral is 1.
double packet_kernel(double y);
double packet_kernel_prime(double y);

// chi_1(s) := e^{i s^2/2} FT[e^{i y^2/2} chi](s)
//           = (2pi)^{-1/2} (1-i)^{-1/2} e^{-(1-i) s^2/4},
// the profile of the packet's Fourier transform:
//   FT[Psi_v](xi) = sqrt(t) e^{-i t xi^2/2} chi_1(sqrt(t)(xi - v)).
// Its integral is e^{i pi/4} (a Fresnel phase), of modulus 1.
cplx packet_kernel_fourier(double s);
// conj(chi_1(-s)), the kernel of the Fourier-side overlap below.
cplx packet_kernel_fourier_conj(double s);

// Psi_v(t,x) = chi((x - vt)/sqrt(t)) e^{i x^2/(2t)}.  Requires t > 0.
// Solves the free equation up to
//   (i d_t + d_xx/2) Psi_v = (2t)^{-1} e^{i x^2/(2t)} d_y[chi' + i y chi].
ComplexField packet(GridPtr grid, double t, double v);

// gamma(t, v) = int u(t,x) conj(Psi_v(t,x)) dx on a grid of velocities.
struct GammaField {
  double time = 0.0;
  std::vector<double> v_samples;
  std::vector<cplx> values;
};

// sqrt(dv * sum |gamma|^2) over the (uniformly spaced) velocity grid.
double norm_l2_v(const GammaField& g);
double norm_linf_v(const GammaField& g);

// Three equivalent routes to gamma; all require u.time > 0 and
// |v| * t <= 0.8 L for every velocity (keeps the periodization error of the
// Gaussian overlap at rounding level).
//
// Direct x-space overlap, truncated to |x - vt| <= 10 sqrt(t).
GammaField gamma_direct(const ComplexField& u, const std::vector<double>& v_samples);
// Spectral convolution: gamma(v) = int FT[e^{-i phi} u](xi) K(xi) e^{i v t xi} dxi
// with K(xi) = sqrt(t/(2pi)) e^{-t xi^2/2}.
GammaField gamma_conv(const ComplexField& u, const std::vector<double>& v_samples);
// Fourier-side overlap:
// gamma(v) = sqrt(t) int e^{i t xi^2/2} u_hat(xi) conj(chi_1)(sqrt(t)(v - xi)) dxi.
GammaField gamma_fourier(const ComplexField& u, const std::vector<double>& v_samples);

// d gamma / dv = -sqrt(t) int u e^{-i phi} chi'((x - vt)/sqrt(t)) dx,
// computed with the differentiated kernel rather than finite differences.
GammaField gamma_derivative_v(const ComplexField& u, const std::vector<double>& v_samples);

// d(v) = u(t, vt) - t^{-1/2} e^{i v^2 t/2} gamma(t, v): how far the solution
// is from its packet summary along rays x = vt.  u(t, vt) is evaluated
// band-limited off the grid.
struct PhysicalDiff {
  double time = 0.0;
  std::vector<double> v_samples;
  std::vector<cplx> values;
  double l2 = 0.0;    // sqrt(dv sum |d|^2)
  double linf = 0.0;
};
PhysicalDiff diff_physical(const ComplexField& u, const GammaField& g);

// D(xi) = u_hat(xi) - e^{i pi/4} e^{-i t xi^2/2} gamma(t, xi) at the spectral
// points inside [v_lo, v_hi]; gamma is produced by the convolution route.
// The constant e^{i pi/4} is the DC gain of the smoothing kernel (integral of
// chi_1); with it the difference is pure smoothing error and decays in t.
struct SpectralDiff {
  double time = 0.0;
  std::vector<double> xi_samples;
  std::vector<cplx> values;
  double l2 = 0.0;    // sqrt(dxi sum |D|^2)
  double linf = 0.0;
};
SpectralDiff diff_fourier(const ComplexField& u, double v_lo, double v_hi);

// The packet ODE is gamma' = -i lambda t^{-1} |gamma|^2 gamma + R.  Given
// gamma at the ends of a symmetric triple (t - d, t + d), approximates R at
// the midpoint by a centered difference, with gamma(t) taken as the average
// of the end values.
GammaField residual_ode(const GammaField& g_prev, const GammaField& g_next, int lambda);

// Exact decomposition of the same residual at a single time:
//   R1 = -(2t^2)^{-1} int [sqrt(t) chi'(y) - i (x - vt) chi(y)] e^{-i phi} Lu dx,
//   R2 = -i lambda int u conj(Psi_v) (|u|^2 - |u(t,vt)|^2) dx,
//   R3 = -i lambda gamma (|u(t,vt)|^2 - t^{-1} |gamma|^2),
// with y = (x - vt)/sqrt(t), phi = x^2/(2t); R1 + R2 + R3 = R identically.
struct ResidualParts {
  double time = 0.0;
  std::vector<double> v_samples;
  std::vector<cplx> gamma;
  std::vector<cplx> r1, r2, r3;
  std::vector<cplx> total;  // r1 + r2 + r3
};
ResidualParts residual_decomposed(const ComplexField& u, const std::vector<double>& v_samples,
                                  int lambda);

}  // namespace nlscat

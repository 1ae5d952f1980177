#pragma once

// Numeric 1-D metaplectic engine: applies the unitary operator attached to a
// 2x2 unimodular matrix to a sampled wavefunction via the oscillatory kernel
// quadrature, at effective Planck constant h = 1/(2 pi N).
//
// For M = [[a,b],[c,d]] with b away from 0 the kernel is
//   (2 pi i h b)^{-1/2} exp[(i/(2 h b)) (d x^2 - 2 x y + a y^2)]
// integrated against f(y); small-b inputs are factored through the rotation
// J = [[0,-1],[1,0]]. The output phase is normalized so that the overlap of
// the image of a reference Gaussian with that same Gaussian is real positive.

#include "pqcat/schwartz.hpp"

#include <Eigen/Dense>

#include <complex>

namespace pqcat {

struct EngineGrid {
    double x0 = 0.0;
    double dx = 1.0;
    int count = 0;
    double length() const { return count * dx; }
};

// Step 1/(N m) with m = max(1, round(256/N)), window [-L/2, L/2). The grid
// contains every point j/N + k, which lets projector coefficients be read off
// samples directly.
EngineGrid make_engine_grid(int bigN, double window = 8.0);

Sampled1D sample_on_grid(const SchwartzSpec& f, const EngineGrid& g);

// Raw kernel quadrature, principal-branch square roots, no phase locking.
Sampled1D metaplectic_apply_raw(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN);

// Raw transform followed by the reference-Gaussian phase lock.
Sampled1D metaplectic_apply_1d(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN);

// Adjoint of metaplectic_apply_1d (conjugate-transposed kernel, same lock).
Sampled1D metaplectic_adjoint_1d(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN);

// Exact quantum translation on samples: (rho f)(y) =
// e^{2 pi i N (p0 y - q0 p0 / 2)} f(y - q0); q0 must be a grid multiple.
Sampled1D rho_translate_sampled(const Sampled1D& f, int bigN, double q0, double p0);

}  // namespace pqcat

#pragma once

// Concrete rapidly-decaying test functions on R^n used as the smooth factor
// of observables: per-axis Gaussians or Hermite functions, with a lattice-sum
// truncation radius validated against the Gaussian tail.

#include "pqcat/errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pqcat {

struct SchwartzAxis {
    enum class Kind { gaussian, hermite };
    Kind kind = Kind::gaussian;
    double center = 0.0;
    double width = 0.3;
    int hermite_k = 0;  // used when kind == hermite

    double eval(double y) const;
};

struct SchwartzSpec {
    std::vector<SchwartzAxis> axes;           // one per dimension
    int truncation_radius = 8;                // lattice sums run over |k_i| <= radius

    static SchwartzSpec gaussian(int n, double center, double width, int radius = 8);
    static SchwartzSpec gaussian(const Eigen::VectorXd& center, double width, int radius = 8);
    static SchwartzSpec hermite(int n, int k, double center, double width, int radius = 8);

    int dim() const { return static_cast<int>(axes.size()); }
    double eval(const Eigen::VectorXd& y) const;
    double eval1(double y) const;  // n = 1 shortcut

    // Largest |f| on |y - center| >= r along each axis; used to verify that
    // the truncation radius keeps lattice-sum tails below `tol`.
    void check_truncation(double tol = 1e-12) const;
};

// Uniform complex samples f(x0 + i dx), i = 0..size-1, for the 1-D engine.
struct Sampled1D {
    double x0 = 0.0;
    double dx = 1.0;
    Eigen::VectorXcd v;

    int size() const { return static_cast<int>(v.size()); }
    double x_at(int i) const { return x0 + i * dx; }
    // Catmull-Rom interpolation; returns 0 outside the sampled window.
    std::complex<double> value_at(double x) const;
};

// <f, g> = integral f conj(g), rectangle rule on the common grid.
std::complex<double> sampled_inner(const Sampled1D& f, const Sampled1D& g);

Sampled1D sample_schwartz(const SchwartzSpec& f, double x0, double dx, int count);

}  // namespace pqcat

#include "pqcat/schwartz.hpp"

#include <cmath>
#include <complex>

namespace pqcat {

namespace {

// Normalized Hermite function psi_k(x) = H_k(x) e^{-x^2/2} / (pi^{1/4} sqrt(2^k k!)).
double hermite_function(int k, double x) {
    const double gauss = std::exp(-0.5 * x * x);
    double h0 = std::pow(M_PI, -0.25);
    if (k == 0) return h0 * gauss;
    // Recurrence on the normalized functions:
    // psi_{m+1} = (x sqrt(2/(m+1))) psi_m - sqrt(m/(m+1)) psi_{m-1}
    double prev = h0;
    double cur = std::sqrt(2.0) * x * h0;
    for (int m = 1; m < k; ++m) {
        double next = x * std::sqrt(2.0 / (m + 1)) * cur - std::sqrt(double(m) / (m + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur * gauss;
}

}  // namespace

double SchwartzAxis::eval(double y) const {
    const double u = (y - center) / width;
    if (kind == Kind::gaussian) {
        return std::pow(M_PI * width * width, -0.25) * std::exp(-0.5 * u * u);
    }
    return hermite_function(hermite_k, u) / std::sqrt(width);
}

SchwartzSpec SchwartzSpec::gaussian(int n, double center, double width, int radius) {
    SchwartzSpec s;
    s.axes.assign(n, SchwartzAxis{SchwartzAxis::Kind::gaussian, center, width, 0});
    s.truncation_radius = radius;
    return s;
}

SchwartzSpec SchwartzSpec::gaussian(const Eigen::VectorXd& center, double width, int radius) {
    SchwartzSpec s;
    for (int i = 0; i < center.size(); ++i) {
        s.axes.push_back(SchwartzAxis{SchwartzAxis::Kind::gaussian, center[i], width, 0});
    }
    s.truncation_radius = radius;
    return s;
}

SchwartzSpec SchwartzSpec::hermite(int n, int k, double center, double width, int radius) {
    SchwartzSpec s;
    s.axes.assign(n, SchwartzAxis{SchwartzAxis::Kind::hermite, center, width, k});
    s.truncation_radius = radius;
    return s;
}

double SchwartzSpec::eval(const Eigen::VectorXd& y) const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= axes[i].eval(y[i]);
    return v;
}

double SchwartzSpec::eval1(double y) const { return axes.at(0).eval(y); }

void SchwartzSpec::check_truncation(double tol) const {
    for (const auto& ax : axes) {
        // Sum the envelope over lattice points beyond the truncation radius
        // measured from the center; the envelope is monotone there.
        double from = truncation_radius - std::abs(ax.center) - 1.0;
        if (from < 1.0) throw TruncationTooSmall("truncation radius does not clear the center");
        double tail = 0.0;
        for (int j = 0; j < 40; ++j) {
            tail += std::abs(ax.eval(ax.center + from + j)) + std::abs(ax.eval(ax.center - from - j));
        }
        if (tail > tol) throw TruncationTooSmall("lattice tail above tolerance");
    }
}

std::complex<double> Sampled1D::value_at(double x) const {
    const double u = (x - x0) / dx;
    const int i = static_cast<int>(std::floor(u));
    if (i < 1 || i + 2 >= size()) {
        // Outside (or at the very edge of) the window the functions handled
        // here have decayed below tolerance.
        return {0.0, 0.0};
    }
    const double t = u - i;
    const std::complex<double> p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
    return 0.5 * (2.0 * p1 + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (t * t) +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (t * t * t));
}

std::complex<double> sampled_inner(const Sampled1D& f, const Sampled1D& g) {
    if (f.size() != g.size() || std::abs(f.x0 - g.x0) > 1e-12 || std::abs(f.dx - g.dx) > 1e-15) {
        throw Error("sampled_inner: mismatched grids");
    }
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < f.size(); ++i) acc += f.v[i] * std::conj(g.v[i]);
    return acc * f.dx;
}

Sampled1D sample_schwartz(const SchwartzSpec& f, double x0, double dx, int count) {
    if (f.dim() != 1) throw Error("sample_schwartz: 1-D only");
    Sampled1D s;
    s.x0 = x0;
    s.dx = dx;
    s.v.resize(count);
    for (int i = 0; i < count; ++i) s.v[i] = f.eval1(x0 + i * dx);
    return s;
}

}  // namespace pqcat

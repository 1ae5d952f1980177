#include "pqcat/metaplectic.hpp"

#include "pqcat/errors.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace pqcat {

namespace {

constexpr double two_pi = 2.0 * M_PI;
constexpr double kernel_b_min = 0.125;

double planck(int bigN) { return 1.0 / (two_pi * bigN); }

Eigen::Matrix2d jmat() {
    Eigen::Matrix2d j;
    j << 0, -1, 1, 0;
    return j;
}

// sqrt(h) width reference Gaussian used only to pin the output phase.
Sampled1D reference_gaussian(const Sampled1D& like, int bigN) {
    const double h = planck(bigN);
    Sampled1D g;
    g.x0 = like.x0;
    g.dx = like.dx;
    g.v.resize(like.size());
    const double norm = std::pow(M_PI * h, -0.25);
    for (int i = 0; i < like.size(); ++i) {
        const double x = like.x_at(i);
        g.v[i] = norm * std::exp(-0.5 * x * x / h);
    }
    return g;
}

void nyquist_guard(const Eigen::Matrix2d& m2, const Sampled1D& f, double h) {
    const double a = m2(0, 0), b = m2(0, 1), d = m2(1, 1);
    const double half = std::max(std::abs(f.x0), std::abs(f.x0 + (f.size() - 1) * f.dx));
    const double rate = half * (std::abs(a) + std::abs(d) + 2.0) / (h * std::abs(b));
    if (rate * f.dx > 0.9 * M_PI) {
        throw GridTooCoarse("metaplectic kernel oscillates beyond the sample rate");
    }
}

// Single-kernel quadrature for |b| away from zero:
// (2 pi i h b)^{-1/2} integral exp[(i/(2hb)) (d x^2 - 2 x y + a y^2)] f(y) dy.
Sampled1D kernel_apply(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN, bool adjoint) {
    const double h = planck(bigN);
    nyquist_guard(m2, f, h);
    const double a = m2(0, 0), b = m2(0, 1), d = m2(1, 1);
    const std::complex<double> ihb(0.0, two_pi * h * b);
    std::complex<double> amp = 1.0 / std::sqrt(ihb);
    if (adjoint) amp = std::conj(amp);

    const int g = f.size();
    const double r = 1.0 / (2.0 * h * b);
    // Adjoint kernel K*(y,x) = conj(K(x,y)): quadratic coefficients swap
    // roles and every phase flips sign.
    const double sign = adjoint ? -1.0 : 1.0;
    std::vector<std::complex<double>> cx(g), cy(g);
    for (int i = 0; i < g; ++i) {
        const double x = f.x_at(i);
        cx[i] = std::polar(1.0, sign * r * (adjoint ? a : d) * x * x);
        cy[i] = std::polar(1.0, sign * r * (adjoint ? d : a) * x * x) * f.v[i];
    }

    Sampled1D out;
    out.x0 = f.x0;
    out.dx = f.dx;
    out.v.resize(g);
    const double w = -2.0 * r * sign;
    for (int i = 0; i < g; ++i) {
        const double x = f.x_at(i);
        // Incremental rotation for e^{i w x y} along the y sweep; the drift
        // over one row is ~g*eps, far below the quadrature error.
        std::complex<double> cur = std::polar(1.0, w * x * f.x0);
        const std::complex<double> step = std::polar(1.0, w * x * f.dx);
        std::complex<double> acc{0.0, 0.0};
        for (int k = 0; k < g; ++k) {
            acc += cur * cy[k];
            cur *= step;
        }
        out.v[i] = amp * f.dx * cx[i] * acc;
    }
    return out;
}

struct Factor {
    Eigen::Matrix2d m;
};

// Decompose m2 into kernel-friendly factors (each with |b| >= kernel_b_min),
// ordered so that the product of factors equals m2.
std::vector<Factor> decompose(const Eigen::Matrix2d& m2) {
    const Eigen::Matrix2d j = jmat();
    const Eigen::Matrix2d jinv = -j;
    if (std::abs(m2(0, 1)) >= kernel_b_min) return {{m2}};
    if (std::abs(m2(0, 0)) >= kernel_b_min) {
        // m2 = (m2 j^{-1}) j
        return {{m2 * jinv}, {j}};
    }
    if (std::abs(m2(1, 1)) >= kernel_b_min) {
        // m2 = j^{-1} (j m2)
        return {{jinv}, {j * m2}};
    }
    // Unimodularity forces |c| large here: m2 = j^{-1} (j m2 j) j^{-1}.
    return {{jinv}, {j * m2 * j}, {jinv}};
}

Sampled1D apply_factors(const std::vector<Factor>& fs, const Sampled1D& f, int bigN,
                        bool adjoint) {
    Sampled1D cur = f;
    if (!adjoint) {
        // Rightmost factor acts first.
        for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
            cur = kernel_apply(it->m, cur, bigN, false);
        }
    } else {
        for (auto it = fs.begin(); it != fs.end(); ++it) {
            cur = kernel_apply(it->m, cur, bigN, true);
        }
    }
    return cur;
}

std::complex<double> lock_factor(const Eigen::Matrix2d& m2, const Sampled1D& like, int bigN) {
    const Sampled1D g0 = reference_gaussian(like, bigN);
    const Sampled1D img = apply_factors(decompose(m2), g0, bigN, false);
    const std::complex<double> z = sampled_inner(img, g0);
    if (std::abs(z) < 1e-6) throw IllConditioned("metaplectic phase lock degenerate");
    return std::conj(z) / std::abs(z);
}

void check_mass(const Sampled1D& in, const Sampled1D& out) {
    const double a = std::sqrt(std::abs(sampled_inner(in, in)));
    const double b = std::sqrt(std::abs(sampled_inner(out, out)));
    if (a > 1e-12 && std::abs(b / a - 1.0) > 1e-4) {
        throw GridTooCoarse("metaplectic image leaks outside the sample window");
    }
}

}  // namespace

EngineGrid make_engine_grid(int bigN, double window) {
    if (bigN < 1) throw Error("make_engine_grid: N >= 1 required");
    const int m = std::max(1, static_cast<int>(std::llround(256.0 / bigN)));
    EngineGrid g;
    g.dx = 1.0 / (bigN * m);
    g.count = static_cast<int>(std::llround(window * bigN * m));
    g.x0 = -0.5 * window;
    return g;
}

Sampled1D sample_on_grid(const SchwartzSpec& f, const EngineGrid& g) {
    return sample_schwartz(f, g.x0, g.dx, g.count);
}

Sampled1D metaplectic_apply_raw(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN) {
    if (std::abs(m2.determinant() - 1.0) > 1e-10) {
        throw NotSymplectic("metaplectic engine requires det = 1");
    }
    Sampled1D out = apply_factors(decompose(m2), f, bigN, false);
    check_mass(f, out);
    return out;
}

Sampled1D metaplectic_apply_1d(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN) {
    Sampled1D out = metaplectic_apply_raw(m2, f, bigN);
    const std::complex<double> ell = lock_factor(m2, f, bigN);
    out.v *= ell;
    return out;
}

Sampled1D metaplectic_adjoint_1d(const Eigen::Matrix2d& m2, const Sampled1D& f, int bigN) {
    if (std::abs(m2.determinant() - 1.0) > 1e-10) {
        throw NotSymplectic("metaplectic engine requires det = 1");
    }
    Sampled1D out = apply_factors(decompose(m2), f, bigN, true);
    const std::complex<double> ell = lock_factor(m2, f, bigN);
    out.v *= std::conj(ell);
    return out;
}

Sampled1D rho_translate_sampled(const Sampled1D& f, int bigN, double q0, double p0) {
    const int shift = static_cast<int>(std::llround(q0 / f.dx));
    if (std::abs(shift * f.dx - q0) > 1e-9) {
        throw Error("rho_translate_sampled: q0 is not a grid multiple");
    }
    Sampled1D out;
    out.x0 = f.x0;
    out.dx = f.dx;
    out.v = Eigen::VectorXcd::Zero(f.size());
    for (int i = 0; i < f.size(); ++i) {
        const int src = i - shift;
        if (src < 0 || src >= f.size()) continue;
        const double y = f.x_at(i);
        out.v[i] = std::polar(1.0, two_pi * bigN * (p0 * y - 0.5 * q0 * p0)) * f.v[src];
    }
    return out;
}

}  // namespace pqcat

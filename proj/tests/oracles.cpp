#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pqcat::oracle {

namespace {

constexpr double two_pi = 2.0 * M_PI;

std::complex<double> turns(double t) { return std::polar(1.0, two_pi * t); }

// Local copies of sigma and Q on int64 vectors, so the parity oracle does not
// route through the library forms it is meant to check.
std::int64_t sig2(const IVec& x, const IVec& y) {
    const int n = static_cast<int>(x.size()) / 2;
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) s += x[n + i] * y[i] - y[n + i] * x[i];
    return s;
}

std::int64_t q2(const IVec& x) {
    const int n = static_cast<int>(x.size()) / 2;
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) s += x[i] * x[n + i];
    return s;
}

bool mod2_zero(std::int64_t v) { return ((v % 2) + 2) % 2 == 0; }

int flat_of(const Eigen::VectorXi& j, int bigN) {
    int f = 0;
    for (int k = 0; k < j.size(); ++k) f = f * bigN + j[k];
    return f;
}

Eigen::VectorXi unflat_of(int flat, int n, int bigN) {
    Eigen::VectorXi j(n);
    for (int k = n - 1; k >= 0; --k) {
        j[k] = flat % bigN;
        flat /= bigN;
    }
    return j;
}

}  // namespace

IVec parity_bruteforce(const IMat& m, std::uint64_t seed, int samples) {
    const int n2 = static_cast<int>(m.rows());
    std::mt19937_64 eng(seed);

    std::vector<IVec> probes;
    for (int i = 0; i < n2; ++i) {
        IVec e = IVec::Zero(n2);
        e[i] = 1;
        probes.push_back(e);
    }
    for (int s = 0; s < samples; ++s) {
        IVec w(n2);
        for (int i = 0; i < n2; ++i) w[i] = static_cast<std::int64_t>(eng() % 21) - 10;
        probes.push_back(w);
    }

    // The defining relation Q(M^{-1} w) - Q(w) = sigma(c, w) mod 2 for all w
    // is equivalent, via w = M u, to Q(u) - Q(M u) = sigma(c, M u) mod 2.
    std::vector<IVec> survivors;
    for (int mask = 0; mask < (1 << n2); ++mask) {
        IVec c(n2);
        for (int i = 0; i < n2; ++i) c[i] = (mask >> i) & 1;
        bool ok = true;
        for (const IVec& u : probes) {
            const IVec mu = m * u;
            if (!mod2_zero(q2(u) - q2(mu) - sig2(c, mu))) {
                ok = false;
                break;
            }
        }
        if (ok) survivors.push_back(c);
    }
    if (survivors.size() != 1) return IVec();
    return survivors[0];
}

std::vector<RatVec> thetas_bruteforce(const IMat& m, int bigN) {
    const int n2 = static_cast<int>(m.rows());
    const IVec phi = parity_bruteforce(m, 12345);
    if (phi.size() == 0) throw Error("parity oracle failed");

    IMat imm = IMat::Identity(n2, n2) - m;
    double detd = imm.cast<double>().determinant();
    const std::int64_t dd = std::llabs(std::llround(detd));
    if (dd == 0) throw Error("I - M singular");
    const std::int64_t den = 2 * dd;

    double total = std::pow(static_cast<double>(den), n2);
    if (total > 1e7) throw Error("theta brute force grid too large");

    std::vector<RatVec> out;
    std::vector<std::int64_t> idx(n2, 0);
    while (true) {
        // candidate theta = idx / den
        bool ok = true;
        for (int r = 0; r < n2 && ok; ++r) {
            Rat acc = 0;
            for (int c = 0; c < n2; ++c) acc += Rat(imm(r, c)) * Rat(idx[c], den);
            acc -= Rat(bigN * phi[r], 2);
            ok = frac(acc) == 0;
        }
        if (ok) {
            RatVec th(n2);
            for (int c = 0; c < n2; ++c) th[c] = Rat(idx[c], den);
            out.push_back(th);
        }
        int k = n2 - 1;
        while (k >= 0 && idx[k] == den - 1) {
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
        ++idx[k];
    }
    std::sort(out.begin(), out.end(), [](const RatVec& a, const RatVec& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    });
    return out;
}

QuasiComb basis_comb(int n, int bigN, const Eigen::VectorXi& j, const Eigen::VectorXd& theta) {
    QuasiComb comb;
    comb.a.resize(n);
    comb.beta.resize(n);
    for (int k = 0; k < n; ++k) {
        comb.a[k] = (j[k] - theta[k]) / bigN;
        comb.beta[k] = -theta[n + k];
    }
    comb.c = std::pow(static_cast<double>(bigN), -0.5 * n);
    return comb;
}

QuasiComb rho_apply(int bigN, const Eigen::VectorXd& x, const QuasiComb& comb) {
    const int n = static_cast<int>(comb.a.size());
    const Eigen::VectorXd q = x.head(n), p = x.tail(n);
    QuasiComb out;
    out.a = comb.a + q;
    out.beta = comb.beta + bigN * p;
    out.c = comb.c * turns(bigN * (p.dot(comb.a) + 0.5 * p.dot(q)));
    return out;
}

std::optional<std::pair<int, std::complex<double>>> expand_in_basis(int n, int bigN,
                                                                    const Eigen::VectorXd& theta,
                                                                    const QuasiComb& comb) {
    Eigen::VectorXi i(n);
    Eigen::VectorXd l(n);
    for (int k = 0; k < n; ++k) {
        const double raw = bigN * comb.a[k] + theta[k];
        const double r = std::round(raw);
        if (std::abs(raw - r) > 1e-9) return std::nullopt;
        std::int64_t ir = static_cast<std::int64_t>(r);
        std::int64_t im = ((ir % bigN) + bigN) % bigN;
        i[k] = static_cast<int>(im);
        l[k] = static_cast<double>((ir - im) / bigN);

        const double braw = comb.beta[k] + theta[n + k];
        if (std::abs(braw - std::round(braw)) > 1e-9) return std::nullopt;
    }
    const std::complex<double> coeff =
        comb.c * turns(-comb.beta.dot(l)) * std::pow(static_cast<double>(bigN), 0.5 * n);
    return std::make_pair(flat_of(i, bigN), coeff);
}

Eigen::MatrixXcd translation_matrix_bruteforce(const QuantumSpace& space,
                                               const Eigen::VectorXd& x) {
    const int n = space.n, bigN = space.bigN, d = space.dim();
    const Eigen::VectorXd theta = space.theta_real();
    Eigen::VectorXd target(2 * n);
    for (int k = 0; k < 2 * n; ++k) {
        double t = theta[k] - bigN * x[k];
        t -= std::floor(t);
        if (t >= 1.0) t = 0.0;
        target[k] = t;
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int jf = 0; jf < d; ++jf) {
        const QuasiComb comb = rho_apply(bigN, x, basis_comb(n, bigN, unflat_of(jf, n, bigN), theta));
        const auto hit = expand_in_basis(n, bigN, target, comb);
        if (!hit) throw Error("comb does not expand in the target basis");
        out(hit->first, jf) = hit->second;
    }
    return out;
}

std::complex<double> schwartz_inner(const SchwartzSpec& f, const SchwartzSpec& g) {
    if (f.dim() != g.dim()) throw Error("dimension mismatch");
    double prod = 1.0;
    const int steps = 4800;  // Simpson, even count
    const double lo = -14.0, hi = 14.0, h = (hi - lo) / steps;
    for (int ax = 0; ax < f.dim(); ++ax) {
        double acc = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double xx = lo + i * h;
            const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * f.axes[ax].eval(xx) * g.axes[ax].eval(xx);
        }
        prod *= acc * h / 3.0;
    }
    return {prod, 0.0};
}

Eigen::MatrixXd random_expanding(int n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Eigen::MatrixXd a(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) a(r, c) = u(eng);
        }
        if (std::abs(a.determinant()) < 1e-3) continue;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.inverse());
        const double norm_inv = svd.singularValues()[0];
        return a * (1.1 * norm_inv);
    }
}

bool phase_differences_match(std::vector<double> a, std::vector<double> b, double tol) {
    auto diffs = [](const std::vector<double>& v) {
        std::vector<double> d;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                double x = std::abs(v[i] - v[j]);
                x = std::fmod(x, two_pi);
                d.push_back(std::min(x, two_pi - x));
            }
        }
        std::sort(d.begin(), d.end());
        return d;
    };
    const std::vector<double> da = diffs(a), db = diffs(b);
    if (da.size() != db.size()) return false;
    for (std::size_t i = 0; i < da.size(); ++i) {
        if (std::abs(da[i] - db[i]) > tol) return false;
    }
    return true;
}

}  // namespace pqcat::oracle

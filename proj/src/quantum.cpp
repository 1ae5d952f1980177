#include "pqcat/quantum.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>

namespace pqcat {

namespace {

constexpr double two_pi = 2.0 * M_PI;

std::complex<double> turns(double t) { return std::polar(1.0, two_pi * t); }

long long checked_round(double v, const char* what) {
    const double r = std::llround(v);
    if (std::abs(v - r) > 1e-7) throw Error(std::string("expected integer in ") + what);
    return static_cast<long long>(r);
}

// Distance between two angles measured in turns. Comparing frac() outputs
// directly is wrong at the wraparound (0.999... vs 0).
double circle_dist(double a, double b) {
    double d = std::abs(mod1(a) - mod1(b));
    return std::min(d, 1.0 - d);
}

double circle_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) worst = std::max(worst, circle_dist(a[i], b[i]));
    return worst;
}

}  // namespace

QuantumSpace QuantumSpace::make(int n, int bigN, RatVec theta) {
    if (n < 1 || bigN < 1) throw Error("QuantumSpace: need n >= 1 and N >= 1");
    if (static_cast<int>(theta.size()) != 2 * n) throw Error("QuantumSpace: theta size != 2n");
    QuantumSpace s;
    s.n = n;
    s.bigN = bigN;
    s.theta.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) s.theta[i] = frac(theta[i]);
    return s;
}

QuantumSpace QuantumSpace::make_zero(int n, int bigN) {
    return make(n, bigN, RatVec(2 * n, Rat(0)));
}

int QuantumSpace::dim() const {
    int d = 1;
    for (int i = 0; i < n; ++i) d *= bigN;
    return d;
}

Eigen::VectorXd QuantumSpace::theta_real() const {
    Eigen::VectorXd t(2 * n);
    for (int i = 0; i < 2 * n; ++i) t[i] = to_double(theta[i]);
    return t;
}

Eigen::VectorXi QuantumSpace::unflatten(int flat) const {
    Eigen::VectorXi j(n);
    for (int i = n - 1; i >= 0; --i) {
        j[i] = flat % bigN;
        flat /= bigN;
    }
    return j;
}

int QuantumSpace::flatten(const Eigen::VectorXi& j) const {
    int flat = 0;
    for (int i = 0; i < n; ++i) {
        int ji = j[i] % bigN;
        if (ji < 0) ji += bigN;
        flat = flat * bigN + ji;
    }
    return flat;
}

TranslationResult translation_matrix(const QuantumSpace& space, const Eigen::VectorXd& x) {
    const int n = space.n;
    const int bigN = space.bigN;
    const int d = space.dim();
    if (x.size() != 2 * n) throw Error("translation_matrix: x size != 2n");

    const Eigen::VectorXd theta = space.theta_real();
    const Eigen::VectorXd q = x.head(n), p = x.tail(n);
    const Eigen::VectorXd th1 = theta.head(n), th2 = theta.tail(n);

    Eigen::VectorXd target(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        target[i] = mod1(theta[i] - bigN * x[i]);
        // mod1 of a value that is an integer up to rounding noise can land
        // just below 1; snap so the representative matches frac().
        if (target[i] > 1.0 - 1e-9) target[i] = 0.0;
    }

    // r1 = theta'_1 - (theta_1 - N q) is integral by construction.
    Eigen::VectorXi r1(n);
    for (int i = 0; i < n; ++i) {
        r1[i] = static_cast<int>(checked_round(target[i] - th1[i] + bigN * q[i], "translation r1"));
    }

    TranslationResult res;
    res.target_theta = target;
    res.mat = Eigen::MatrixXcd::Zero(d, d);

    for (int src = 0; src < d; ++src) {
        const Eigen::VectorXi j = space.unflatten(src);
        Eigen::VectorXi i_idx(n);
        Eigen::VectorXd l(n);
        for (int ax = 0; ax < n; ++ax) {
            const int big = j[ax] + r1[ax];
            int ii = big % bigN;
            if (ii < 0) ii += bigN;
            i_idx[ax] = ii;
            l[ax] = (big - ii) / bigN;
        }
        // Phase in turns: <p, j - theta_1> + N <p,q>/2 + <theta_2 - N p, l>.
        double ph = 0.5 * bigN * p.dot(q);
        for (int ax = 0; ax < n; ++ax) {
            ph += p[ax] * (j[ax] - th1[ax]);
            ph += (th2[ax] - bigN * p[ax]) * l[ax];
        }
        res.mat(space.flatten(i_idx), src) = turns(ph);
    }
    return res;
}

Eigen::MatrixXcd t_translation(const QuantumSpace& space) {
    const Eigen::VectorXd x = space.theta_real() / space.bigN;
    TranslationResult r = translation_matrix(space, x);
    if (circle_dist(r.target_theta, Eigen::VectorXd::Zero(r.target_theta.size())) > 1e-9) {
        throw Error("t_translation: target theta not zero");
    }
    return r.mat;
}

Eigen::VectorXcd projector_P(const QuantumSpace& space, const SchwartzSpec& f) {
    const int n = space.n, bigN = space.bigN;
    if (f.dim() != n) throw Error("projector_P: dimension mismatch");
    f.check_truncation();
    const Eigen::VectorXd theta = space.theta_real();
    const Eigen::VectorXd th1 = theta.head(n), th2 = theta.tail(n);
    const int d = space.dim();
    const int r = f.truncation_radius;

    Eigen::VectorXcd coef(d);
    const double scale = std::pow(static_cast<double>(bigN), -0.5 * n);
    Eigen::VectorXi k(n);
    for (int flat = 0; flat < d; ++flat) {
        const Eigen::VectorXi j = space.unflatten(flat);
        std::complex<double> acc{0.0, 0.0};
        k.setConstant(-r);
        while (true) {
            double ph = 0.0;
            Eigen::VectorXd y(n);
            for (int ax = 0; ax < n; ++ax) {
                ph += th2[ax] * k[ax];
                y[ax] = k[ax] + (j[ax] - th1[ax]) / bigN;
            }
            acc += turns(ph) * f.eval(y);
            int ax = n - 1;
            while (ax >= 0 && k[ax] == r) k[ax--] = -r;
            if (ax < 0) break;
            ++k[ax];
        }
        coef[flat] = scale * acc;
    }
    return coef;
}

Eigen::VectorXcd projector_P_sampled(const QuantumSpace& space, const Sampled1D& f) {
    if (space.n != 1) throw Error("projector_P_sampled: n = 1 only");
    const int bigN = space.bigN;
    const Eigen::VectorXd theta = space.theta_real();
    Eigen::VectorXcd coef(bigN);
    const double scale = std::pow(static_cast<double>(bigN), -0.5);
    for (int j = 0; j < bigN; ++j) {
        std::complex<double> acc{0.0, 0.0};
        const double base = (j - theta[0]) / bigN;
        const int klo = static_cast<int>(std::ceil(f.x0 - base));
        const int khi = static_cast<int>(std::floor(f.x0 + (f.size() - 1) * f.dx - base));
        for (int k = klo; k <= khi; ++k) {
            const double pos = base + k;
            const double ui = (pos - f.x0) / f.dx;
            const int idx = static_cast<int>(std::llround(ui));
            if (std::abs(ui - idx) > 1e-6) {
                throw Error("projector_P_sampled: grid misses lattice point");
            }
            acc += turns(theta[1] * k) * f.v[idx];
        }
        coef[j] = scale * acc;
    }
    return coef;
}

std::complex<double> pair_U(const QuantumSpace& space, int j_flat, const SchwartzSpec& f,
                            const BundlePoint& p) {
    const int n = space.n, bigN = space.bigN;
    for (const auto& th : space.theta) {
        if (th != 0) throw Error("pair_U: theta = 0 required");
    }
    if (f.dim() != n) throw Error("pair_U: dimension mismatch");
    if (p.dim2n() != 2 * n) throw Error("pair_U: point dimension mismatch");

    const Eigen::VectorXi j = space.unflatten(j_flat);
    const Eigen::VectorXd q = p.x.head(n), mom = p.x.tail(n);

    double ph = bigN * p.s - 0.5 * bigN * q.dot(mom);
    for (int ax = 0; ax < n; ++ax) ph += mom[ax] * j[ax];

    // Per-axis lattice window: teeth f(k + j/N - q) within the decay support,
    // capped by the declared truncation radius.
    Eigen::VectorXi lo(n), hi(n);
    for (int ax = 0; ax < n; ++ax) {
        const double shift = j[ax] / static_cast<double>(bigN) - q[ax];
        const double c = f.axes[ax].center - shift;
        const double half = 7.5 * f.axes[ax].width + 1.0;
        lo[ax] = static_cast<int>(std::ceil(c - half));
        hi[ax] = static_cast<int>(std::floor(c + half));
        lo[ax] = std::max(lo[ax], static_cast<int>(std::floor(c)) - f.truncation_radius);
        hi[ax] = std::min(hi[ax], static_cast<int>(std::ceil(c)) + f.truncation_radius);
    }

    std::complex<double> acc{0.0, 0.0};
    Eigen::VectorXi k = lo;
    while (true) {
        double kp = 0.0;
        Eigen::VectorXd y(n);
        for (int ax = 0; ax < n; ++ax) {
            kp += mom[ax] * k[ax];
            y[ax] = k[ax] + j[ax] / static_cast<double>(bigN) - q[ax];
        }
        acc += turns(bigN * kp) * f.eval(y);
        int ax = n - 1;
        while (ax >= 0 && k[ax] == hi[ax]) {
            k[ax] = lo[ax];
            --ax;
        }
        if (ax < 0) break;
        ++k[ax];
    }
    return turns(ph) * acc;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
    const int d = static_cast<int>(u.rows());
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).norm();
}

double egorov_residual(const CatMap& m, const QuantumSpace& space, const Eigen::MatrixXcd& u) {
    const int n2 = 2 * space.n;
    const Eigen::MatrixXd md = m.real();
    double worst = 0.0;
    for (int i = 0; i < n2; ++i) {
        Eigen::VectorXd ei = Eigen::VectorXd::Zero(n2);
        ei[i] = 1.0 / space.bigN;
        const Eigen::MatrixXcd a = translation_matrix(space, ei).mat;
        const Eigen::MatrixXcd b = translation_matrix(space, md * ei).mat;
        worst = std::max(worst, (u * a - b * u).norm());
    }
    return worst;
}

Eigen::MatrixXcd quantum_cat_map(const CatMap& m, const QuantumSpace& space) {
    const int n = space.n, bigN = space.bigN, d = space.dim();
    if (m.n != n) throw Error("quantum_cat_map: dimension mismatch");

    // Quantization condition: (I - M) theta = (N/2) phi mod Z^{2n}, checked
    // exactly in rational arithmetic.
    {
        const ParityVector pv = parity_vector(m);
        for (int i = 0; i < 2 * n; ++i) {
            Rat acc(0);
            for (int k = 0; k < 2 * n; ++k) {
                const Rat mik(static_cast<long long>(i == k) -
                              static_cast<long long>(m.mat(i, k)));
                acc += mik * space.theta[k];
            }
            acc -= Rat(bigN * pv.phi[i], 2);
            if (frac(acc) != 0) {
                throw QuantizationConditionViolated("theta violates the quantization condition");
            }
        }
    }

    const Eigen::MatrixXd md = m.real();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd stacked(2 * n * d * d, d * d);
    for (int i = 0; i < 2 * n; ++i) {
        Eigen::VectorXd ei = Eigen::VectorXd::Zero(2 * n);
        ei[i] = 1.0 / bigN;
        const TranslationResult a = translation_matrix(space, ei);
        const TranslationResult b = translation_matrix(space, md * ei);
        if (circle_dist(a.target_theta, space.theta_real()) > 1e-9 ||
            circle_dist(b.target_theta, space.theta_real()) > 1e-9) {
            throw QuantizationConditionViolated("translations do not preserve the space");
        }
        stacked.middleRows(i * d * d, d * d) =
            Eigen::kroneckerProduct(a.mat.transpose(), id) - Eigen::kroneckerProduct(id, b.mat);
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smin = sv[d * d - 1];
    const double snext = d * d >= 2 ? sv[d * d - 2] : 1.0;
    // The stacked difference of unit-norm operators has top singular value
    // O(1) whenever the system is nondegenerate; flooring the scale keeps the
    // d = 1 case (where the whole stack is the residual) from comparing the
    // residual against itself.
    const double scale0 = std::max(1.0, sv[0]);
    if (smin > 1e-10 * scale0 || snext < 1e-4 * scale0) {
        throw IntertwinerNotUnique("intertwiner nullspace is not one-dimensional");
    }

    Eigen::MatrixXcd u0 =
        Eigen::Map<const Eigen::MatrixXcd>(svd.matrixV().col(d * d - 1).data(), d, d);

    // Polar projection onto the unitary group.
    Eigen::JacobiSVD<Eigen::MatrixXcd> polar(u0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXcd u = polar.matrixU() * polar.matrixV().adjoint();

    for (int r = 0; r < d; ++r) {
        const std::complex<double> z = u(r, 0);
        if (std::abs(z) > 1e-8) {
            u *= std::conj(z) / std::abs(z);
            break;
        }
    }
    if (unitarity_defect(u) > tol_unitary) throw NotUnitary("intertwiner failed unitarity");
    return u;
}

std::vector<double> eigenphases(const Eigen::MatrixXcd& u) {
    if (unitarity_defect(u) > tol_unitary) throw NotUnitary("eigenphases: input not unitary");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
    std::vector<double> phases;
    phases.reserve(u.rows());
    for (int i = 0; i < u.rows(); ++i) {
        double a = std::arg(es.eigenvalues()[i]);
        if (a < 0) a += two_pi;
        if (a >= two_pi) a -= two_pi;
        phases.push_back(a);
    }
    std::sort(phases.begin(), phases.end());
    return phases;
}

std::vector<double> phase_difference_multiset(const std::vector<double>& phases) {
    std::vector<double> out;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        for (std::size_t j = i + 1; j < phases.size(); ++j) {
            double dd = std::abs(phases[i] - phases[j]);
            dd = std::min(dd, two_pi - dd);
            out.push_back(dd);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pqcat

#include "pqcat/symplectic.hpp"

#include "pqcat/smith.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace pqcat {

namespace {

IntMat to_intmat(const IMat& m) {
    IntMat a(m.rows(), IntVec(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) a[i][j] = Int(m(i, j));
    return a;
}

double op_norm(const Eigen::MatrixXd& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

}  // namespace

IMat jsig(int n) {
    IMat j = IMat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        j(i, n + i) = -1;
        j(n + i, i) = 1;
    }
    return j;
}

std::int64_t symplectic_form(const IVec& x, const IVec& y) {
    const int n = static_cast<int>(x.size()) / 2;
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) s += x(n + i) * y(i) - y(n + i) * x(i);
    return s;
}

double symplectic_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(x.size()) / 2;
    double s = 0;
    for (int i = 0; i < n; ++i) s += x(n + i) * y(i) - y(n + i) * x(i);
    return s;
}

std::int64_t quadratic_form(const IVec& x) {
    const int n = static_cast<int>(x.size()) / 2;
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) s += x(i) * x(n + i);
    return s;
}

double quadratic_form(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size()) / 2;
    double s = 0;
    for (int i = 0; i < n; ++i) s += x(i) * x(n + i);
    return s;
}

bool is_symplectic(const IMat& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0) return false;
    const int d = static_cast<int>(m.rows());
    const int n = d / 2;
    IntMat a = to_intmat(m), j = to_intmat(jsig(n));
    IntMat mt(d, IntVec(d));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) mt[i][k] = a[k][i];
    IntMat prod = mul(mul(mt, j), a);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            if (prod[i][k] != j[i][k]) return false;
    return true;
}

bool is_hyperbolic(const IMat& m) {
    Eigen::MatrixXd md = m.cast<double>();
    Eigen::EigenSolver<Eigen::MatrixXd> es(md, false);
    for (int i = 0; i < md.rows(); ++i) {
        if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) <= tol_hyperbolic) return false;
    }
    return true;
}

CatMap CatMap::from_matrix(const IMat& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
        throw NotSymplectic("matrix must be square with even dimension");
    if (!is_symplectic(m)) throw NotSymplectic("matrix is not symplectic");
    if (!is_hyperbolic(m)) throw NotHyperbolic("matrix has unit-modulus spectrum");
    CatMap c;
    c.n = static_cast<int>(m.rows()) / 2;
    c.mat = m;
    return c;
}

IMat CatMap::inverse() const {
    // M^{-1} = Jsig^{-1} M^T Jsig, exact over the integers.
    IMat j = jsig(n);
    IMat jinv = -j;  // Jsig^2 = -I
    return jinv * mat.transpose() * j;
}

Eigen::MatrixXd CatMap::real() const { return mat.cast<double>(); }

IMat CatMap::block_a() const { return mat.topLeftCorner(n, n); }
IMat CatMap::block_b() const { return mat.topRightCorner(n, n); }
IMat CatMap::block_c() const { return mat.bottomLeftCorner(n, n); }
IMat CatMap::block_d() const { return mat.bottomRightCorner(n, n); }

Eigen::VectorXd ConnectionParameter::kappa_tilde_real() const {
    Eigen::VectorXd v(kappa_tilde.size());
    for (std::size_t i = 0; i < kappa_tilde.size(); ++i) v(i) = to_double(kappa_tilde[i]);
    return v;
}

Eigen::VectorXd ConnectionParameter::kappa_real() const {
    Eigen::VectorXd v(kappa.size());
    for (std::size_t i = 0; i < kappa.size(); ++i) v(i) = to_double(kappa[i]);
    return v;
}

namespace {

IMat symplectic_inverse(const IMat& m) {
    const int n = static_cast<int>(m.rows()) / 2;
    IMat j = jsig(n);
    return (-j) * m.transpose() * j;
}

// Q(M^{-1} w) - Q(w) mod 2, the defect measured by phi_M.
std::int64_t parity_defect(const IMat& minv, const IVec& w) {
    IVec mw = minv * w;
    std::int64_t d = (quadratic_form(mw) - quadratic_form(w)) % 2;
    return d < 0 ? d + 2 : d;
}

}  // namespace

ParityVector parity_vector(const IMat& m) {
    const int n = static_cast<int>(m.rows()) / 2;
    IMat minv = symplectic_inverse(m);
    ParityVector out;
    out.phi = IVec::Zero(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        IVec e = IVec::Zero(2 * n);
        e(i) = 1;
        std::int64_t r = parity_defect(minv, e);
        // sigma(phi, e_i) = phi_{n+i} for i < n and -phi_{i-n} for i >= n.
        if (i < n)
            out.phi(n + i) = r;
        else
            out.phi(i - n) = r;
    }
    return out;
}

ParityVector parity_vector(const CatMap& m) { return parity_vector(m.mat); }

bool parity_defining_relation_check(const IMat& m, const ParityVector& phi,
                                    const std::vector<IVec>& ws) {
    IMat minv = symplectic_inverse(m);
    for (const IVec& w : ws) {
        std::int64_t lhs = parity_defect(minv, w);
        std::int64_t rhs = symplectic_form(phi.phi, w) % 2;
        if (rhs < 0) rhs += 2;
        if (lhs != rhs) return false;
    }
    return true;
}

bool parity_cocycle_check(const IMat& m, const IMat& mprime) {
    IVec pm = parity_vector(m).phi;
    IVec pmp = parity_vector(mprime).phi;

    IVec lhs = parity_vector(IMat(m * mprime)).phi;
    IVec rhs = pm + m * pmp;
    for (int i = 0; i < lhs.size(); ++i)
        if (((lhs(i) - rhs(i)) % 2 + 2) % 2 != 0) return false;

    IMat minv = symplectic_inverse(m);
    IVec lhs_inv = parity_vector(minv).phi;
    IVec rhs_inv = minv * pm;
    for (int i = 0; i < lhs_inv.size(); ++i)
        if (((lhs_inv(i) - rhs_inv(i)) % 2 + 2) % 2 != 0) return false;
    return true;
}

ConnectionParameter connection_parameter(const CatMap& m) {
    const int d = 2 * m.n;
    ParityVector phi = parity_vector(m);
    IntMat ima(d, IntVec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) ima[i][j] = Int((i == j ? 1 : 0) - m.mat(i, j));
    RatMat inv = inverse_rational(ima);
    RatVec half_phi(d);
    for (int i = 0; i < d; ++i) half_phi[i] = Rat(Int(phi.phi(i)), Int(2));
    ConnectionParameter out;
    out.kappa_tilde = mat_vec(inv, half_phi);
    out.kappa.resize(d);
    for (int i = 0; i < d; ++i) out.kappa[i] = frac(out.kappa_tilde[i]);
    return out;
}

double connection_pullback_residual(const CatMap& m, const ParityVector& phi,
                                    const Eigen::VectorXd& kappa_tilde) {
    // The lift pullback of alpha_kappa differs from alpha_kappa by
    // 2 pi i sigma(dx, c) with c = M^{-1} kappa - (1/2) M^{-1} phi - kappa.
    Eigen::MatrixXd minv = m.inverse().cast<double>();
    Eigen::VectorXd phid = phi.phi.cast<double>();
    Eigen::VectorXd c = minv * kappa_tilde - 0.5 * (minv * phid) - kappa_tilde;
    return c.norm();
}

namespace {

// Product of the real characteristic factors belonging to one half of the
// spectrum, applied to md and renormalized after every factor. Its kernel is
// that same half's generalized eigenspace, which stays well defined for
// defective (Jordan block) eigenvalues where eigenvector pairing breaks down.
Eigen::MatrixXd spectral_annihilator(const Eigen::MatrixXd& md, const Eigen::VectorXcd& eigs,
                                     bool stable_half) {
    const int d = static_cast<int>(md.rows());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd acc = id;
    for (int i = 0; i < eigs.size(); ++i) {
        const std::complex<double> l = eigs[i];
        if ((std::abs(l) < 1.0) != stable_half) continue;
        if (std::abs(l.imag()) <= 1e-12 * std::abs(l)) {
            acc = acc * (md - l.real() * id);
        } else if (l.imag() > 0.0) {
            acc = acc * (md * md - 2.0 * l.real() * md + std::norm(l) * id);
        }
        acc /= acc.norm();
    }
    return acc;
}

// Orthonormal basis of the k-dimensional kernel, with a gap check.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a, int k) {
    const int d = static_cast<int>(a.rows());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv[d - k] > 1e-7 * sv[0] || sv[d - k - 1] <= 1e-7 * sv[0]) {
        throw NotHyperbolic("unstable/stable splitting has wrong dimension");
    }
    return svd.matrixV().rightCols(k);
}

// Similarity S such that ||(S^{-1} A S)|| < 1 - margin, for rho(A) < 1.
// Real Schur, per-block balancing, then a geometric off-diagonal damping.
Eigen::MatrixXd contract_similarity(const Eigen::MatrixXd& a) {
    const int k = static_cast<int>(a.rows());
    Eigen::RealSchur<Eigen::MatrixXd> schur(a);
    Eigen::MatrixXd t = schur.matrixT(), q = schur.matrixU();

    // Block sizes along the diagonal (1 or 2).
    std::vector<int> block_of(k);
    {
        int b = 0;
        for (int i = 0; i < k;) {
            bool two = (i + 1 < k) && std::abs(t(i + 1, i)) > 1e-14 * (1.0 + std::abs(t(i, i)));
            block_of[i] = b;
            if (two) block_of[i + 1] = b;
            i += two ? 2 : 1;
            ++b;
        }
    }

    // Balance 2x2 blocks so their norm approaches the eigenvalue modulus.
    Eigen::VectorXd bal = Eigen::VectorXd::Ones(k);
    for (int i = 0; i + 1 < k; ++i) {
        if (block_of[i] != block_of[i + 1]) continue;
        double t12 = std::abs(t(i, i + 1)), t21 = std::abs(t(i + 1, i));
        if (t12 > 0 && t21 > 0) bal(i + 1) = std::sqrt(t12 / t21);
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) t(i, j) *= bal(j) / bal(i);

    double rho = 0.0;
    for (int i = 0; i < k; ++i) rho = std::max(rho, std::abs(schur.matrixT().eigenvalues()(i)));
    const double target = std::min(0.995, 0.5 * (1.0 + rho));

    double delta = 1.0;
    Eigen::MatrixXd scaled = t;
    for (int iter = 0; iter < 200 && op_norm(scaled) > target; ++iter) {
        delta *= 0.7;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                scaled(i, j) = t(i, j) * std::pow(delta, block_of[j] - block_of[i]);
    }

    Eigen::VectorXd dscale(k);
    for (int i = 0; i < k; ++i) dscale(i) = bal(i) * std::pow(delta, block_of[i]);
    return q * dscale.asDiagonal();
}

}  // namespace

NormalForm normal_form(const CatMap& m) {
    const int n = m.n, d = 2 * n;
    Eigen::MatrixXd md = m.real();
    Eigen::EigenSolver<Eigen::MatrixXd> es(md);
    if (es.info() != Eigen::Success) throw Error("normal_form: eigensolver failed");

    const Eigen::VectorXcd eigs = es.eigenvalues();
    Eigen::MatrixXd du = kernel_basis(spectral_annihilator(md, eigs, false), n);
    Eigen::MatrixXd ds = kernel_basis(spectral_annihilator(md, eigs, true), n);

    // Normalize so that sigma(ds_j, du_i) = delta_ij, giving D^T Jsig D = Jsig.
    Eigen::MatrixXd jd = jsig(n).cast<double>();
    Eigen::MatrixXd g = ds.transpose() * jd * du;
    du = du * g.inverse();

    Eigen::MatrixXd dmat(d, d);
    dmat.leftCols(n) = du;
    dmat.rightCols(n) = ds;

    Eigen::MatrixXd t = dmat.inverse() * md * dmat;
    Eigen::MatrixXd e0 = t.topLeftCorner(n, n);

    // Re-basis the expanding block until it contracts backwards in operator
    // norm, not merely in spectral radius.
    Eigen::MatrixXd e0inv = e0.inverse();
    if (op_norm(e0inv) >= 0.999) {
        Eigen::MatrixXd s = contract_similarity(e0inv);
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
        x.topLeftCorner(n, n) = s;
        x.bottomRightCorner(n, n) = s.inverse().transpose();
        dmat = dmat * x;
        t = dmat.inverse() * md * dmat;
    }

    NormalForm out;
    out.d = dmat;
    out.e = t.topLeftCorner(n, n);
    Eigen::MatrixXd model = Eigen::MatrixXd::Zero(d, d);
    model.topLeftCorner(n, n) = out.e;
    model.bottomRightCorner(n, n) = out.e.inverse().transpose();
    out.residual = (t - model).norm();
    out.symplectic_defect = (dmat.transpose() * jd * dmat - jd).norm();

    if (op_norm(out.e.inverse()) >= 1.0)
        throw NotExpanding("normal_form: could not make E expanding in operator norm");
    if (std::abs(out.e.determinant()) <= 1.0)
        throw NotExpanding("normal_form: |det E| <= 1");
    return out;
}

std::vector<RatVec> quantization_thetas(const CatMap& m, int bigN) {
    const int d = 2 * m.n;
    IntMat a(d, IntVec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a[i][j] = Int((i == j ? 1 : 0) - m.mat(i, j));

    Int count = det(a);
    if (count < 0) count = -count;
    if (count == 0) throw NotHyperbolic("I - M singular");
    if (count > 100000) throw Error("quantization_thetas: |det(I - M)| too large to enumerate");

    ParityVector phi = parity_vector(m);
    RatVec b(d);
    for (int i = 0; i < d; ++i) b[i] = Rat(Int(bigN) * Int(phi.phi(i)), Int(2));

    SmithForm snf = smith_normal_form(a);
    // c = U b; solutions eta_i = (c_i + z_i) / d_i, theta = frac(V eta).
    RatVec c(d, Rat(0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) c[i] += Rat(snf.u[i][j]) * b[j];

    std::vector<RatVec> thetas;
    std::vector<Int> z(d, 0);
    while (true) {
        RatVec eta(d);
        for (int i = 0; i < d; ++i) eta[i] = (c[i] + Rat(z[i])) / Rat(snf.diag[i]);
        RatVec theta(d, Rat(0));
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) theta[i] += Rat(snf.v[i][j]) * eta[j];
            theta[i] = frac(theta[i]);
        }
        thetas.push_back(theta);

        int pos = d - 1;
        while (pos >= 0 && z[pos] + 1 >= snf.diag[pos]) { z[pos] = 0; --pos; }
        if (pos < 0) break;
        z[pos] += 1;
    }

    // Exactness guard: (I - M) theta - b must be integral.
    for (const RatVec& theta : thetas) {
        for (int i = 0; i < d; ++i) {
            Rat acc = -b[i];
            for (int j = 0; j < d; ++j) acc += Rat(a[i][j]) * theta[j];
            if (frac(acc) != 0) throw Error("quantization_thetas: inexact solution");
        }
    }

    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    if (Int(thetas.size()) != count) throw Error("quantization_thetas: wrong solution count");
    return thetas;
}

CatMap random_hyperbolic(int n, std::uint64_t seed, int word_length) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> entry(-2, 2);
    std::uniform_int_distribution<int> kind(0, 2);
    const std::int64_t overflow_cap = std::int64_t(1) << 50;

    auto random_shear = [&](bool upper) {
        IMat s = IMat::Zero(n, n);
        bool nonzero = false;
        while (!nonzero) {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    std::int64_t v = entry(rng);
                    s(i, j) = v;
                    s(j, i) = v;
                    nonzero = nonzero || v != 0;
                }
        }
        IMat g = IMat::Zero(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i) g(i, i) = 1;
        if (upper)
            g.topRightCorner(n, n) = s;
        else
            g.bottomLeftCorner(n, n) = s;
        return g;
    };

    for (int attempt = 0; attempt < 256; ++attempt) {
        IMat w = IMat::Zero(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i) w(i, i) = 1;
        bool overflow = false;
        for (int step = 0; step < word_length && !overflow; ++step) {
            int k = kind(rng);
            IMat g = (k == 2) ? jsig(n) : random_shear(k == 0);
            w = w * g;
            overflow = w.cwiseAbs().maxCoeff() > overflow_cap;
        }
        if (overflow) continue;
        if (!is_symplectic(w)) throw Error("random_hyperbolic: generator word not symplectic");
        if (is_hyperbolic(w)) return CatMap::from_matrix(w);
    }
    throw GenerationFailed("random_hyperbolic: no hyperbolic word found");
}

}  // namespace pqcat

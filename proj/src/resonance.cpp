#include "pqcat/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace pqcat {

namespace {

double op_norm2(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()[0];
}

// Sign applied to the quantum eigenphases when forming the combined set; the
// transfer operator pairs against the conjugated quantum matrix, which flips
// the phases. Verified against directly simulated correlation poles.
constexpr double quantum_phase_orientation = -1.0;

}  // namespace

std::vector<Eigen::VectorXi> monomials(int n, int k) {
    std::vector<Eigen::VectorXi> out;
    if (n == 1) {
        Eigen::VectorXi v(1);
        v[0] = k;
        out.push_back(v);
        return out;
    }
    for (int lead = k; lead >= 0; --lead) {
        for (const auto& rest : monomials(n - 1, k - lead)) {
            Eigen::VectorXi v(n);
            v[0] = lead;
            v.tail(n - 1) = rest;
            out.push_back(v);
        }
    }
    return out;
}

Eigen::MatrixXd homogeneous_matrix(const Eigen::MatrixXd& e, int k) {
    const int n = static_cast<int>(e.rows());
    if (e.cols() != n) throw Error("homogeneous_matrix: square matrix required");
    if (std::abs(e.determinant()) < 1e-12) throw Error("homogeneous_matrix: singular matrix");
    const Eigen::MatrixXd einv = e.inverse();

    const auto basis = monomials(n, k);
    const int dim = static_cast<int>(basis.size());
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < dim; ++i) {
        index.emplace(std::vector<int>(basis[i].data(), basis[i].data() + n), i);
    }

    using Poly = std::map<std::vector<int>, double>;
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        // Expand prod_i (sum_j einv(i,j) x_j)^{alpha_i}.
        Poly poly;
        poly[std::vector<int>(n, 0)] = 1.0;
        for (int var = 0; var < n; ++var) {
            for (int rep = 0; rep < basis[col][var]; ++rep) {
                Poly next;
                for (const auto& [expo, coef] : poly) {
                    for (int j = 0; j < n; ++j) {
                        const double c = coef * einv(var, j);
                        if (c == 0.0) continue;
                        std::vector<int> e2 = expo;
                        ++e2[j];
                        next[e2] += c;
                    }
                }
                poly.swap(next);
            }
        }
        for (const auto& [expo, coef] : poly) mat(index.at(expo), col) += coef;
    }
    return mat;
}

std::vector<BandSpectrum> lambda_spectrum(const Eigen::MatrixXd& e, int k_max) {
    const double norm_e = op_norm2(e);
    const double norm_einv = op_norm2(e.inverse());
    if (norm_einv >= 1.0) throw NotExpanding("||E^{-1}|| >= 1");

    std::vector<BandSpectrum> bands;
    for (int k = 0; k <= k_max; ++k) {
        BandSpectrum b;
        b.k = k;
        b.inner = std::pow(norm_e, -k);
        b.outer = std::pow(norm_einv, k);
        const Eigen::MatrixXd hk = homogeneous_matrix(e, k);
        Eigen::EigenSolver<Eigen::MatrixXd> es(hk, false);
        for (int i = 0; i < hk.rows(); ++i) b.eigenvalues.push_back(es.eigenvalues()[i]);
        std::sort(b.eigenvalues.begin(), b.eigenvalues.end(),
                  [](const std::complex<double>& a, const std::complex<double>& z) {
                      if (std::abs(a) != std::abs(z)) return std::abs(a) > std::abs(z);
                      return std::arg(a) < std::arg(z);
                  });
        bands.push_back(std::move(b));
    }
    return bands;
}

ResonancePrediction predicted_resonances(const CatMap& m, int bigN, int k_max) {
    const ParityVector pv = parity_vector(m);
    if (!pv.is_zero()) {
        throw ParityNonzero("prediction requires parity vector zero");
    }

    const NormalForm nf = normal_form(m);
    ResonancePrediction pred;
    pred.modulus_scale = std::pow(std::abs(nf.det_e()), -0.5);
    pred.bands = lambda_spectrum(nf.e, k_max);

    const QuantumSpace space = QuantumSpace::make_zero(m.n, bigN);
    const Eigen::MatrixXcd u = quantum_cat_map(m, space);
    pred.phases = eigenphases(u);

    for (const auto& band : pred.bands) {
        for (const auto& lam : band.eigenvalues) {
            for (double ph : pred.phases) {
                pred.combined.push_back(pred.modulus_scale * lam *
                                        std::polar(1.0, quantum_phase_orientation * ph));
            }
        }
    }
    std::sort(pred.combined.begin(), pred.combined.end(),
              [](const std::complex<double>& a, const std::complex<double>& z) {
                  if (std::abs(a) != std::abs(z)) return std::abs(a) > std::abs(z);
                  return std::arg(a) < std::arg(z);
              });
    return pred;
}

}  // namespace pqcat

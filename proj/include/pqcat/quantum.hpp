#pragma once

// Finite-dimensional quantum spaces H_{N,theta} of quasi-periodic
// distributions, quantum translations on them, the projector from Schwartz
// functions, the pointwise pairing U with the prequantum bundle, and the
// quantum cat map obtained as the unique translation intertwiner.
//
// Basis: e_j^theta with multi-index j in [0,N)^n flattened row-major
// (axis 0 is the most significant digit). Inner products are linear in the
// first argument: <f, g> = integral f conj(g).

#include "pqcat/prequantum.hpp"
#include "pqcat/rational.hpp"
#include "pqcat/schwartz.hpp"
#include "pqcat/symplectic.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pqcat {

inline constexpr double tol_unitary = 1e-10;

struct QuantumSpace {
    int n = 1;
    int bigN = 1;
    RatVec theta;  // exact representative in [0,1)^{2n}

    static QuantumSpace make(int n, int bigN, RatVec theta);
    static QuantumSpace make_zero(int n, int bigN);  // theta = 0

    int dim() const;  // N^n
    Eigen::VectorXd theta_real() const;
    Eigen::VectorXi unflatten(int flat) const;
    int flatten(const Eigen::VectorXi& j) const;
};

struct TranslationResult {
    Eigen::MatrixXcd mat;          // columns indexed by source basis
    Eigen::VectorXd target_theta;  // frac(theta - N x)
};

// Matrix of rho_N(x): H_{N,theta} -> H_{N,frac(theta - Nx)}.
TranslationResult translation_matrix(const QuantumSpace& space, const Eigen::VectorXd& x);

// T_{N,theta} = rho_N(theta/N): H_{N,theta} -> H_{N,0}.
Eigen::MatrixXcd t_translation(const QuantumSpace& space);

// Coefficients of P_{N,theta} f in the basis e_j^theta.
Eigen::VectorXcd projector_P(const QuantumSpace& space, const SchwartzSpec& f);

// Same coefficients for a grid-sampled 1-D function (n = 1 only). The sample
// lattice must contain the points k + (j - theta_1)/N.
Eigen::VectorXcd projector_P_sampled(const QuantumSpace& space, const Sampled1D& f);

// U_{N,0}(e_j^0 x f) evaluated at the bundle point p (theta = 0 required).
std::complex<double> pair_U(const QuantumSpace& space, int j_flat, const SchwartzSpec& f,
                            const BundlePoint& p);

// ||U* U - I||_F
double unitarity_defect(const Eigen::MatrixXcd& u);

// max_i || U A_i - B_i U || with A_i = rho_N(e_i/N), B_i = rho_N(M e_i / N).
double egorov_residual(const CatMap& m, const QuantumSpace& space, const Eigen::MatrixXcd& u);

// Unique-up-to-phase unitary with U A_i = B_i U; phase fixed by making the
// first nonzero entry of the first column real positive.
Eigen::MatrixXcd quantum_cat_map(const CatMap& m, const QuantumSpace& space);

// Eigenvalue arguments in [0, 2pi), sorted ascending.
std::vector<double> eigenphases(const Eigen::MatrixXcd& u);

// Multiset {min(|di - dj|, 2pi - |di - dj|)} over unordered pairs, sorted.
std::vector<double> phase_difference_multiset(const std::vector<double>& phases);

}  // namespace pqcat

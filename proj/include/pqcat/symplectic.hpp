#pragma once

// Integer symplectic (cat map) layer: block structure, hyperbolicity,
// the mod-2 parity vector phi_M, the connection parameter kappa, the
// expanding/contracting normal form, and the exact solutions of the
// quantization condition (I - M) theta = (N/2) phi_M mod Z^{2n}.
//
// Conventions used throughout: points are x = (q, p) with q, p in R^n,
//   sigma(x, x') = <p, q'> - <p', q>,   Q(x) = <q, p>,
// so sigma(x, y) = x^T Jsig y with Jsig = [[0, -I], [I, 0]].

#include "pqcat/errors.hpp"
#include "pqcat/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace pqcat {

using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

inline constexpr double tol_hyperbolic = 1e-9;   // |.| vs unit circle
inline constexpr double tol_normal_form = 1e-10; // residual scale factor

// Hyperbolic element of Sp(2n, Z) acting on the torus R^{2n}/Z^{2n}.
struct CatMap {
    int n = 0;       // half dimension; the matrix is 2n x 2n
    IMat mat;        // integer entries, symplectic, no unit-modulus spectrum

    // Throws NotSymplectic / NotHyperbolic. Hyperbolicity means every
    // eigenvalue modulus differs from 1 by more than tol_hyperbolic.
    static CatMap from_matrix(const IMat& m);

    IMat inverse() const;                   // exact, via Jsig^{-1} M^T Jsig
    Eigen::MatrixXd real() const;
    IMat block_a() const;
    IMat block_b() const;
    IMat block_c() const;
    IMat block_d() const;
};

// phi_M in {0,1}^{2n}, defined by Q(M^{-1}w) - Q(w) = sigma(phi_M, w) mod 2
// for all integer w.
struct ParityVector {
    IVec phi;                 // entries 0/1, length 2n
    bool is_zero() const { return phi.isZero(); }
};

struct ConnectionParameter {
    RatVec kappa_tilde;       // (1/2) (I - M)^{-1} phi_M, exact
    RatVec kappa;             // componentwise fractional part, in [0,1)
    Eigen::VectorXd kappa_tilde_real() const;
    Eigen::VectorXd kappa_real() const;
};

// D in Sp(2n, R) with D^{-1} M D = diag(E, E^{-T}), E expanding in operator
// norm (||E^{-1}|| < 1, |det E| > 1).
struct NormalForm {
    Eigen::MatrixXd d;
    Eigen::MatrixXd e;
    double residual = 0.0;          // ||D^{-1} M D - diag(E, E^{-T})||
    double symplectic_defect = 0.0; // ||D^T Jsig D - Jsig||
    double det_e() const { return e.determinant(); }
};

// sigma and Q on integer and real vectors.
std::int64_t symplectic_form(const IVec& x, const IVec& y);
double symplectic_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
std::int64_t quadratic_form(const IVec& x);
double quadratic_form(const Eigen::VectorXd& x);

// Jsig as a dense integer matrix (2n x 2n).
IMat jsig(int n);

bool is_symplectic(const IMat& m);
bool is_hyperbolic(const IMat& m);

// phi is defined for any element of Sp(2n, Z); the IMat overloads exist so
// that cocycle identities can be checked on products that happen to lose
// hyperbolicity.
ParityVector parity_vector(const IMat& m);
ParityVector parity_vector(const CatMap& m);

// Exact checks of the defining relation on supplied lattice vectors and of
// the cocycle identities phi_{MM'} = phi_M + M phi_{M'} mod 2 and
// phi_{M^{-1}} = M^{-1} phi_M mod 2. Returns true when all hold.
bool parity_defining_relation_check(const IMat& m, const ParityVector& phi,
                                    const std::vector<IVec>& ws);
bool parity_cocycle_check(const IMat& m, const IMat& mprime);

ConnectionParameter connection_parameter(const CatMap& m);

// Coefficient norm of (lift pullback of alpha_kappa) - alpha_kappa for the
// lift built from phi; zero iff kappa_tilde is the connection parameter.
double connection_pullback_residual(const CatMap& m, const ParityVector& phi,
                                    const Eigen::VectorXd& kappa_tilde);

NormalForm normal_form(const CatMap& m);

// All theta in [0,1)^{2n} with (I - M) theta = (N/2) phi_M mod Z^{2n},
// exact rationals, sorted lexicographically; size = |det(I - M)|.
std::vector<RatVec> quantization_thetas(const CatMap& m, int bigN);

// Deterministic random words in the generators [[I,S],[0,I]], [[I,0],[S,I]]
// (S symmetric, entries in {-2..2}) and Jsig, retried until hyperbolic.
CatMap random_hyperbolic(int n, std::uint64_t seed, int word_length = 8);

}  // namespace pqcat

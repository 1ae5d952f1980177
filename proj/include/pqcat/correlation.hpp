#pragma once

// Correlation functions of the lifted cat map: direct torus quadrature of
// <u o lift^{-t}, v>, the tensor-factorized fast path (quantum matrix times
// 1-D metaplectic pairings), pole extraction from time series, and the
// asymptotics reports.

#include "pqcat/prequantum.hpp"
#include "pqcat/quantum.hpp"
#include "pqcat/resonance.hpp"
#include "pqcat/schwartz.hpp"
#include "pqcat/symplectic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace pqcat {

// One U(1)-Fourier mode worth of observable data. For mode >= 1 the section
// is sum_j a_j U_{N,0}(e_j x f_j); mode <= -1 is the complex conjugate of the
// same construction at |mode|; mode 0 is a trigonometric polynomial on the
// torus given by integer frequency / coefficient pairs.
struct ModeObservable {
    int mode = 1;
    Eigen::VectorXcd a;
    std::vector<SchwartzSpec> f;
    std::vector<std::pair<IVec, std::complex<double>>> fourier;

    static ModeObservable quantum(int mode, Eigen::VectorXcd a, std::vector<SchwartzSpec> f);
    static ModeObservable torus(std::vector<std::pair<IVec, std::complex<double>>> fourier);
};

struct Observable {
    int n = 1;
    std::vector<ModeObservable> parts;
};

// Deterministic default observable for mode N: unit-normalized coefficients
// with distinct phases and per-index Gaussian centers (generic residues).
ModeObservable default_mode_observable(int n, int mode, int variant = 0);

std::complex<double> eval_mode_observable(const ModeObservable& u, const BundlePoint& p);

struct CorrelationSeries {
    int mode = 0;
    int grid = 0;
    Eigen::VectorXcd values;         // C(t), t = 1..T
    Eigen::VectorXcd values_coarse;  // stride-2 subsampled quadrature
    int certified_T = 0;             // longest prefix with |fine - coarse| <= 1e-4
    double richardson() const;       // max |values - values_coarse|

    // Samples trustworthy on the fine grid. The mode-N integrand at time t
    // carries ~lambda^t frequencies; the rectangle rule degrades once they
    // wrap the node count, and the coarse pass (4x fewer nodes in 2-D)
    // degrades at least one step earlier. Hence certified prefix plus one.
    int usable_T() const {
        return std::min<int>(static_cast<int>(values.size()), certified_T + 1);
    }
};

// Rectangle-rule quadrature on grid^{2n} nodes; throws ModeMismatch when the
// observables live in different modes and GridTooCoarse when not even C(1)
// passes the fine-vs-halved Richardson check at 1e-4. Later samples that
// fail the check are still returned; consult certified_T / usable_T.
CorrelationSeries correlation_series(const CatMap& m, const ModeObservable& u,
                                     const ModeObservable& v, int bigT, int grid,
                                     int threads = 1);

// Sum of per-mode series over the modes present in both observables.
CorrelationSeries correlation_series_multi(const CatMap& m, const Observable& u,
                                           const Observable& v, int bigT, int grid,
                                           int threads = 1);

// Exact mode-0 series from the action of M^{-t} on the frequency lattice.
Eigen::VectorXcd mode0_series_exact(const CatMap& m, const ModeObservable& u,
                                    const ModeObservable& v, int bigT);

// Tensor-factorized evaluation, n = 1 and parity zero only.
CorrelationSeries factorized_correlation(const CatMap& m, const ModeObservable& u,
                                         const ModeObservable& v, int bigT);

// Correlation series for a probe pair built to expose the leading spectral
// band in mode N (n = 1 maps only). Both observables use even profiles
// centered at 0, which cancels every odd band by parity; tuned Hermite-2 and
// Hermite-4 corrections on the u side cancel the second and fourth bands as
// well. The result is dominated by the N leading poles from t = 1 on, so a
// short certified window already determines them.
CorrelationSeries leading_band_series(const CatMap& m, int mode, int bigT, int grid,
                                      int threads = 1);

struct Pole {
    std::complex<double> z;
    std::complex<double> residue;
    bool reliable = true;
};

struct PoleSet {
    std::vector<Pole> poles;  // sorted by modulus, descending
    int rank = 0;
    int pencil_rows = 0;
    double noise_floor = 0.0;
    std::vector<std::complex<double>> dropped;  // |z| >= 1 estimates, excluded
};

// Matrix-pencil estimate of {z_i} in C(t) ~ sum r_i z_i^t from t = 1..T.
PoleSet extract_poles(const Eigen::VectorXcd& series, int model_order,
                      double noise_floor = 0.0);

// Criterion helper: all reliable outer poles must have modulus within
// rel_tol of scale, and the folded pairwise phase-difference multisets of
// poles and predicted phases must agree within phase_tol.
struct PoleComparison {
    double max_modulus_rel_err = 0.0;
    double max_phase_diff_err = 0.0;
    int outer_count = 0;
    int expected_count = 0;
    bool moduli_ok = false;
    bool phases_ok = false;
    bool ok() const { return moduli_ok && phases_ok; }
};

PoleComparison compare_outer_band(const PoleSet& poles, double scale,
                                  const std::vector<double>& predicted_phases,
                                  double rel_tol, double phase_tol);

struct Theorem2Report {
    int fit_T = 0;               // samples used (certified prefix of the series)
    Eigen::VectorXcd r;          // |det E|^{t/2} C(t), t = 1..fit_T
    std::vector<double> phases;  // quantum eigenphases used in the fit
    int orientation = 1;         // sign applied to the eigenphases
    double omega = 0.0;          // fitted common offset
    Eigen::VectorXcd coeffs;
    Eigen::VectorXd residuals;   // per t
    double decay_ratio = 0.0;    // fitted geometric ratio of the residuals
    double ratio_bound = 0.0;    // ||E^{-1}|| + 0.1
    bool residual_decays = false;
};

Theorem2Report theorem2_report(const CatMap& m, int bigN, const ModeObservable& u,
                               const ModeObservable& v, int bigT, int grid,
                               int threads = 1);

struct CorollaryReport {
    Eigen::VectorXcd total;         // multimode C(t)
    Eigen::VectorXcd mode0_quad;    // quadrature mode-0 component
    Eigen::VectorXcd mode0_exact;   // lattice computation
    double mode0_err = 0.0;
    std::complex<double> mean_product;  // (mean u)(conj mean v)
    double max_scaled_remainder = 0.0;  // max_t |C - mean product| |det E|^{t/2}
    bool mode0_matches = false;
    bool remainder_bounded = false;
};

CorollaryReport corollary_report(const CatMap& m, const Observable& u, const Observable& v,
                                 int bigT, int grid, double remainder_bound = 50.0,
                                 int threads = 1);

}  // namespace pqcat

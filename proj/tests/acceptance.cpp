// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned here and are not configurable.

#include "oracles.hpp"
#include "pqcat/correlation.hpp"
#include "pqcat/io.hpp"
#include "pqcat/metaplectic.hpp"
#include "pqcat/quantum.hpp"
#include "pqcat/resonance.hpp"
#include "pqcat/symplectic.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pqcat;

namespace {

constexpr double tol_pole_modulus = 1e-3;
constexpr double tol_pole_phase = 1e-3;
constexpr double band_slack = 1e-9;
constexpr double tol_closed_form = 1e-12;
constexpr double tol_factorization = 1e-3;
constexpr int min_certified_window = 6;
constexpr double tol_mode0 = 1e-10;
constexpr double remainder_bound = 50.0;
constexpr double tol_egorov = 1e-10;
constexpr double tol_unitarity = 1e-10;
constexpr double tol_gamma_invariance = 1e-10;
constexpr double tol_orthogonality = 1e-6;
constexpr double tol_connection_zero = 1e-12;
constexpr double min_connection_perturbed = 1e-3;

int failures = 0;

void report(int k, bool pass, const std::string& detail) {
    std::printf("CRITERION %d: %s (%s)\n", k, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

CatMap benchmark() {
    IMat m(2, 2);
    m << 2, 1, 3, 2;
    return CatMap::from_matrix(m);
}

CatMap arnold() {
    IMat m(2, 2);
    m << 2, 1, 1, 1;
    return CatMap::from_matrix(m);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Outer resonance band of the simulated correlations: moduli at
//    |det E|^{-1/2} and pole phase gaps matching the quantum eigenphases.
//    The probe pair cancels every band below the leading one, so the
//    certified prefix of the series is band-dominated from t = 1 on. The
//    pole count the pencil can resolve is still capped by half the usable
//    window; at this grid that cap is reached at N = 2.
void criterion_1() {
    const CatMap m = benchmark();
    const double scale = std::pow(2.0 + std::sqrt(3.0), -0.5);
    std::ostringstream det;
    bool pass = true;
    for (int bigN = 1; bigN <= 4; ++bigN) {
        const auto t0 = std::chrono::steady_clock::now();
        const CorrelationSeries series = leading_band_series(m, bigN, 12, 128);
        const int len = series.usable_T();
        const PoleSet poles = extract_poles(series.values.head(len), bigN + 1);
        const std::vector<double> phases =
            eigenphases(quantum_cat_map(m, QuantumSpace::make_zero(1, bigN)));
        const PoleComparison cmp =
            compare_outer_band(poles, scale, phases, tol_pole_modulus, tol_pole_phase);
        pass = pass && cmp.ok();
        det << "N=" << bigN << ": outer " << cmp.outer_count << "/" << cmp.expected_count
            << " len " << len << " mod_err " << std::scientific << cmp.max_modulus_rel_err
            << " phase_err " << cmp.max_phase_diff_err << std::defaultfloat << " " << std::fixed
            << seconds_since(t0) << "s" << std::defaultfloat
            << (bigN < 4 ? "; " : "");
    }
    report(1, pass, det.str());
}

// 2. Every eigenvalue of the degree-k composition matrices lies in the
//    annulus [||E||^{-k}, ||E^{-1}||^{k}].
void criterion_2() {
    int violations = 0;
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + (i % 3);
        const Eigen::MatrixXd e = oracle::random_expanding(n, 1000 + i);
        for (const BandSpectrum& band : lambda_spectrum(e, 4)) {
            for (const std::complex<double>& z : band.eigenvalues) {
                ++checked;
                if (std::abs(z) < band.inner - band_slack || std::abs(z) > band.outer + band_slack) {
                    ++violations;
                }
            }
        }
    }
    std::ostringstream det;
    det << "50 matrices, " << checked << " eigenvalues, " << violations << " outside";
    report(2, violations == 0, det.str());
}

// 3. For a 1-D expanding factor the degree-k spectrum is exactly lambda^{-k}.
void criterion_3() {
    double worst = 0.0;
    const double bench_lambda = normal_form(benchmark()).e(0, 0);
    for (double lambda : {bench_lambda, -1.7, 3.9}) {
        Eigen::MatrixXd e(1, 1);
        e << lambda;
        for (const BandSpectrum& band : lambda_spectrum(e, 6)) {
            if (band.eigenvalues.size() != 1) {
                report(3, false, "band is not a single eigenvalue");
                return;
            }
            const std::complex<double> want = std::pow(1.0 / lambda, band.k);
            worst = std::max(worst,
                             std::abs(band.eigenvalues[0] - want) / std::abs(want));
        }
    }
    std::ostringstream det;
    det << "max rel err " << std::scientific << worst;
    report(3, worst <= tol_closed_form, det.str());
}

// 4. Direct quadrature and the tensor-factorized evaluation agree on every
//    sample the quadrature certifies. The probe autocorrelates a state whose
//    mode coefficients form an eigenvector of the quantum map, which keeps
//    the series large relative to the aliasing floor of the node lattice;
//    samples past the certified prefix measure only that floor, so the
//    criterion demands a substantial certified window instead.
void criterion_4() {
    const CatMap m = benchmark();
    const int grids[4] = {512, 1024, 1024, 1024};
    bool pass = true;
    std::ostringstream det;
    for (int bigN = 1; bigN <= 4; ++bigN) {
        const QuantumSpace space = QuantumSpace::make_zero(1, bigN);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(quantum_cat_map(m, space));
        const Eigen::VectorXcd a = es.eigenvectors().col(0).conjugate();
        const std::vector<SchwartzSpec> f(space.dim(),
                                          SchwartzSpec::gaussian(1, 0.0, 0.45, 8));
        const ModeObservable u = ModeObservable::quantum(bigN, a, f);
        const CorrelationSeries slow = correlation_series(m, u, u, 8, grids[bigN - 1]);
        const CorrelationSeries fast = factorized_correlation(m, u, u, 8);
        const int len = slow.certified_T;
        det << "N=" << bigN << ": certified " << len << "/8";
        if (len < min_certified_window) {
            pass = false;
            det << " (too short)";
        } else {
            const double scale = slow.values.head(len).cwiseAbs().maxCoeff();
            const double err =
                (slow.values.head(len) - fast.values.head(len)).cwiseAbs().maxCoeff() / scale;
            pass = pass && err <= tol_factorization;
            det << " rel err " << std::scientific << err << std::defaultfloat;
        }
        det << (bigN < 4 ? "; " : "");
    }
    report(4, pass, det.str());
}

// 5. |det E|^{t/2} C(t) is fitted by the quantum eigenphases with a common
//    offset and a geometrically decaying residual. A decay ratio of zero
//    means the residual sits at the noise floor from the first sample on.
void criterion_5() {
    const CatMap m = benchmark();
    bool pass = true;
    std::ostringstream det;
    const int grids[2] = {256, 512};
    const int modes[2] = {2, 3};
    for (int i = 0; i < 2; ++i) {
        const int bigN = modes[i];
        const Theorem2Report rep =
            theorem2_report(m, bigN, default_mode_observable(1, bigN, 0),
                            default_mode_observable(1, bigN, 1), 12, grids[i]);
        pass = pass && rep.residual_decays;
        det << "N=" << bigN << ": fit " << rep.fit_T << " samples, ratio " << std::fixed
            << rep.decay_ratio << " bound " << rep.ratio_bound << std::defaultfloat
            << (i == 0 ? "; " : "");
    }
    report(5, pass, det.str());
}

// 6. Multimode mean-zero observables: scaled remainder stays bounded and the
//    mode-0 part matches the exact lattice computation.
void criterion_6() {
    const CatMap m = benchmark();
    Observable u, v;
    u.n = v.n = 1;
    for (int mode : {0, 1, -1, 2, -2}) u.parts.push_back(default_mode_observable(1, mode, 0));
    for (int mode : {0, 1, -1, 2, -2}) v.parts.push_back(default_mode_observable(1, mode, 1));
    const CorollaryReport rep = corollary_report(m, u, v, 12, 96, remainder_bound);
    const bool pass = rep.mode0_matches && rep.mode0_err <= tol_mode0 && rep.remainder_bounded &&
                      std::abs(rep.mean_product) <= 1e-14;
    std::ostringstream det;
    det << "mode0 err " << std::scientific << rep.mode0_err << ", max scaled remainder "
        << std::fixed << rep.max_scaled_remainder << std::defaultfloat;
    report(6, pass, det.str());
}

// 7. Structural identities of the quantum layer.
void criterion_7() {
    const CatMap m = benchmark();
    std::ostringstream det;

    double worst_egorov = 0.0, worst_unit = 0.0;
    for (int bigN = 1; bigN <= 6; ++bigN) {
        const QuantumSpace space = QuantumSpace::make_zero(1, bigN);
        const Eigen::MatrixXcd u = quantum_cat_map(m, space);
        worst_egorov = std::max(worst_egorov, egorov_residual(m, space, u));
        worst_unit = std::max(worst_unit, unitarity_defect(u));
    }
    {
        const RatVec half{Rat(1, 2), Rat(1, 2)};
        const QuantumSpace space = QuantumSpace::make(1, 2, half);
        const Eigen::MatrixXcd u = quantum_cat_map(m, space);
        worst_egorov = std::max(worst_egorov, egorov_residual(m, space, u));
        worst_unit = std::max(worst_unit, unitarity_defect(u));
    }

    bool cocycles = parity_cocycle_check(m.mat, arnold().mat) &&
                    parity_cocycle_check(arnold().mat, arnold().mat) &&
                    parity_cocycle_check(m.mat, jsig(1));
    for (int i = 0; i < 6; ++i) {
        const CatMap a = random_hyperbolic(1 + (i % 2), 40 + i, 6);
        const CatMap b = random_hyperbolic(1 + (i % 2), 80 + i, 6);
        cocycles = cocycles && parity_cocycle_check(a.mat, b.mat);
    }

    bool connection_iff = true;
    for (const CatMap& cm : {m, arnold()}) {
        const ParityVector phi = parity_vector(cm);
        const ConnectionParameter conn = connection_parameter(cm);
        const double at_kappa = connection_pullback_residual(cm, phi, conn.kappa_tilde_real());
        Eigen::VectorXd off = conn.kappa_tilde_real();
        off[0] += 0.3;
        const double away = connection_pullback_residual(cm, phi, off);
        connection_iff =
            connection_iff && at_kappa <= tol_connection_zero && away >= min_connection_perturbed;
    }

    // section invariance under the deck group
    double worst_gamma = 0.0;
    {
        const QuantumSpace space = QuantumSpace::make_zero(1, 3);
        const SchwartzSpec f = SchwartzSpec::gaussian(1, 0.2, 0.3, 8);
        std::mt19937_64 eng(5);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            BundlePoint p;
            p.x = Eigen::VectorXd(2);
            p.x << dist(eng), dist(eng);
            p.s = dist(eng);
            IVec w(2);
            w << static_cast<std::int64_t>(eng() % 7) - 3, static_cast<std::int64_t>(eng() % 7) - 3;
            const BundlePoint q = group_law(lattice_embed(w), p);
            for (int j = 0; j < space.dim(); ++j) {
                worst_gamma = std::max(
                    worst_gamma, std::abs(pair_U(space, j, f, p) - pair_U(space, j, f, q)));
            }
        }
    }

    // orthogonality of the paired sections under torus quadrature
    double worst_orth = 0.0;
    {
        const QuantumSpace space = QuantumSpace::make_zero(1, 3);
        const SchwartzSpec f = SchwartzSpec::gaussian(1, 0.2, 0.3, 8);
        const SchwartzSpec g = SchwartzSpec::gaussian(1, 0.45, 0.35, 8);
        const std::complex<double> fg = oracle::schwartz_inner(f, g);
        const int grid = 48;
        for (int j = 0; j < space.dim(); ++j) {
            for (int l = 0; l < space.dim(); ++l) {
                std::complex<double> acc{0.0, 0.0};
                BundlePoint p;
                p.x = Eigen::VectorXd(2);
                p.s = 0.0;
                for (int a = 0; a < grid; ++a) {
                    for (int b = 0; b < grid; ++b) {
                        p.x << a / double(grid), b / double(grid);
                        acc += pair_U(space, j, f, p) * std::conj(pair_U(space, l, g, p));
                    }
                }
                acc /= double(grid) * double(grid);
                const std::complex<double> want = (j == l) ? fg : std::complex<double>{0.0, 0.0};
                worst_orth = std::max(worst_orth, std::abs(acc - want));
            }
        }
    }

    const bool pass = worst_egorov <= tol_egorov && worst_unit <= tol_unitarity && cocycles &&
                      connection_iff && worst_gamma <= tol_gamma_invariance &&
                      worst_orth <= tol_orthogonality;
    det << "egorov " << std::scientific << worst_egorov << ", unitarity " << worst_unit
        << ", cocycles " << (cocycles ? "exact" : "broken") << ", connection iff "
        << (connection_iff ? "yes" : "no") << ", deck " << worst_gamma << ", orthogonality "
        << worst_orth;
    report(7, pass, det.str());
}

// 8. Negative controls: nonzero parity is rejected, a perturbed connection
//    parameter is detected.
void criterion_8() {
    bool rejected = false;
    try {
        predicted_resonances(arnold(), 1, 2);
    } catch (const ParityNonzero&) {
        rejected = true;
    }

    const CatMap a = arnold();
    Eigen::VectorXd off = connection_parameter(a).kappa_tilde_real();
    off[1] -= 0.25;
    const double res = connection_pullback_residual(a, parity_vector(a), off);

    std::ostringstream det;
    det << "nonzero parity " << (rejected ? "rejected" : "accepted") << ", perturbed residual "
        << std::scientific << res;
    report(8, rejected && res >= min_connection_perturbed, det.str());
}

}  // namespace

int main() {
    struct {
        int k;
        void (*fn)();
    } table[] = {{1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
                 {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8}};
    for (const auto& row : table) {
        try {
            row.fn();
        } catch (const std::exception& e) {
            report(row.k, false, std::string("exception: ") + e.what());
        }
    }
    std::printf("ACCEPTANCE: %d/8 PASS\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}

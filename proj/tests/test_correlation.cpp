#include "pqcat/correlation.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace pqcat;

namespace {

using C = std::complex<double>;

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

IVec iv(std::int64_t a, std::int64_t b) {
    IVec v(2);
    v << a, b;
    return v;
}

double maxabs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("torus-mode quadrature reproduces the exact lattice series") {
    const CatMap m = benchmark();
    const ModeObservable u = ModeObservable::torus(
        {{iv(1, 0), C(0.7, 0.2)}, {iv(-1, 0), C(0.7, -0.2)}, {iv(0, 1), C(0.0, 0.4)}});
    const ModeObservable v = ModeObservable::torus(
        {{iv(1, 0), C(0.3, 0.0)}, {iv(0, 1), C(0.1, 0.5)}, {iv(0, -1), C(0.1, -0.5)}});

    // with grid 96 none of the frequencies evolved up to t = 4 alias onto the
    // observable frequencies mod 96 (or mod 48 for the coarse pass), so the
    // rectangle rule is exact
    const CorrelationSeries s = correlation_series(m, u, v, 4, 96);
    const Eigen::VectorXcd exact = mode0_series_exact(m, u, v, 4);
    REQUIRE(s.values.size() == 4);
    CHECK((s.values - exact).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(s.richardson() <= 1e-12);
}

TEST_CASE("quadrature is deterministic across thread counts") {
    const CatMap m = benchmark();
    const ModeObservable u = default_mode_observable(1, 1, 0);
    const ModeObservable v = default_mode_observable(1, 1, 1);
    const CorrelationSeries one = correlation_series(m, u, v, 3, 64, 1);
    const CorrelationSeries four = correlation_series(m, u, v, 3, 64, 4);
    CHECK((one.values - four.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mode bookkeeping is enforced") {
    const CatMap m = benchmark();
    CHECK_THROWS_AS(correlation_series(m, default_mode_observable(1, 1),
                                       default_mode_observable(1, 2), 2, 32),
                    ModeMismatch);
    CHECK_THROWS_AS(mode0_series_exact(m, default_mode_observable(1, 1),
                                       default_mode_observable(1, 1), 2),
                    ModeMismatch);
    CHECK_THROWS_AS(correlation_series(m, default_mode_observable(1, 0),
                                       default_mode_observable(1, 0), 2, 3),
                    Error);
}

TEST_CASE("negative modes are the conjugate construction") {
    const CatMap m = benchmark();
    const ModeObservable up = default_mode_observable(1, 2, 0);
    const ModeObservable vp = default_mode_observable(1, 2, 1);
    ModeObservable um = up, vm = vp;
    um.mode = -2;
    vm.mode = -2;
    const CorrelationSeries plus = correlation_series(m, up, vp, 3, 64);
    const CorrelationSeries minus = correlation_series(m, um, vm, 3, 64);
    CHECK((minus.values - plus.values.conjugate()).cwiseAbs().maxCoeff() <=
          1e-13 * (1.0 + maxabs(plus.values)));
}

TEST_CASE("aliasing between the fine and halved grids is detected") {
    const CatMap m = benchmark();
    // (M^T)^{-1} maps (1,0) to (2,-1); (-2,3) differs from that by (4,-4),
    // which vanishes mod 4 but not mod 8, so the stride-2 pass alone sees a
    // spurious pairing
    const ModeObservable u = ModeObservable::torus({{iv(1, 0), C(1.0, 0.0)}});
    const ModeObservable v = ModeObservable::torus({{iv(-2, 3), C(1.0, 0.0)}});
    CHECK_THROWS_AS(correlation_series(m, u, v, 2, 8), GridTooCoarse);
}

TEST_CASE("factorized path agrees with direct quadrature") {
    const CatMap m = benchmark();
    for (int bigN : {1, 2}) {
        const ModeObservable u = default_mode_observable(1, bigN, 0);
        const ModeObservable v = default_mode_observable(1, bigN, 1);
        const CorrelationSeries slow = correlation_series(m, u, v, 6, 128);
        const CorrelationSeries fast = factorized_correlation(m, u, v, 6);
        // compare on the certified prefix; past it the quadrature error is
        // dominated by frequency folding, which the halved-grid check flags
        REQUIRE(slow.certified_T >= 4);
        const int nT = slow.certified_T;
        const double scale = maxabs(slow.values.head(nT));
        REQUIRE(scale > 1e-8);
        CHECK((slow.values.head(nT) - fast.values.head(nT)).cwiseAbs().maxCoeff() <=
              1e-3 * scale);
    }
}

TEST_CASE("factorized path rejects unsupported inputs") {
    CHECK_THROWS_AS(factorized_correlation(arnold(), default_mode_observable(1, 1),
                                           default_mode_observable(1, 1), 4),
                    ParityNonzero);
    CHECK_THROWS_AS(factorized_correlation(benchmark(), default_mode_observable(1, 0),
                                           default_mode_observable(1, 0), 4),
                    Error);
}

TEST_CASE("pole extraction recovers synthetic decompositions") {
    SUBCASE("single real pole") {
        Eigen::VectorXcd s(12);
        for (int t = 1; t <= 12; ++t) s[t - 1] = 2.0 * std::pow(0.5, t);
        const PoleSet p = extract_poles(s, 3);
        REQUIRE(p.poles.size() == 1);
        CHECK(std::abs(p.poles[0].z - C(0.5, 0.0)) <= 1e-10);
        CHECK(std::abs(p.poles[0].residue - C(2.0, 0.0)) <= 1e-8);
    }

    SUBCASE("conjugate pair plus inner pole") {
        const C z1 = std::polar(0.6, M_PI / 3.0), z2 = std::conj(z1), z3(0.3, 0.0);
        Eigen::VectorXcd s(16);
        for (int t = 1; t <= 16; ++t) {
            s[t - 1] = std::pow(z1, t) + std::pow(z2, t) + 0.7 * std::pow(z3, t);
        }
        const PoleSet p = extract_poles(s, 5);
        REQUIRE(p.poles.size() == 3);
        CHECK(std::abs(std::abs(p.poles[0].z) - 0.6) <= 1e-8);
        CHECK(std::abs(std::abs(p.poles[1].z) - 0.6) <= 1e-8);
        CHECK(std::abs(p.poles[2].z - z3) <= 1e-8);
        CHECK(std::abs(p.poles[2].residue - C(0.7, 0.0)) <= 1e-7);
    }

    SUBCASE("white noise does not destroy the outer pole") {
        std::mt19937 eng(7);
        std::uniform_real_distribution<double> dist(-1e-6, 1e-6);
        Eigen::VectorXcd s(20);
        for (int t = 1; t <= 20; ++t) {
            s[t - 1] = std::pow(C(0.5, 0.1), t) + C(dist(eng), dist(eng));
        }
        const PoleSet p = extract_poles(s, 4, 1e-5);
        REQUIRE(!p.poles.empty());
        CHECK(std::abs(p.poles[0].z - C(0.5, 0.1)) <= 1e-3);
        CHECK(p.poles[0].reliable);
    }

    SUBCASE("growing components are reported separately") {
        Eigen::VectorXcd s(14);
        for (int t = 1; t <= 14; ++t) s[t - 1] = std::pow(1.2, t) + std::pow(0.4, t);
        const PoleSet p = extract_poles(s, 4);
        CHECK(!p.dropped.empty());
        for (const Pole& q : p.poles) CHECK(std::abs(q.z) < 1.0);
    }

    SUBCASE("short series clamp the model order") {
        Eigen::VectorXcd s(4);
        for (int t = 1; t <= 4; ++t) s[t - 1] = std::pow(0.5, t);
        const PoleSet p = extract_poles(s, 6);
        CHECK(p.poles.size() <= 2);
    }
}

TEST_CASE("outer-band comparison checks moduli and folded phase gaps") {
    PoleSet ps;
    ps.poles.push_back({std::polar(0.52, 0.3), C(1, 0), true});
    ps.poles.push_back({std::polar(0.52, 1.1), C(1, 0), true});
    ps.poles.push_back({std::polar(0.10, -0.4), C(1, 0), true});

    // phase sets are compared through pairwise differences, so a common
    // rotation of the predictions must not matter
    const std::vector<double> predicted = {2.0, 2.8};
    const PoleComparison good = compare_outer_band(ps, 0.5, predicted, 0.08, 1e-6);
    CHECK(good.ok());
    CHECK(good.outer_count == 2);
    CHECK(good.expected_count == 2);
    CHECK(good.max_modulus_rel_err == doctest::Approx(0.04).epsilon(1e-6));

    const PoleComparison bad_scale = compare_outer_band(ps, 0.4, predicted, 0.08, 1e-6);
    CHECK(!bad_scale.moduli_ok);

    const PoleComparison bad_count = compare_outer_band(ps, 0.5, {0.0, 0.8, 1.6}, 0.08, 1e-6);
    CHECK(!bad_count.ok());

    const PoleComparison bad_gap = compare_outer_band(ps, 0.5, {2.0, 2.9}, 0.08, 1e-3);
    CHECK(!bad_gap.phases_ok);
}

TEST_CASE("scaled correlations stay bounded with geometrically decaying residuals") {
    const CatMap m = benchmark();
    const Theorem2Report rep = theorem2_report(m, 2, default_mode_observable(1, 2, 0),
                                               default_mode_observable(1, 2, 1), 10, 256);
    // the fit window is the certified prefix of the series, so a grid of 256
    // must certify well past the minimum needed for two phases plus offset
    REQUIRE(rep.fit_T >= 5);
    REQUIRE(rep.r.size() == rep.fit_T);
    CHECK(rep.phases.size() == 2);
    CHECK(rep.residual_decays);
    CHECK(rep.decay_ratio <= rep.ratio_bound);
    // the scaled series must not blow up
    CHECK(maxabs(rep.r) <= 100.0);
    CHECK(rep.residuals.maxCoeff() <= 0.2 * maxabs(rep.r));
}

TEST_CASE("asymptotics reports refuse nonzero parity") {
    CHECK_THROWS_AS(theorem2_report(arnold(), 2, default_mode_observable(1, 2, 0),
                                    default_mode_observable(1, 2, 0), 6, 32),
                    ParityNonzero);
}

TEST_CASE("constant observables give a flat correlation equal to the mean product") {
    const CatMap m = benchmark();
    Observable u, v;
    u.n = v.n = 1;
    u.parts = {ModeObservable::torus({{iv(0, 0), C(0.8, 0.3)}})};
    v.parts = {ModeObservable::torus({{iv(0, 0), C(0.5, -0.2)}})};
    const CorollaryReport rep = corollary_report(m, u, v, 6, 16);
    const C want = C(0.8, 0.3) * std::conj(C(0.5, -0.2));
    CHECK(std::abs(rep.mean_product - want) <= 1e-12);
    for (int t = 0; t < rep.total.size(); ++t) CHECK(std::abs(rep.total[t] - want) <= 1e-12);
    CHECK(rep.max_scaled_remainder <= 1e-8);
    CHECK(rep.mode0_matches);
    CHECK(rep.remainder_bounded);
}

TEST_CASE("multimode mixing decays at the expected rate") {
    const CatMap m = benchmark();
    Observable u, v;
    u.n = v.n = 1;
    u.parts = {ModeObservable::torus(
                   {{iv(1, 0), C(0.5, 0.0)}, {iv(-1, 0), C(0.5, 0.0)}, {iv(0, 0), C(0.2, 0.0)}}),
               default_mode_observable(1, 1, 0), default_mode_observable(1, -1, 0)};
    v.parts = u.parts;
    const CorollaryReport rep = corollary_report(m, u, v, 8, 96);
    CHECK(rep.mode0_matches);
    CHECK(rep.mode0_err <= 1e-10);
    CHECK(std::abs(rep.mean_product - C(0.04, 0.0)) <= 1e-12);
    CHECK(rep.remainder_bounded);
    // conjugate-paired parts make both observables real valued, so the
    // correlation itself must be real up to quadrature rounding
    double imag = 0.0;
    for (int t = 0; t < rep.total.size(); ++t) imag = std::max(imag, std::abs(rep.total[t].imag()));
    CHECK(imag <= 1e-8 * (1.0 + maxabs(rep.total)));
}

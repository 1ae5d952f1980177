#include "pqcat/correlation.hpp"

#include "pqcat/metaplectic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <vector>

namespace pqcat {

namespace {

constexpr double two_pi = 2.0 * M_PI;

std::complex<double> turns(double t) { return std::polar(1.0, two_pi * t); }

void run_chunks(int nchunks, int threads, const std::function<void(int)>& work) {
    if (threads <= 1) {
        for (int c = 0; c < nchunks; ++c) work(c);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int nt = std::min(threads, nchunks);
    pool.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        pool.emplace_back([&] {
            int c;
            while ((c = next.fetch_add(1)) < nchunks) work(c);
        });
    }
    for (auto& th : pool) th.join();
}

// Evaluates one mode observable at bundle points, with the quantum space
// built once up front.
struct Evaluator {
    const ModeObservable& ob;
    std::optional<QuantumSpace> space;

    Evaluator(const ModeObservable& o, int n) : ob(o) {
        if (ob.mode != 0) {
            space = QuantumSpace::make_zero(n, std::abs(ob.mode));
            const int d = space->dim();
            if (ob.a.size() != d || static_cast<int>(ob.f.size()) != d) {
                throw Error("observable coefficient count does not match the space dimension");
            }
        }
    }

    std::complex<double> operator()(const BundlePoint& p) const {
        if (ob.mode == 0) {
            std::complex<double> acc{0.0, 0.0};
            for (const auto& [freq, coef] : ob.fourier) {
                double ph = 0.0;
                for (int i = 0; i < p.x.size(); ++i) ph += static_cast<double>(freq[i]) * p.x[i];
                acc += coef * turns(ph);
            }
            return acc;
        }
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < space->dim(); ++j) {
            acc += ob.a[j] * pair_U(*space, j, ob.f[j], p);
        }
        return ob.mode > 0 ? acc : std::conj(acc);
    }
};

std::complex<double> fourier_coeff(const ModeObservable& u, const IVec& freq) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [m, c] : u.fourier) {
        if (m.size() == freq.size() && m == freq) acc += c;
    }
    return acc;
}

Eigen::Matrix2d to_matrix2(const Eigen::MatrixXd& m) {
    if (m.rows() != 2 || m.cols() != 2) throw Error("expected a 2x2 matrix");
    Eigen::Matrix2d r;
    r << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    return r;
}

std::complex<double> pair_dilated(const Sampled1D& f, const Sampled1D& g, double lam, int t) {
    const double scale = std::pow(std::abs(lam), -0.5 * t);
    const double lpt = std::pow(lam, t);
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < g.size(); ++i) {
        acc += f.value_at(g.x_at(i) / lpt) * std::conj(g.v[i]);
    }
    return scale * g.dx * acc;
}

}  // namespace

ModeObservable ModeObservable::quantum(int mode, Eigen::VectorXcd a, std::vector<SchwartzSpec> f) {
    if (mode == 0) throw Error("quantum observable needs mode != 0");
    ModeObservable o;
    o.mode = mode;
    o.a = std::move(a);
    o.f = std::move(f);
    return o;
}

ModeObservable ModeObservable::torus(std::vector<std::pair<IVec, std::complex<double>>> fourier) {
    ModeObservable o;
    o.mode = 0;
    o.fourier = std::move(fourier);
    return o;
}

ModeObservable default_mode_observable(int n, int mode, int variant) {
    if (mode == 0) {
        // Mean-zero trigonometric polynomial with a few low frequencies.
        std::vector<std::pair<IVec, std::complex<double>>> fr;
        for (int i = 0; i < 2 * n; ++i) {
            IVec m = IVec::Zero(2 * n);
            m[i] = 1;
            fr.emplace_back(m, std::polar(0.5 / (i + 1.0), 0.61803398875 * two_pi * (i + 1 + variant)));
            IVec mm = -m;
            fr.emplace_back(mm, std::polar(0.3 / (i + 1.0), -0.2763932 * two_pi * (i + 1 + 2 * variant)));
        }
        return ModeObservable::torus(std::move(fr));
    }
    const int bigN = std::abs(mode);
    int d = 1;
    for (int i = 0; i < n; ++i) d *= bigN;
    Eigen::VectorXcd a(d);
    std::vector<SchwartzSpec> f;
    f.reserve(d);
    for (int j = 0; j < d; ++j) {
        a[j] = std::polar(1.0 / std::sqrt(double(d)),
                          two_pi * 0.61803398875 * (j + 1.0) * (variant + 1.0));
        const double c0 = 0.15 + std::fmod(0.53 * j + 0.29 * variant, 0.7);
        Eigen::VectorXd centers(n);
        for (int ax = 0; ax < n; ++ax) centers[ax] = std::fmod(c0 + 0.11 * ax, 0.9);
        f.push_back(SchwartzSpec::gaussian(centers, 0.3, 8));
    }
    ModeObservable o;
    o.mode = mode;
    o.a = std::move(a);
    o.f = std::move(f);
    return o;
}

std::complex<double> eval_mode_observable(const ModeObservable& u, const BundlePoint& p) {
    Evaluator ev(u, static_cast<int>(p.x.size()) / 2);
    return ev(p);
}

double CorrelationSeries::richardson() const {
    if (values_coarse.size() != values.size()) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < values.size(); ++i) {
        worst = std::max(worst, std::abs(values[i] - values_coarse[i]));
    }
    return worst;
}

CorrelationSeries correlation_series(const CatMap& m, const ModeObservable& u,
                                     const ModeObservable& v, int bigT, int grid, int threads) {
    if (u.mode != v.mode) throw ModeMismatch("observables live in different modes");
    if (grid < 4 || grid % 2 != 0) throw Error("grid must be even and at least 4");
    const int n = m.n;
    const int n2 = 2 * n;

    long long nodes = 1;
    for (int i = 0; i < n2; ++i) {
        nodes *= grid;
        if (nodes > (1LL << 25)) throw Error("grid too large for this dimension");
    }

    const PrequantumMap pm = PrequantumMap::from_cat_map(m);
    const Evaluator eu(u, n), ev(v, n);

    // The quadrature nodes form a map-invariant lattice, so evolving u
    // backward against a fixed conjugated v sample is exact bookkeeping; the
    // only quadrature error is the aliasing of the rectangle rule once the
    // evolved integrand outruns the grid. Splitting the evolution between
    // the two sides would not help: on an invariant node set the discrete
    // pairing inherits the unitary invariance of the continuum one, so any
    // split produces the identical sum up to rounding.
    std::vector<BundlePoint> points(static_cast<std::size_t>(nodes));
    Eigen::VectorXcd vbar(nodes);
    std::vector<char> coarse_mask(static_cast<std::size_t>(nodes));

    const int nchunks = static_cast<int>(std::min<long long>(64, nodes));
    auto chunk_range = [&](int c) {
        const long long lo = nodes * c / nchunks;
        const long long hi = nodes * (c + 1) / nchunks;
        return std::pair<long long, long long>(lo, hi);
    };

    run_chunks(nchunks, threads, [&](int c) {
        auto [lo, hi] = chunk_range(c);
        for (long long i = lo; i < hi; ++i) {
            long long rest = i;
            Eigen::VectorXd x(n2);
            bool even = true;
            for (int ax = n2 - 1; ax >= 0; --ax) {
                const int digit = static_cast<int>(rest % grid);
                rest /= grid;
                x[ax] = static_cast<double>(digit) / grid;
                even = even && (digit % 2 == 0);
            }
            points[i] = BundlePoint{x, 0.0};
            vbar[i] = std::conj(ev(points[i]));
            coarse_mask[i] = even ? 1 : 0;
        }
    });

    const long long coarse_nodes = nodes >> n2;  // (grid/2)^{2n}
    CorrelationSeries out;
    out.mode = u.mode;
    out.grid = grid;
    out.values.resize(bigT);
    out.values_coarse.resize(bigT);

    std::vector<std::complex<double>> chunk_fine(nchunks), chunk_coarse(nchunks);
    for (int t = 1; t <= bigT; ++t) {
        run_chunks(nchunks, threads, [&](int c) {
            auto [lo, hi] = chunk_range(c);
            std::complex<double> fine{0.0, 0.0}, coarse{0.0, 0.0};
            for (long long i = lo; i < hi; ++i) {
                points[i] = pm.backward(points[i]);
                const std::complex<double> term = eu(points[i]) * vbar[i];
                fine += term;
                if (coarse_mask[i]) coarse += term;
            }
            chunk_fine[c] = fine;
            chunk_coarse[c] = coarse;
        });
        std::complex<double> fine{0.0, 0.0}, coarse{0.0, 0.0};
        for (int c = 0; c < nchunks; ++c) {
            fine += chunk_fine[c];
            coarse += chunk_coarse[c];
        }
        out.values[t - 1] = fine / static_cast<double>(nodes);
        out.values_coarse[t - 1] = coarse / static_cast<double>(coarse_nodes);
    }

    out.certified_T = 0;
    while (out.certified_T < bigT &&
           std::abs(out.values[out.certified_T] - out.values_coarse[out.certified_T]) <= 1e-4) {
        ++out.certified_T;
    }
    if (out.certified_T == 0) {
        throw GridTooCoarse("halving the quadrature grid moves C(1) by more than 1e-4");
    }
    return out;
}

CorrelationSeries correlation_series_multi(const CatMap& m, const Observable& u,
                                           const Observable& v, int bigT, int grid, int threads) {
    CorrelationSeries total;
    total.mode = 0;
    total.grid = grid;
    total.values = Eigen::VectorXcd::Zero(bigT);
    total.values_coarse = Eigen::VectorXcd::Zero(bigT);
    total.certified_T = bigT;
    bool any = false;
    for (const auto& up : u.parts) {
        for (const auto& vp : v.parts) {
            if (up.mode != vp.mode) continue;
            const CorrelationSeries s = correlation_series(m, up, vp, bigT, grid, threads);
            total.values += s.values;
            total.values_coarse += s.values_coarse;
            total.certified_T = std::min(total.certified_T, s.certified_T);
            any = true;
        }
    }
    if (!any) throw ModeMismatch("observables share no mode");
    return total;
}

Eigen::VectorXcd mode0_series_exact(const CatMap& m, const ModeObservable& u,
                                    const ModeObservable& v, int bigT) {
    if (u.mode != 0 || v.mode != 0) throw ModeMismatch("mode-0 series needs torus observables");
    const IMat minv_t = m.inverse().transpose();

    std::map<std::vector<std::int64_t>, std::complex<double>> vhat;
    for (const auto& [freq, coef] : v.fourier) {
        vhat[std::vector<std::int64_t>(freq.data(), freq.data() + freq.size())] += coef;
    }

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(bigT);
    for (const auto& [freq, coef] : u.fourier) {
        IVec w = freq;
        for (int t = 1; t <= bigT; ++t) {
            w = minv_t * w;
            const auto it = vhat.find(std::vector<std::int64_t>(w.data(), w.data() + w.size()));
            if (it != vhat.end()) out[t - 1] += coef * std::conj(it->second);
        }
    }
    return out;
}

CorrelationSeries factorized_correlation(const CatMap& m, const ModeObservable& u,
                                         const ModeObservable& v, int bigT) {
    if (m.n != 1) throw UnsupportedDimension("factorized path is 1-D only");
    if (!parity_vector(m).is_zero()) throw ParityNonzero("factorized path needs parity zero");
    if (u.mode != v.mode) throw ModeMismatch("observables live in different modes");
    if (u.mode < 1) throw Error("factorized path needs mode >= 1");

    const int bigN = u.mode;
    const QuantumSpace space = QuantumSpace::make_zero(1, bigN);
    const Eigen::MatrixXcd a0 = quantum_cat_map(m, space);
    const NormalForm nf = normal_form(m);
    const double lam = nf.e(0, 0);
    const EngineGrid grid = make_engine_grid(bigN);
    const Eigen::Matrix2d dinv = to_matrix2(nf.d.inverse());

    const int d = space.dim();
    std::vector<Sampled1D> wf(d), wg(d);
    for (int j = 0; j < d; ++j) {
        wf[j] = metaplectic_apply_1d(dinv, sample_on_grid(u.f[j], grid), bigN);
        wg[j] = metaplectic_apply_1d(dinv, sample_on_grid(v.f[j], grid), bigN);
    }

    // Phase lock of the quantum matrix against the engine route: the comb
    // projector intertwines the two factors, so P(V f) must equal a unit
    // scalar times A0 P(f), and that scalar calibrates the overall phase of
    // the series. Estimating it from V f directly is hopeless, because the
    // dilation stretches the conjugated state far past the engine window and
    // the truncated tail tilts the phase by milliradians, which compounds as
    // e^{i delta t} over the series. The one-shot metaplectic operator of
    // the cat map equals V up to another unit scalar and keeps concentrated
    // states concentrated, so lock A0 against that operator instead and
    // transfer the phase onto V through pairings that only ever evaluate
    // concentrated states.
    const SchwartzSpec fstar = SchwartzSpec::gaussian(1, 0.237, 0.28, 8);
    const SchwartzSpec gstar = SchwartzSpec::gaussian(1, -0.31, 0.37, 8);
    const Sampled1D fs = sample_on_grid(fstar, grid);
    const Sampled1D gs = sample_on_grid(gstar, grid);
    const Sampled1D opf = metaplectic_apply_1d(to_matrix2(m.real()), fs, bigN);
    const Eigen::VectorXcd c = projector_P(space, fstar);
    const Eigen::VectorXcd dvec = projector_P_sampled(space, opf);
    const Eigen::VectorXcd a0c = a0 * c;
    const std::complex<double> zp = (dvec.array() * a0c.array().conjugate()).sum();
    const double align = std::abs(zp) / std::max(1e-300, dvec.norm() * a0c.norm());
    if (align < 0.99) throw IllConditioned("tensor factorization phase lock failed");
    const Sampled1D wfs = metaplectic_apply_1d(dinv, fs, bigN);
    const Sampled1D wgs = metaplectic_apply_1d(dinv, gs, bigN);
    const std::complex<double> lhs = sampled_inner(opf, gs);
    const std::complex<double> rhs = pair_dilated(wfs, wgs, lam, 1);
    const double match = std::abs(lhs) / std::max(1e-300, std::abs(rhs));
    if (std::abs(rhs) < 1e-8 || match < 0.99 || match > 1.01) {
        throw IllConditioned("tensor factorization phase transfer failed");
    }
    const std::complex<double> zf = zp * std::conj(lhs) * rhs;
    const Eigen::MatrixXcd a0p = (zf / std::abs(zf)) * a0;

    CorrelationSeries out;
    out.mode = bigN;
    out.grid = grid.count;
    out.values.resize(bigT);

    Eigen::MatrixXcd apow = Eigen::MatrixXcd::Identity(d, d);
    for (int t = 1; t <= bigT; ++t) {
        apow = apow * a0p;
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < d; ++j) {
            for (int l = 0; l < d; ++l) {
                const std::complex<double> pairing = pair_dilated(wf[j], wg[l], lam, t);
                acc += u.a[j] * std::conj(v.a[l]) * std::conj(apow(l, j)) * pairing;
            }
        }
        out.values[t - 1] = acc;
    }
    return out;
}

namespace {

// Second and fourth derivatives at 0 of the image of f under the normal-form
// conjugation, by central differences on the engine grid.
struct ImageDerivs {
    std::complex<double> d2, d4;
};

ImageDerivs image_derivs_at_zero(const Eigen::Matrix2d& dinv, const SchwartzSpec& f,
                                 const EngineGrid& grid, int bigN) {
    const Sampled1D w = metaplectic_apply_1d(dinv, sample_on_grid(f, grid), bigN);
    const int i0 = static_cast<int>(std::lround(-w.x0 / w.dx));
    if (i0 < 2 || i0 + 2 >= w.size() || std::abs(w.x_at(i0)) > 1e-9) {
        throw Error("probe calibration grid does not contain 0");
    }
    const double dx2 = w.dx * w.dx;
    ImageDerivs d;
    d.d2 = (w.v[i0 - 1] - 2.0 * w.v[i0] + w.v[i0 + 1]) / dx2;
    d.d4 = (w.v[i0 - 2] - 4.0 * w.v[i0 - 1] + 6.0 * w.v[i0] - 4.0 * w.v[i0 + 1] + w.v[i0 + 2]) /
           (dx2 * dx2);
    return d;
}

}  // namespace

CorrelationSeries leading_band_series(const CatMap& m, int mode, int bigT, int grid,
                                      int threads) {
    if (m.n != 1) throw Error("leading_band_series: only n = 1 maps are supported");
    if (mode == 0) throw Error("leading_band_series: needs a quantum mode");
    const int bigN = std::abs(mode);

    // Band k of the dilation expansion enters through the k-th derivative at
    // 0 of the u profile's image and the k-th moment of the v profile's
    // image. Even profiles centered at 0 have even images, killing the odd
    // bands on both sides; the Hermite corrections solve a 2x2 system that
    // zeroes the second and fourth derivatives of the combined u image.
    const double wu = 0.40, wv = 0.45;
    const SchwartzSpec fg = SchwartzSpec::gaussian(1, 0.0, wu, 8);
    const SchwartzSpec fh2 = SchwartzSpec::hermite(1, 2, 0.0, wu, 8);
    const SchwartzSpec fh4 = SchwartzSpec::hermite(1, 4, 0.0, wu, 8);

    const NormalForm nf = normal_form(m);
    const Eigen::Matrix2d dinv = to_matrix2(nf.d.inverse());
    const EngineGrid egrid = make_engine_grid(bigN);
    const ImageDerivs dg = image_derivs_at_zero(dinv, fg, egrid, bigN);
    const ImageDerivs dh2 = image_derivs_at_zero(dinv, fh2, egrid, bigN);
    const ImageDerivs dh4 = image_derivs_at_zero(dinv, fh4, egrid, bigN);

    Eigen::Matrix2cd sys;
    sys << dh2.d2, dh4.d2, dh2.d4, dh4.d4;
    Eigen::Vector2cd rhs;
    rhs << -dg.d2, -dg.d4;
    const Eigen::Vector2cd p = sys.fullPivLu().solve(rhs);

    const int d = bigN;  // n = 1
    Eigen::VectorXcd au(d), av(d);
    for (int j = 0; j < d; ++j) {
        au[j] = std::polar(1.0 / std::sqrt(double(d)), two_pi * 0.61803398875 * (j + 1.0));
        av[j] = std::polar(1.0 / std::sqrt(double(d)), two_pi * 0.61803398875 * (j + 1.0) * 2.0);
    }
    const ModeObservable v = ModeObservable::quantum(
        mode, av, std::vector<SchwartzSpec>(d, SchwartzSpec::gaussian(1, 0.0, wv, 8)));

    CorrelationSeries total;
    for (int part = 0; part < 3; ++part) {
        const SchwartzSpec& spec = part == 0 ? fg : (part == 1 ? fh2 : fh4);
        const std::complex<double> coef = part == 0 ? 1.0 : (part == 1 ? p(0) : p(1));
        const ModeObservable u =
            ModeObservable::quantum(mode, coef * au, std::vector<SchwartzSpec>(d, spec));
        const CorrelationSeries s = correlation_series(m, u, v, bigT, grid, threads);
        if (part == 0) {
            total = s;
        } else {
            for (int t = 0; t < bigT; ++t) {
                total.values[t] += s.values[t];
                total.values_coarse[t] += s.values_coarse[t];
            }
        }
    }
    total.certified_T = 0;
    while (total.certified_T < bigT &&
           std::abs(total.values[total.certified_T] - total.values_coarse[total.certified_T]) <=
               1e-4) {
        ++total.certified_T;
    }
    return total;
}

PoleSet extract_poles(const Eigen::VectorXcd& series, int model_order, double noise_floor) {
    const int bigT = static_cast<int>(series.size());
    if (bigT < 2) throw Error("extract_poles: need at least two samples");
    if (model_order < 1) throw Error("extract_poles: model order must be positive");
    const int rows = bigT / 2;
    const int cols = bigT - rows;
    if (bigT < 2 * model_order) model_order = rows;

    Eigen::MatrixXcd h0(rows, cols), h1(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            h0(r, c) = series[r + c];
            h1(r, c) = series[r + c + 1];
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;

    PoleSet out;
    out.pencil_rows = rows;
    const double floor_eff =
        noise_floor > 0.0 ? noise_floor : 1e-11 * std::max(1e-300, series.cwiseAbs().maxCoeff());
    out.noise_floor = floor_eff;
    if (smax <= floor_eff) return out;

    int rank = 0;
    while (rank < sv.size() && sv[rank] > std::max(floor_eff, smax * 1e-12)) ++rank;
    rank = std::min(rank, model_order);
    out.rank = rank;

    const Eigen::MatrixXcd up = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXcd vp = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd sp = sv.head(rank);
    const Eigen::MatrixXcd pencil =
        sp.cast<std::complex<double>>().cwiseInverse().asDiagonal() * (up.adjoint() * h1 * vp);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(pencil, false);
    std::vector<std::complex<double>> zs;
    for (int i = 0; i < rank; ++i) zs.push_back(es.eigenvalues()[i]);

    // Residues from the Vandermonde least-squares fit over the full series.
    Eigen::MatrixXcd vand(bigT, rank);
    for (int t = 1; t <= bigT; ++t) {
        for (int i = 0; i < rank; ++i) vand(t - 1, i) = std::pow(zs[i], t);
    }
    const Eigen::VectorXcd res = vand.colPivHouseholderQr().solve(series);

    for (int i = 0; i < rank; ++i) {
        if (std::abs(zs[i]) >= 1.0 - 1e-9) {
            out.dropped.push_back(zs[i]);
            continue;
        }
        if (std::abs(zs[i]) < 1e-12) continue;
        Pole p;
        p.z = zs[i];
        p.residue = res[i];
        p.reliable = std::abs(res[i]) * std::abs(zs[i]) > 10.0 * floor_eff;
        out.poles.push_back(p);
    }
    std::sort(out.poles.begin(), out.poles.end(),
              [](const Pole& a, const Pole& b) { return std::abs(a.z) > std::abs(b.z); });
    return out;
}

PoleComparison compare_outer_band(const PoleSet& poles, double scale,
                                  const std::vector<double>& predicted_phases, double rel_tol,
                                  double phase_tol) {
    PoleComparison cmp;

    // Merge predicted phases that coincide: coincident predicted resonances
    // are a single pole of the correlation function.
    std::vector<double> pred = predicted_phases;
    std::sort(pred.begin(), pred.end());
    std::vector<double> dedup;
    for (double p : pred) {
        if (dedup.empty() || std::abs(p - dedup.back()) > 1e-6) dedup.push_back(p);
    }
    if (dedup.size() >= 2 && (two_pi - (dedup.back() - dedup.front())) < 1e-6) dedup.pop_back();
    cmp.expected_count = static_cast<int>(dedup.size());

    std::vector<double> pole_args;
    for (const auto& p : poles.poles) {
        const double ratio = std::abs(p.z) / scale;
        if (p.reliable && ratio > 0.7 && ratio < 1.4) {
            ++cmp.outer_count;
            cmp.max_modulus_rel_err = std::max(cmp.max_modulus_rel_err, std::abs(ratio - 1.0));
            double a = std::arg(p.z);
            if (a < 0) a += two_pi;
            pole_args.push_back(a);
        }
    }

    cmp.moduli_ok = cmp.outer_count == cmp.expected_count && cmp.max_modulus_rel_err <= rel_tol;

    const std::vector<double> dp = phase_difference_multiset(pole_args);
    const std::vector<double> dq = phase_difference_multiset(dedup);
    if (dp.size() == dq.size()) {
        double worst = 0.0;
        for (std::size_t i = 0; i < dp.size(); ++i) worst = std::max(worst, std::abs(dp[i] - dq[i]));
        cmp.max_phase_diff_err = worst;
        cmp.phases_ok = worst <= phase_tol;
    } else {
        cmp.phases_ok = false;
        cmp.max_phase_diff_err = 1e9;
    }
    return cmp;
}

Theorem2Report theorem2_report(const CatMap& m, int bigN, const ModeObservable& u,
                               const ModeObservable& v, int bigT, int grid, int threads) {
    if (!parity_vector(m).is_zero()) throw ParityNonzero("asymptotics require parity zero");
    const CorrelationSeries series = correlation_series(m, u, v, bigT, grid, threads);
    const NormalForm nf = normal_form(m);
    const double scale = std::sqrt(std::abs(nf.det_e()));

    const QuantumSpace space = QuantumSpace::make_zero(m.n, bigN);

    Theorem2Report rep;
    rep.phases = eigenphases(quantum_cat_map(m, space));
    std::vector<double> basis;
    for (double p : rep.phases) {
        bool dup = false;
        for (double q : basis) dup = dup || std::abs(p - q) < 1e-9;
        if (!dup) basis.push_back(p);
    }
    const int nb = static_cast<int>(basis.size());

    // The amplification |det E|^{t/2} magnifies sample errors exponentially,
    // so even the marginal extra sample allowed for pole extraction is too
    // dirty here; fit strictly the certified prefix.
    const int fitT = std::min(static_cast<int>(series.values.size()), series.certified_T);
    if (fitT < nb + 2) {
        throw GridTooCoarse("grid certifies too few samples for the asymptotic fit");
    }
    rep.fit_T = fitT;
    rep.r.resize(fitT);
    for (int t = 1; t <= fitT; ++t) rep.r[t - 1] = series.values[t - 1] * std::pow(scale, t);

    const auto residual_for = [&](int orient, double omega, Eigen::VectorXcd* coeffs_out) {
        Eigen::MatrixXcd vand(fitT, nb);
        for (int t = 1; t <= fitT; ++t) {
            for (int j = 0; j < nb; ++j) {
                vand(t - 1, j) = std::polar(1.0, (orient * basis[j] + omega) * t);
            }
        }
        const Eigen::VectorXcd c = vand.colPivHouseholderQr().solve(rep.r);
        if (coeffs_out) *coeffs_out = c;
        return (rep.r - vand * c).norm();
    };

    double best = 1e300;
    for (int orient : {1, -1}) {
        for (int k = 0; k < 720; ++k) {
            const double omega = two_pi * k / 720.0;
            const double res = residual_for(orient, omega, nullptr);
            if (res < best) {
                best = res;
                rep.orientation = orient;
                rep.omega = omega;
            }
        }
    }
    // Golden-section refinement of the offset around the best grid value.
    {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = rep.omega - two_pi / 720.0, b = rep.omega + two_pi / 720.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = residual_for(rep.orientation, x1, nullptr);
        double f2 = residual_for(rep.orientation, x2, nullptr);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = residual_for(rep.orientation, x1, nullptr);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = residual_for(rep.orientation, x2, nullptr);
            }
        }
        rep.omega = 0.5 * (a + b);
    }

    Eigen::VectorXcd coeffs;
    residual_for(rep.orientation, rep.omega, &coeffs);
    rep.coeffs = coeffs;

    Eigen::MatrixXcd vand(fitT, nb);
    for (int t = 1; t <= fitT; ++t) {
        for (int j = 0; j < nb; ++j) {
            vand(t - 1, j) = std::polar(1.0, (rep.orientation * basis[j] + rep.omega) * t);
        }
    }
    const Eigen::VectorXcd fitted = vand * coeffs;
    rep.residuals.resize(fitT);
    for (int t = 0; t < fitT; ++t) rep.residuals[t] = std::abs(rep.r[t] - fitted[t]);

    const Eigen::MatrixXd einv = nf.e.inverse();
    Eigen::JacobiSVD<Eigen::MatrixXd> esvd(einv);
    rep.ratio_bound = esvd.singularValues()[0] + 0.1;

    const double rmax = rep.r.cwiseAbs().maxCoeff();
    const double emax = rep.residuals.maxCoeff();
    const double emin = rep.residuals.minCoeff();
    const double floor_eff = std::max(1e-13, 2.0 * emin);

    // Per-step decay of the residuals while they sit above the noise floor.
    // One step into the floor still counts, so a fit whose residual dies off
    // within a sample or two certifies instead of starving the estimate.
    std::vector<double> lr;
    for (int t = 0; t + 1 < fitT; ++t) {
        if (rep.residuals[t] <= floor_eff) break;
        lr.push_back(std::log(std::max(1e-300, rep.residuals[t + 1]) / rep.residuals[t]));
        if (rep.residuals[t + 1] <= floor_eff) break;
    }
    if (lr.empty()) {
        rep.decay_ratio = 0.0;
        rep.residual_decays = emax <= 1e-6 * std::max(1e-300, rmax);
    } else {
        double mean = 0.0;
        for (double v : lr) mean += v;
        mean /= static_cast<double>(lr.size());
        rep.decay_ratio = std::exp(mean);
        rep.residual_decays =
            rep.decay_ratio <= rep.ratio_bound || emax <= 1e-6 * std::max(1e-300, rmax);
    }
    return rep;
}

CorollaryReport corollary_report(const CatMap& m, const Observable& u, const Observable& v,
                                 int bigT, int grid, double remainder_bound, int threads) {
    if (!parity_vector(m).is_zero()) throw ParityNonzero("asymptotics require parity zero");
    CorollaryReport rep;
    rep.total = correlation_series_multi(m, u, v, bigT, grid, threads).values;

    const ModeObservable* u0 = nullptr;
    const ModeObservable* v0 = nullptr;
    for (const auto& p : u.parts) {
        if (p.mode == 0) u0 = &p;
    }
    for (const auto& p : v.parts) {
        if (p.mode == 0) v0 = &p;
    }

    rep.mode0_quad = Eigen::VectorXcd::Zero(bigT);
    rep.mode0_exact = Eigen::VectorXcd::Zero(bigT);
    rep.mean_product = {0.0, 0.0};
    if (u0 && v0) {
        rep.mode0_quad = correlation_series(m, *u0, *v0, bigT, grid, threads).values;
        rep.mode0_exact = mode0_series_exact(m, *u0, *v0, bigT);
        rep.mean_product =
            fourier_coeff(*u0, IVec::Zero(2 * m.n)) * std::conj(fourier_coeff(*v0, IVec::Zero(2 * m.n)));
    }
    rep.mode0_err = (rep.mode0_quad - rep.mode0_exact).cwiseAbs().maxCoeff();
    rep.mode0_matches = rep.mode0_err <= 1e-10;

    const NormalForm nf = normal_form(m);
    const double scale = std::sqrt(std::abs(nf.det_e()));
    for (int t = 1; t <= bigT; ++t) {
        const double rem = std::abs(rep.total[t - 1] - rep.mean_product) * std::pow(scale, t);
        rep.max_scaled_remainder = std::max(rep.max_scaled_remainder, rem);
    }
    rep.remainder_bounded = rep.max_scaled_remainder <= remainder_bound;
    return rep;
}

}  // namespace pqcat

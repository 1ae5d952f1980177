#include "pqcat/prequantum.hpp"

#include <cmath>

namespace pqcat {

double mod1(double s) {
    double r = s - std::floor(s);
    if (r >= 1.0) r = 0.0;  // guard against s - floor(s) rounding up to 1
    return r;
}

namespace {

Eigen::VectorXd mod1_vec(const Eigen::VectorXd& x) {
    Eigen::VectorXd r(x.size());
    for (int i = 0; i < x.size(); ++i) r[i] = mod1(x[i]);
    return r;
}

}  // namespace

BundlePoint group_law(const BundlePoint& p, const BundlePoint& q) {
    BundlePoint r;
    r.x = p.x + q.x;
    r.s = mod1(p.s + q.s + 0.5 * symplectic_form(p.x, q.x));
    return r;
}

BundlePoint group_inverse(const BundlePoint& p) {
    return BundlePoint{-p.x, mod1(-p.s)};
}

BundlePoint lattice_embed(const IVec& w) {
    BundlePoint r;
    r.x.resize(static_cast<int>(w.size()));
    for (int i = 0; i < r.x.size(); ++i) r.x[i] = static_cast<double>(w[i]);
    r.s = mod1(0.5 * static_cast<double>(quadratic_form(w)));
    return r;
}

BundlePoint gamma_reduce(const BundlePoint& p) {
    const int m = p.dim2n();
    IVec w(m);
    Eigen::VectorXd wd(m);
    for (int i = 0; i < m; ++i) {
        w[i] = -static_cast<std::int64_t>(std::floor(p.x[i]));
        wd[i] = static_cast<double>(w[i]);
    }
    BundlePoint r;
    r.x = mod1_vec(p.x + wd);
    r.s = mod1(p.s + 0.5 * (static_cast<double>(quadratic_form(w)) + symplectic_form(wd, p.x)));
    return r;
}

PrequantumMap PrequantumMap::from_cat_map(const CatMap& m) {
    PrequantumMap pm;
    pm.map = m;
    pm.parity = parity_vector(m);
    pm.minv = m.inverse();
    return pm;
}

BundlePoint PrequantumMap::forward(const BundlePoint& p) const {
    Eigen::VectorXd phi = parity.phi.cast<double>();
    Eigen::VectorXd y = map.real() * p.x;
    return gamma_reduce(BundlePoint{y, mod1(p.s + 0.5 * symplectic_form(phi, y))});
}

BundlePoint PrequantumMap::backward(const BundlePoint& p) const {
    Eigen::VectorXd phi = parity.phi.cast<double>();
    Eigen::VectorXd y = minv.cast<double>() * p.x;
    return gamma_reduce(BundlePoint{y, mod1(p.s - 0.5 * symplectic_form(phi, p.x))});
}

BundlePoint PrequantumMap::iterate(const BundlePoint& p, long t) const {
    BundlePoint cur = gamma_reduce(p);
    for (long i = 0; i < t; ++i) cur = forward(cur);
    for (long i = 0; i > t; --i) cur = backward(cur);
    return cur;
}

}  // namespace pqcat

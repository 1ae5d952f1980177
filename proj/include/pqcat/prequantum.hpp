#pragma once

// Points of the prequantum circle bundle over the 2n-torus and the lifted cat
// map dynamics. A point is (x, s) with x in R^{2n} and the circle coordinate
// s stored in turns (e^{2 pi i s}), kept as a real number mod 1 so that phase
// accumulation along orbits stays exact to rounding.
//
// Group law on R^{2n} x U(1):   (x,s)(x',s') = (x+x', s+s'+sigma(x,x')/2).
// Lattice embedding:            w in Z^{2n} -> (w, Q(w)/2).
// Lift of M with parity phi:    (x,s) -> (Mx, s + sigma(phi, Mx)/2).

#include "pqcat/symplectic.hpp"

#include <Eigen/Dense>

namespace pqcat {

struct BundlePoint {
    Eigen::VectorXd x;
    double s = 0.0;  // turns

    int dim2n() const { return static_cast<int>(x.size()); }
};

double mod1(double s);

BundlePoint group_law(const BundlePoint& p, const BundlePoint& q);
BundlePoint group_inverse(const BundlePoint& p);
BundlePoint lattice_embed(const IVec& w);

// Left-translate by the embedded lattice point w = -floor(x) so that the
// base lands in [0,1)^{2n}; the phase picks up (Q(w) + sigma(w,x))/2 turns.
BundlePoint gamma_reduce(const BundlePoint& p);

struct PrequantumMap {
    CatMap map;
    ParityVector parity;
    IMat minv;

    static PrequantumMap from_cat_map(const CatMap& m);

    BundlePoint forward(const BundlePoint& p) const;   // reduced output
    BundlePoint backward(const BundlePoint& p) const;  // exact inverse, reduced
    BundlePoint iterate(const BundlePoint& p, long t) const;
};

}  // namespace pqcat

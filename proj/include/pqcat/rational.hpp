#pragma once

// Exact arithmetic used wherever the contracts demand it: parity vectors,
// the connection parameter, and the solutions of the theta condition are all
// rational with small denominators, but intermediate Smith/adjugate work can
// blow past 64 bits, so everything runs on boost multiprecision types.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace pqcat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntMat = std::vector<std::vector<Int>>;
using IntVec = std::vector<Int>;
using RatMat = std::vector<std::vector<Rat>>;
using RatVec = std::vector<Rat>;

double to_double(const Rat& r);

// Fractional part in [0,1).
Rat frac(const Rat& r);

// Canonical "p/q" rendering ("p" when q == 1), and the inverse parser.
std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

IntMat identity_int(int m);
IntMat mul(const IntMat& a, const IntMat& b);
Int det(const IntMat& a);

// Exact inverse of a nonsingular integer matrix (fraction-free Gauss).
RatMat inverse_rational(const IntMat& a);
RatVec mat_vec(const RatMat& a, const RatVec& x);

}  // namespace pqcat

#pragma once

// Smith normal form over the integers: U * A * V = diag(d_0, ..., d_{m-1})
// with U, V unimodular and d_i >= 1 (A must be square nonsingular here).
// Used to enumerate the solutions of (I - M) theta = (N/2) phi mod Z^{2n}.

#include "pqcat/rational.hpp"

namespace pqcat {

struct SmithForm {
    IntMat u;      // unimodular, rows act on the left
    IntMat v;      // unimodular, columns act on the right
    IntVec diag;   // positive diagonal entries, one per row
};

SmithForm smith_normal_form(const IntMat& a);

}  // namespace pqcat

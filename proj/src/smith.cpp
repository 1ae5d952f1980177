#include "pqcat/smith.hpp"

#include "pqcat/errors.hpp"

#include <utility>

namespace pqcat {

namespace {

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace

SmithForm smith_normal_form(const IntMat& a) {
    const int m = static_cast<int>(a.size());
    IntMat w = a, u = identity_int(m), v = identity_int(m);

    // Every helper applies the same elementary operation to w and to u or v,
    // so u * a * v == w holds at all times.
    auto swap_rows = [&](int i, int j) { std::swap(w[i], w[j]); std::swap(u[i], u[j]); };
    auto swap_cols = [&](int i, int j) {
        for (int r = 0; r < m; ++r) { std::swap(w[r][i], w[r][j]); std::swap(v[r][i], v[r][j]); }
    };
    auto add_row = [&](int dst, int src, const Int& f) {
        for (int c = 0; c < m; ++c) { w[dst][c] += f * w[src][c]; u[dst][c] += f * u[src][c]; }
    };
    auto add_col = [&](int dst, int src, const Int& f) {
        for (int r = 0; r < m; ++r) { w[r][dst] += f * w[r][src]; v[r][dst] += f * v[r][src]; }
    };
    auto negate_row = [&](int i) {
        for (int c = 0; c < m; ++c) { w[i][c] = -w[i][c]; u[i][c] = -u[i][c]; }
    };

    // Diagonalize the trailing block starting at t0.
    auto reduce_from = [&](int t0) {
        for (int t = t0; t < m; ++t) {
            int pr = -1, pc = -1;
            for (int i = t; i < m; ++i)
                for (int j = t; j < m; ++j)
                    if (w[i][j] != 0 && (pr < 0 || iabs(w[i][j]) < iabs(w[pr][pc]))) { pr = i; pc = j; }
            if (pr < 0) throw Error("smith_normal_form: singular matrix");
            if (pr != t) swap_rows(pr, t);
            if (pc != t) swap_cols(pc, t);

            bool dirty = true;
            while (dirty) {
                dirty = false;
                for (int i = t + 1; i < m; ++i) {
                    if (w[i][t] == 0) continue;
                    add_row(i, t, -w[i][t] / w[t][t]);
                    if (w[i][t] != 0) { swap_rows(i, t); dirty = true; }
                }
                for (int j = t + 1; j < m; ++j) {
                    if (w[t][j] == 0) continue;
                    add_col(j, t, -w[t][j] / w[t][t]);
                    if (w[t][j] != 0) { swap_cols(j, t); dirty = true; }
                }
            }
            if (w[t][t] < 0) negate_row(t);
        }
    };

    reduce_from(0);

    // Divisibility chain d_0 | d_1 | ...; each fix replaces d_i by a proper
    // divisor, so the loop terminates.
    bool chain_ok = false;
    while (!chain_ok) {
        chain_ok = true;
        for (int i = 0; i + 1 < m; ++i) {
            if (w[i + 1][i + 1] % w[i][i] == 0) continue;
            add_col(i, i + 1, 1);
            reduce_from(i);
            chain_ok = false;
            break;
        }
    }

    SmithForm out;
    out.u = std::move(u);
    out.v = std::move(v);
    out.diag.resize(m);
    for (int i = 0; i < m; ++i) out.diag[i] = w[i][i];
    return out;
}

}  // namespace pqcat

#include "pqcat/rational.hpp"

#include "pqcat/errors.hpp"

#include <stdexcept>

namespace pqcat {

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat frac(const Rat& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    Int num = numerator(r), den = denominator(r);  // den > 0 canonical
    Int q = num / den;
    if (num < 0 && q * den != num) q -= 1;  // floor division
    return r - Rat(q);
}

std::string rat_to_string(const Rat& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw ConfigError("rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw ConfigError("cannot parse rational: " + s);
    }
}

IntMat identity_int(int m) {
    IntMat a(m, IntVec(m, 0));
    for (int i = 0; i < m; ++i) a[i][i] = 1;
    return a;
}

IntMat mul(const IntMat& a, const IntMat& b) {
    const int m = static_cast<int>(a.size());
    const int k = static_cast<int>(b.size());
    const int p = static_cast<int>(b[0].size());
    IntMat c(m, IntVec(p, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < p; ++j)
            for (int l = 0; l < k; ++l) c[i][j] += a[i][l] * b[l][j];
    return c;
}

Int det(const IntMat& a) {
    // Bareiss fraction-free elimination, exact over cpp_int.
    const int m = static_cast<int>(a.size());
    IntMat w = a;
    Int prev = 1, sign = 1;
    for (int k = 0; k < m - 1; ++k) {
        if (w[k][k] == 0) {
            int pivot = -1;
            for (int i = k + 1; i < m; ++i)
                if (w[i][k] != 0) { pivot = i; break; }
            if (pivot < 0) return 0;
            std::swap(w[k], w[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j)
                w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) / prev;
        prev = w[k][k];
    }
    return sign * w[m - 1][m - 1];
}

RatMat inverse_rational(const IntMat& a) {
    const int m = static_cast<int>(a.size());
    RatMat w(m, RatVec(2 * m, Rat(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) w[i][j] = Rat(a[i][j]);
        w[i][m + i] = 1;
    }
    for (int c = 0; c < m; ++c) {
        int pivot = -1;
        for (int i = c; i < m; ++i)
            if (w[i][c] != 0) { pivot = i; break; }
        if (pivot < 0) throw Error("inverse_rational: singular matrix");
        std::swap(w[c], w[pivot]);
        Rat inv = Rat(1) / w[c][c];
        for (int j = c; j < 2 * m; ++j) w[c][j] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == c || w[i][c] == 0) continue;
            Rat f = w[i][c];
            for (int j = c; j < 2 * m; ++j) w[i][j] -= f * w[c][j];
        }
    }
    RatMat out(m, RatVec(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[i][j] = w[i][m + j];
    return out;
}

RatVec mat_vec(const RatMat& a, const RatVec& x) {
    RatVec y(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

}  // namespace pqcat

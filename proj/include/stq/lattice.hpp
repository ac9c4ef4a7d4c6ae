#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stq {

using Q = boost::rational<long long>;
using Vec = std::vector<Q>;

/* Non-template overloads: boost's mixed rational/integer equality recurses forever
   under C++20 rewritten comparisons. */
inline bool operator==(const Q &a, long long b) { return a.denominator() == 1 && a.numerator() == b; }
inline bool operator==(const Q &a, int b) { return a == static_cast<long long>(b); }
inline bool operator==(long long b, const Q &a) { return a == b; }
inline bool operator==(int b, const Q &a) { return a == static_cast<long long>(b); }
inline bool operator!=(const Q &a, long long b) { return !(a == b); }
inline bool operator!=(const Q &a, int b) { return !(a == b); }

/* weight (or cocharacter) -> multiplicity */
using Weights = std::map<Vec, long long>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Vec zeros(std::size_t n) { return Vec(n, Q(0)); }

inline Vec unit(std::size_t n, std::size_t i)
{
    Vec v = zeros(n);
    v.at(i) = 1;
    return v;
}

inline Q dot(const Vec &a, const Vec &b)
{
    if (a.size() != b.size())
        throw Error("dimension mismatch in pairing");
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            s += a[i] * b[i];
    return s;
}

inline Vec operator+(const Vec &a, const Vec &b)
{
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += b.at(i);
    return r;
}

inline Vec operator-(const Vec &a, const Vec &b)
{
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= b.at(i);
    return r;
}

inline Vec operator-(const Vec &a)
{
    Vec r = a;
    for (auto &x : r)
        x = -x;
    return r;
}

inline Vec operator*(const Q &c, const Vec &a)
{
    Vec r = a;
    for (auto &x : r)
        x *= c;
    return r;
}

inline Vec &operator+=(Vec &a, const Vec &b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b.at(i);
    return a;
}

inline bool is_zero(const Vec &a)
{
    for (const auto &x : a)
        if (x != 0)
            return false;
    return true;
}

inline bool is_integer(const Q &q) { return q.denominator() == 1; }

inline std::string str(const Q &q)
{
    if (q.denominator() == 1)
        return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline std::string str(const Vec &v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ",";
        s += str(v[i]);
    }
    return s + ")";
}

inline long long total(const Weights &w)
{
    long long n = 0;
    for (const auto &[k, m] : w)
        n += m;
    return n;
}

inline void add_to(Weights &w, const Vec &k, long long m)
{
    if (m == 0)
        return;
    auto it = w.find(k);
    if (it == w.end()) {
        w.emplace(k, m);
        return;
    }
    it->second += m;
    if (it->second == 0)
        w.erase(it);
}

inline Weights merge(const Weights &a, const Weights &b)
{
    Weights r = a;
    for (const auto &[k, m] : b)
        add_to(r, k, m);
    return r;
}

/* character of a tensor product */
inline Weights convolve(const Weights &a, const Weights &b)
{
    Weights r;
    for (const auto &[x, m] : a)
        for (const auto &[y, n] : b)
            add_to(r, x + y, m * n);
    return r;
}

inline Weights negate(const Weights &a)
{
    Weights r;
    for (const auto &[x, m] : a)
        r.emplace(-x, m);
    return r;
}

/* Solve A x = b over Q; A is row-major, square or tall with full column rank.
   Throws when inconsistent. */
inline Vec solve(std::vector<Vec> A, Vec b)
{
    std::size_t rows = A.size();
    std::size_t cols = rows ? A[0].size() : 0;
    std::vector<int> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && A[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0)
                continue;
            Q f = A[i][c] / A[r][c];
            for (std::size_t j = c; j < cols; ++j)
                A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivcol.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0)
            throw Error("inconsistent linear system");
    Vec x = zeros(cols);
    for (std::size_t i = 0; i < r; ++i)
        x[pivcol[i]] = b[i] / A[i][pivcol[i]];
    return x;
}

inline Q determinant(std::vector<Vec> A)
{
    std::size_t n = A.size();
    Q det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && A[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(A[p], A[c]);
            det = -det;
        }
        det *= A[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (A[i][c] == 0)
                continue;
            Q f = A[i][c] / A[c][c];
            for (std::size_t j = c; j < n; ++j)
                A[i][j] -= f * A[c][j];
        }
    }
    return det;
}

} // namespace stq

#pragma once

#include "tables.hpp"

#include <complex>
#include <functional>
#include <numbers>
#include <random>

namespace stq {

using cplx = std::complex<double>;

/* Unramified parameter: a point of the dual torus, kept as logarithms so that
   half-integral weights are evaluated on one consistent branch. */
struct SatakeParameter {
    Datum d;
    std::vector<cplx> t; /* c = exp(t), one entry per coordinate of d */
    double q = 2;
    bool tempered = false;

    static SatakeParameter from_coordinates(const Datum &d, const std::vector<cplx> &z, double q)
    {
        if (static_cast<int>(z.size()) != d->dim)
            throw Error("Satake parameter needs " + std::to_string(d->dim) + " coordinates, got " + std::to_string(z.size()));
        SatakeParameter c{d, {}, q, true};
        for (const auto &x : z) {
            if (x == cplx(0))
                throw Error("Satake coordinates must be nonzero");
            c.t.push_back(std::log(x));
            c.tempered = c.tempered && std::abs(std::abs(x) - 1) < 1e-14;
        }
        c.check();
        return c;
    }

    void check() const
    {
        if (!(q > 1))
            throw Error("residue cardinality must exceed 1");
        if (static_cast<int>(t.size()) != d->dim)
            throw Error("Satake parameter has the wrong length");
    }

    std::vector<cplx> coordinates() const
    {
        std::vector<cplx> z;
        for (const auto &x : t)
            z.push_back(std::exp(x));
        return z;
    }

    cplx eval(const Vec &weight) const
    {
        cplx e = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (weight[i] != 0)
                e += boost::rational_cast<double>(weight[i]) * t[i];
        return std::exp(e);
    }
};

inline SatakeParameter random_tempered(const Datum &d, double q, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    SatakeParameter c{d, {}, q, true};
    for (int i = 0; i < d->dim; ++i)
        c.t.emplace_back(0, u(rng));
    return c;
}

/* w.c, for w a word in the simple reflections (the last letter acts first). */
inline SatakeParameter weyl_act(const SatakeParameter &c, const WeylElement &w)
{
    SatakeParameter out = c;
    for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) {
        const Vec &a = c.d->simple[*it], &av = c.d->cosimple[*it];
        cplx pr = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            pr += boost::rational_cast<double>(a[i]) * out.t[i];
        for (std::size_t i = 0; i < av.size(); ++i)
            out.t[i] -= pr * boost::rational_cast<double>(av[i]);
    }
    return out;
}

struct LFactorValue {
    cplx value = 1;
    /* (eigenvalue, exponent): value = prod (1 - eigenvalue q^-s)^-exponent */
    std::vector<std::pair<cplx, long long>> factors;
};

inline LFactorValue lfactor_weights(const Weights &w, const SatakeParameter &c, cplx s)
{
    c.check();
    LFactorValue out;
    cplx qs = std::pow(cplx(c.q), -s);
    for (const auto &[wt, m] : w) {
        cplx ev = c.eval(wt);
        cplx f = 1.0 - ev * qs;
        if (std::abs(f) < 1e-12)
            throw Error("pole of the L-factor at the weight " + str(wt));
        out.value *= std::pow(f, -static_cast<double>(m));
        out.factors.push_back({ev, m});
    }
    return out;
}

inline LFactorValue lfactor(const RepSum &rho, const SatakeParameter &c, cplx s)
{
    if (rho.d && rho.d->dim != c.d->dim)
        throw Error("representation and Satake parameter live on different tori");
    return lfactor_weights(rho.parts.empty() ? Weights{} : rho.weights(), c, s);
}

/* Adjoint representation of the dual group on its full Lie algebra. */
inline Weights adjoint_weights(const Datum &d)
{
    Weights w;
    add_to(w, zeros(d->dim), d->dim);
    for (const auto &a : d->pos) {
        add_to(w, a, 1);
        add_to(w, -a, 1);
    }
    return w;
}

/* Product of local factors over several places; each parameter carries its own q. */
inline cplx lseries_partial(const RepSum &rho, const std::vector<SatakeParameter> &places, cplx s)
{
    cplx v = 1;
    for (const auto &c : places)
        v *= lfactor(rho, c, s).value;
    return v;
}

struct LTerm {
    RepSum rho;
    cplx s;
    int power = 1;
};

inline cplx product_of(const std::vector<LTerm> &terms, const SatakeParameter &c)
{
    cplx v = 1;
    for (const auto &t : terms)
        v *= std::pow(lfactor(t.rho, c, t.s).value, static_cast<double>(t.power));
    return v;
}

/* L(1/2, rho_hat) / L(1, Ad), times any extra terms (e.g. a shifted factor of a theta lift).
   This is the local expression only; no period value is asserted. */
inline cplx conjecture_rhs(const Instance &in, const SatakeParameter &c, const std::vector<LTerm> &extra = {})
{
    cplx num = lfactor(in.rho_hat, c, 0.5).value;
    cplx den = lfactor_weights(adjoint_weights(in.Ghat), c, 1.0).value;
    return num / den * product_of(extra, c);
}

/* General form: L(1/2, rho_H') prod_k L(k/2 + 1, rho_k) / L(1, Ad)^2. */
inline cplx conjecture_rhs(const RepSum &rho_Hprime, const std::vector<std::pair<int, RepSum>> &graded,
                           const SatakeParameter &c)
{
    cplx v = lfactor(rho_Hprime, c, 0.5).value;
    for (const auto &[k, r] : graded)
        v *= lfactor(r, c, k / 2.0 + 1).value;
    cplx ad = lfactor_weights(adjoint_weights(c.d), c, 1.0).value;
    return v / (ad * ad);
}

/* ---- symmetric functions ---- */

struct CauchyResult {
    long double lhs = 0, rhs = 0, error = 0, tail_bound = 0;
};

namespace detail {

/* h_0..h_N of x */
inline std::vector<long double> complete_homogeneous(const std::vector<long double> &x, int N)
{
    std::vector<long double> h(N + 1, 0);
    h[0] = 1;
    for (long double xi : x)
        for (int k = 1; k <= N; ++k)
            h[k] += xi * h[k - 1];
    return h;
}

inline long double det(std::vector<std::vector<long double>> a)
{
    std::size_t n = a.size();
    long double d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c]))
                p = r;
        if (a[p][c] == 0)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            long double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    return d;
}

/* Jacobi-Trudi */
inline long double schur(const std::vector<int> &lam, const std::vector<long double> &h)
{
    std::size_t l = lam.size();
    std::vector<std::vector<long double>> m(l, std::vector<long double>(l, 0));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) {
            long long k = lam[i] - static_cast<long long>(i) + static_cast<long long>(j);
            m[i][j] = k < 0 ? 0 : h[k];
        }
    return det(m);
}

/* partitions of n with at most r parts, each at most cap */
inline void partitions(int n, int r, int cap, std::vector<int> &cur, const std::function<void(const std::vector<int> &)> &f)
{
    if (n == 0) {
        f(cur);
        return;
    }
    if (r == 0)
        return;
    for (int p = std::min(n, cap); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, r - 1, p, cur, f);
        cur.pop_back();
    }
}

inline long double binom(int n, int k)
{
    long double b = 1;
    for (int i = 1; i <= k; ++i)
        b = b * (n - k + i) / i;
    return b;
}

} // namespace detail

/* sum over |lambda| <= cutoff of s_lambda(x) s_lambda(y), against prod (1 - x_i y_j)^-1. */
inline CauchyResult cauchy_oracle(const std::vector<double> &x, const std::vector<double> &y, int cutoff)
{
    if (cutoff < 0)
        throw Error("cutoff must be nonnegative");
    long double r = 0;
    for (double a : x)
        for (double b : y)
            r = std::max(r, std::fabs(static_cast<long double>(a) * b));
    if (r >= 1)
        throw Error("the Cauchy sum diverges: max |x_i y_j| >= 1");
    std::vector<long double> X(x.begin(), x.end()), Y(y.begin(), y.end());
    auto hx = detail::complete_homogeneous(X, cutoff), hy = detail::complete_homogeneous(Y, cutoff);
    int parts = static_cast<int>(std::min(x.size(), y.size()));
    CauchyResult out;
    out.lhs = 1;
    std::vector<int> cur;
    for (int n = 1; n <= cutoff; ++n)
        detail::partitions(n, parts, n, cur,
                           [&](const std::vector<int> &lam) { out.lhs += detail::schur(lam, hx) * detail::schur(lam, hy); });
    out.rhs = 1;
    for (long double a : X)
        for (long double b : Y)
            out.rhs /= 1 - a * b;
    out.error = std::fabs(out.lhs - out.rhs);
    /* degree-n part is h_n of the products: at most C(n+N-1, N-1) r^n for N products */
    int N = static_cast<int>(x.size() * y.size());
    if (N > 0) {
        long double term = detail::binom(cutoff + N, N - 1) * std::pow(r, cutoff + 1);
        /* the ratio of consecutive terms is at most r (n+N)/(n+1) */
        long double ratio = r * (cutoff + 1 + N) / (cutoff + 2);
        out.tail_bound = ratio < 1 ? term / (1 - ratio) : std::numeric_limits<long double>::infinity();
    }
    return out;
}

} // namespace stq

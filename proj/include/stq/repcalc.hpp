#pragma once

#include "rootdata.hpp"

#include <mutex>

namespace stq {

struct Irrep {
    Datum d;
    Vec hw;
};

/* Formal sum of irreducibles on one datum, keyed by highest weight. */
struct RepSum {
    Datum d;
    std::map<Vec, long long> parts;

    long long count() const
    {
        long long n = 0;
        for (const auto &[k, m] : parts)
            n += m;
        return n;
    }
    long long dim() const;
    Weights weights() const;
};

namespace detail {

/* Freudenthal on one simple component, in root-lattice coordinates:
   returns c -> mult for the weights lambda - sum c_i alpha_i. */
inline std::map<std::vector<int>, long long> freudenthal(const Matrix &C,
                                                          const std::vector<std::vector<int>> &posc,
                                                          const std::vector<Q> &len,
                                                          const std::vector<long long> &a)
{
    int r = static_cast<int>(C.size());
    auto ip_root = [&](const std::vector<int> &x, const std::vector<int> &y) {
        Q s = 0;
        for (int i = 0; i < r; ++i)
            if (x[i])
                for (int j = 0; j < r; ++j)
                    if (y[j] && C[i][j])
                        s += Q(static_cast<long long>(x[i]) * y[j] * C[i][j]) * len[j];
        return s;
    };
    auto ip_lambda = [&](const std::vector<int> &x, bool shift) {
        Q s = 0;
        for (int j = 0; j < r; ++j)
            if (x[j])
                s += Q(static_cast<long long>(x[j]) * (a[j] + (shift ? 1 : 0))) * len[j];
        return s;
    };
    std::map<std::vector<int>, long long> mult;
    std::vector<int> zero(r, 0);
    mult[zero] = 1;
    std::vector<std::vector<int>> level{zero};
    std::vector<Q> beta_beta, lam_beta;
    for (const auto &b : posc) {
        beta_beta.push_back(ip_root(b, b));
        lam_beta.push_back(ip_lambda(b, false));
    }
    while (!level.empty()) {
        std::set<std::vector<int>> cand;
        for (const auto &c : level)
            for (int i = 0; i < r; ++i) {
                auto n = c;
                ++n[i];
                cand.insert(n);
            }
        std::vector<std::vector<int>> next;
        for (const auto &g : cand) {
            Q denom = 2 * ip_lambda(g, true) - ip_root(g, g);
            if (denom <= 0)
                continue;
            Q num = 0;
            for (std::size_t bi = 0; bi < posc.size(); ++bi) {
                const auto &b = posc[bi];
                Q gb = ip_root(g, b);
                for (int k = 1;; ++k) {
                    std::vector<int> h = g;
                    bool ok = true;
                    for (int i = 0; i < r; ++i) {
                        h[i] -= k * b[i];
                        if (h[i] < 0)
                            ok = false;
                    }
                    if (!ok)
                        break;
                    auto it = mult.find(h);
                    if (it == mult.end())
                        continue;
                    num += Q(it->second) * (lam_beta[bi] - gb + Q(k) * beta_beta[bi]);
                }
            }
            Q m = 2 * num / denom;
            if (!is_integer(m))
                throw Error("Freudenthal produced a non-integral multiplicity");
            if (m > 0) {
                mult[g] = m.numerator();
                next.push_back(g);
            }
        }
        level = std::move(next);
    }
    return mult;
}

/* squared-length/2 of each simple root of a component, normalized so the first is 1 */
inline std::vector<Q> half_lengths(const Matrix &C)
{
    int r = static_cast<int>(C.size());
    std::vector<Q> len(r, Q(0));
    if (r == 0)
        return len;
    len[0] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                if (len[i] != 0 && len[j] == 0 && C[i][j] != 0) {
                    /* C[i][j] len_j = C[j][i] len_i */
                    len[j] = Q(C[j][i]) * len[i] / Q(C[i][j]);
                    changed = true;
                }
    }
    return len;
}

struct FreudCache {
    std::mutex mu;
    std::map<std::pair<Matrix, std::vector<long long>>, std::map<std::vector<int>, long long>> memo;
};

inline FreudCache &freud_cache()
{
    static FreudCache c;
    return c;
}

} // namespace detail

/* Full weight multiset of the irreducible with highest weight lam. */
inline Weights weight_multiplicities(const Datum &d, const Vec &lam)
{
    if (!d->dominant(lam))
        throw Error("highest weight " + str(lam) + " is not dominant");
    Weights acc{{lam, 1}};
    for (const auto &comp : d->components) {
        int r = static_cast<int>(comp.nodes.size());
        Matrix C(r, std::vector<int>(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                C[i][j] = d->cartan[comp.nodes[i]][comp.nodes[j]];
        std::vector<long long> a(r);
        bool trivial = true;
        for (int i = 0; i < r; ++i) {
            Q l = d->pair(lam, comp.nodes[i]);
            if (!is_integer(l))
                throw Error("weight " + str(lam) + " is not integral");
            a[i] = l.numerator();
            if (a[i])
                trivial = false;
        }
        if (trivial)
            continue;
        std::map<std::vector<int>, long long> local;
        {
            auto &cache = detail::freud_cache();
            std::lock_guard<std::mutex> lock(cache.mu);
            auto key = std::make_pair(C, a);
            auto it = cache.memo.find(key);
            if (it != cache.memo.end())
                local = it->second;
        }
        if (local.empty()) {
            std::vector<std::vector<int>> posc;
            for (const auto &pc : d->poscoef) {
                std::vector<int> b(r);
                bool inside = false;
                for (int i = 0; i < r; ++i) {
                    b[i] = pc[comp.nodes[i]];
                    if (b[i])
                        inside = true;
                }
                if (inside)
                    posc.push_back(b);
            }
            local = detail::freudenthal(C, posc, detail::half_lengths(C), a);
            auto &cache = detail::freud_cache();
            std::lock_guard<std::mutex> lock(cache.mu);
            cache.memo[std::make_pair(C, a)] = local;
        }
        Weights next;
        for (const auto &[w, m] : acc)
            for (const auto &[c, k] : local) {
                Vec v = w;
                for (int i = 0; i < r; ++i)
                    if (c[i])
                        v = v - Q(c[i]) * d->simple[comp.nodes[i]];
                add_to(next, v, m * k);
            }
        acc = std::move(next);
    }
    return acc;
}

inline long long weyl_dim(const Datum &d, const Vec &lam)
{
    Q prod = 1;
    for (const auto &b : d->copos)
        prod *= dot(lam + d->rho, b) / dot(d->rho, b);
    if (!is_integer(prod))
        throw Error("Weyl dimension is not an integer");
    return prod.numerator();
}

inline long long weyl_dim(const Irrep &r) { return weyl_dim(r.d, r.hw); }

inline long long RepSum::dim() const
{
    long long n = 0;
    for (const auto &[hw, m] : parts)
        n += m * weyl_dim(d, hw);
    return n;
}

inline Weights RepSum::weights() const
{
    Weights w;
    for (const auto &[hw, m] : parts)
        for (const auto &[v, k] : weight_multiplicities(d, hw))
            add_to(w, v, m * k);
    return w;
}

inline Irrep dual_irrep(const Irrep &r) { return {r.d, r.d->minus_w0(r.hw)}; }

inline int fs_indicator(const Datum &d, const Vec &lam)
{
    if (d->minus_w0(lam) != lam)
        return 0;
    Q p = dot(lam, d->two_rho_check);
    if (!is_integer(p))
        throw Error("non-integral <lambda, 2 rho^v> for a self-dual weight");
    return p.numerator() % 2 == 0 ? 1 : -1;
}

inline int fs_indicator(const Irrep &r) { return fs_indicator(r.d, r.hw); }

inline bool is_weyl_invariant(const Datum &d, const Weights &w)
{
    for (const auto &[v, m] : w)
        for (int i = 0; i < d->rank(); ++i) {
            auto it = w.find(d->reflect(i, v));
            if (it == w.end() || it->second != m)
                return false;
        }
    return true;
}

/* Brauer-Klimyk: expand a W-invariant (virtual) character in irreducible characters.
   Returned multiplicities may be negative. */
inline std::map<Vec, long long> brauer_decompose(const Datum &d, const Weights &w)
{
    std::map<Vec, long long> out;
    for (const auto &[mu, m] : w) {
        auto [v, el] = d->dominantize(mu + d->rho);
        if (!d->regular_dominant(v))
            continue;
        long long sign = el.length() % 2 ? -1 : 1;
        Vec hw = v - d->rho;
        auto it = out.find(hw);
        if (it == out.end())
            out.emplace(hw, sign * m);
        else if ((it->second += sign * m) == 0)
            out.erase(it);
    }
    return out;
}

inline constexpr long long kTensorLimit = 200;

inline RepSum tensor_decompose(const Irrep &a, const Irrep &b)
{
    if (a.d != b.d)
        throw Error("tensor product of representations on different data");
    long long da = weyl_dim(a), db = weyl_dim(b);
    if (da * db > kTensorLimit)
        throw Error("tensor product of dimension " + std::to_string(da * db) + " exceeds limit " +
                    std::to_string(kTensorLimit));
    Weights shifted;
    for (const auto &[mu, m] : weight_multiplicities(b.d, b.hw))
        shifted.emplace(a.hw + mu, m);
    RepSum out{a.d, {}};
    for (const auto &[hw, m] : brauer_decompose(a.d, shifted)) {
        if (m < 0)
            throw Error("negative multiplicity in tensor product");
        out.parts[hw] = m;
    }
    return out;
}

/* Peel highest weights off a character; fails when the multiset is not a character. */
inline RepSum decompose_weight_multiset(const Datum &d, Weights w)
{
    if (!is_weyl_invariant(d, w))
        throw Error("weight multiset is not Weyl-invariant");
    RepSum out{d, {}};
    while (!w.empty()) {
        const Vec *top = nullptr;
        Q best = 0;
        for (const auto &[v, m] : w) {
            Q h = dot(v, d->two_rho_check);
            if (!top || h > best) {
                top = &v;
                best = h;
            }
        }
        Vec hw = *top;
        long long m = w.at(hw);
        if (m < 0)
            throw Error("negative residual multiplicity at " + str(hw));
        if (!d->dominant(hw))
            throw Error("maximal weight " + str(hw) + " is not dominant");
        for (const auto &[v, k] : weight_multiplicities(d, hw))
            add_to(w, v, -m * k);
        out.parts[hw] += m;
    }
    return out;
}

inline Weights restrict_along(const TorusMap &map, const Weights &w)
{
    Weights out;
    for (const auto &[v, m] : w)
        add_to(out, map.pullback(v), m);
    return out;
}

inline RepSum to_repsum(const Datum &d, const Weights &w) { return decompose_weight_multiset(d, w); }

/* Semisimple-part Frobenius-Schur data of an irreducible: labels, dual labels, indicator. */
struct SsClass {
    Vec labels, dual_labels;
    int fs = 0;
};

inline SsClass ss_class(const Datum &d, const Vec &hw)
{
    SsClass c;
    c.labels = d->labels(hw);
    c.dual_labels = d->labels(d->minus_w0(hw));
    if (c.labels == c.dual_labels) {
        Q p = dot(hw, d->two_rho_check);
        c.fs = p.numerator() % 2 == 0 ? 1 : -1;
    }
    return c;
}

/* Symplectic predicate, evaluated on the semisimple part (central characters ignored). */
inline bool symplectic(const RepSum &r, std::string *why = nullptr)
{
    std::map<Vec, long long> count;
    std::map<Vec, SsClass> cls;
    for (const auto &[hw, m] : r.parts) {
        auto c = ss_class(r.d, hw);
        count[c.labels] += m;
        cls[c.labels] = c;
    }
    for (const auto &[lab, m] : count) {
        const auto &c = cls[lab];
        if (c.fs == 1 && m % 2) {
            if (why)
                *why = "orthogonal summand " + str(lab) + " with odd multiplicity";
            return false;
        }
        if (c.fs == 0) {
            auto it = count.find(c.dual_labels);
            long long md = it == count.end() ? 0 : it->second;
            if (md != m) {
                if (why)
                    *why = "summand " + str(lab) + " not matched by its dual";
                return false;
            }
        }
    }
    return true;
}

/* Parity proxy for the anomaly: Q(x) = sum <mu,x>^2 = 0 mod 4 on the coroot lattice,
   checked on simple coroots and pairwise polarizations. */
inline bool anomaly_proxy(const Datum &d, const Weights &w, std::string *why = nullptr)
{
    int r = d->rank();
    std::vector<std::vector<long long>> B(r, std::vector<long long>(r, 0));
    for (const auto &[mu, m] : w) {
        std::vector<long long> p(r);
        for (int i = 0; i < r; ++i) {
            Q x = d->pair(mu, i);
            if (!is_integer(x))
                throw Error("non-integral weight in anomaly check");
            p[i] = x.numerator();
        }
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                B[i][j] += m * p[i] * p[j];
    }
    for (int i = 0; i < r; ++i) {
        if (((B[i][i] % 4) + 4) % 4) {
            if (why)
                *why = "Q(coroot " + std::to_string(i + 1) + ") = " + std::to_string(B[i][i]);
            return false;
        }
        for (int j = i + 1; j < r; ++j)
            if (((B[i][j] % 2) + 2) % 2) {
                if (why)
                    *why = "B(coroot " + std::to_string(i + 1) + ", coroot " + std::to_string(j + 1) +
                           ") odd";
                return false;
            }
    }
    return true;
}

/* Independent indicator: locate the trivial summand in Sym^2 or Alt^2. */
inline int fs_oracle(const Datum &d, const Vec &lam)
{
    Weights chi = weight_multiplicities(d, lam);
    Weights sq = convolve(chi, chi);
    Weights psi;
    for (const auto &[v, m] : chi)
        add_to(psi, Q(2) * v, m);
    Weights sym, alt;
    for (const auto &[v, m] : sq) {
        long long p = 0;
        auto it = psi.find(v);
        if (it != psi.end())
            p = it->second;
        if ((m + p) % 2)
            throw Error("odd symmetric square");
        add_to(sym, v, (m + p) / 2);
        add_to(alt, v, (m - p) / 2);
    }
    Vec zero = zeros(d->dim);
    auto ds = brauer_decompose(d, sym);
    auto da = brauer_decompose(d, alt);
    long long s = ds.count(zero) ? ds.at(zero) : 0;
    long long a = da.count(zero) ? da.at(zero) : 0;
    if (s + a > 1)
        throw Error("trivial summand occurs more than once in the tensor square");
    return s ? 1 : a ? -1 : 0;
}

} // namespace stq

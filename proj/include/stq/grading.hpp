#pragma once

#include "repcalc.hpp"

namespace stq {

/* Simple-root indices of G spanning the Levi in which the nilpotent is principal. */
using LeviLabel = std::vector<int>;

struct Quadruple {
    Datum G, H;
    TorusMap emb; /* cocharacters of H into cocharacters of G */
    RepSum rho_H;
    LeviLabel iota;
};

struct AdjointGrading {
    Datum G;
    Vec h;
    std::map<long long, Weights> levels;

    long long size(long long k) const
    {
        auto it = levels.find(k);
        return it == levels.end() ? 0 : total(it->second);
    }
};

inline Vec sl2_cocharacter(const Datum &G, const LeviLabel &L)
{
    auto [levi, map] = levi_subdatum(G, L);
    Vec h = zeros(G->dim);
    for (const auto &b : levi->copos)
        h += b;
    return h;
}

inline AdjointGrading adjoint_grading(const Datum &G, const Vec &h)
{
    AdjointGrading g{G, h, {}};
    for (const auto &a : G->roots()) {
        Q k = dot(a, h);
        if (!is_integer(k))
            throw Error("non-integral level " + str(k) + " for root " + str(a));
        add_to(g.levels[k.numerator()], a, 1);
    }
    add_to(g.levels[0], zeros(G->dim), G->dim - G->constraints);
    return g;
}

/* Multiplicity spaces of the sl2 strings: rho_k = g(k)|H - g(k+2)|H for k >= 0. */
inline std::map<long long, RepSum> rho_k_decomposition(const AdjointGrading &g, const TorusMap &emb)
{
    std::map<long long, RepSum> out;
    long long top = g.levels.empty() ? 0 : g.levels.rbegin()->first;
    for (long long k = 0; k <= top; ++k) {
        Weights w;
        auto it = g.levels.find(k);
        if (it != g.levels.end())
            w = restrict_along(emb, it->second);
        auto up = g.levels.find(k + 2);
        if (up != g.levels.end())
            for (const auto &[v, m] : restrict_along(emb, up->second))
                add_to(w, v, -m);
        if (w.empty())
            continue;
        out.emplace(k, decompose_weight_multiset(emb.src, w));
    }
    return out;
}

inline std::map<long long, RepSum> rho_k_decomposition(const Quadruple &q)
{
    return rho_k_decomposition(adjoint_grading(q.G, sl2_cocharacter(q.G, q.iota)), q.emb);
}

/* rho_H plus the odd-level pieces. */
inline RepSum rho_H_iota(const Quadruple &q, const std::map<long long, RepSum> &rho)
{
    RepSum r = q.rho_H;
    r.d = q.H;
    for (const auto &[k, s] : rho)
        if (k % 2)
            for (const auto &[hw, m] : s.parts)
                r.parts[hw] += m;
    return r;
}

inline RepSum rho_H_iota(const Quadruple &q) { return rho_H_iota(q, rho_k_decomposition(q)); }

inline bool fourier_jacobi(const std::map<long long, RepSum> &rho)
{
    for (const auto &[k, s] : rho)
        if (k % 2 && s.count())
            return true;
    return false;
}

} // namespace stq

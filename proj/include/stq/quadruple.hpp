#pragma once

#include "grading.hpp"

#include <functional>
#include <numeric>

namespace stq {

using Labels = std::vector<long long>;

inline Labels int_labels(const Datum &d, const Vec &w)
{
    Labels out;
    for (const auto &x : d->labels(w)) {
        if (!is_integer(x))
            throw Error("non-integral Dynkin label in " + str(w));
        out.push_back(x.numerator());
    }
    return out;
}

/* Label multisets up to permutations of isomorphic simple components and diagram
   automorphisms; the same symmetry is applied to every multiset at once. */
struct Canon {
    TypeList types;
    std::vector<std::vector<Labels>> sets;

    auto operator<=>(const Canon &) const = default;
};

inline Canon canonical_form(const Datum &d, const std::vector<std::vector<Labels>> &sets)
{
    std::vector<Component> comps = d->components;
    std::stable_sort(comps.begin(), comps.end(),
                     [](const Component &a, const Component &b) { return a.type < b.type; });
    Canon best;
    for (const auto &c : comps)
        best.types.push_back(c.type);
    bool have = false;

    /* choice[s] = (component index, automorphism) for slot s */
    std::vector<std::pair<int, std::vector<int>>> choice(comps.size());
    std::vector<bool> used(comps.size(), false);

    auto evaluate = [&]() {
        Canon c{best.types, {}};
        for (const auto &set : sets) {
            std::vector<Labels> out;
            for (const auto &lab : set) {
                Labels l;
                for (std::size_t s = 0; s < comps.size(); ++s) {
                    const auto &comp = comps[choice[s].first];
                    for (int j : choice[s].second)
                        l.push_back(lab.at(comp.nodes[j]));
                }
                out.push_back(l);
            }
            std::sort(out.begin(), out.end());
            c.sets.push_back(std::move(out));
        }
        if (!have || c < best) {
            best = std::move(c);
            have = true;
        }
    };

    std::function<void(std::size_t)> rec = [&](std::size_t s) {
        if (s == comps.size()) {
            evaluate();
            return;
        }
        for (std::size_t k = 0; k < comps.size(); ++k) {
            if (used[k] || comps[k].type != comps[s].type)
                continue;
            used[k] = true;
            for (const auto &a : automorphisms(comps[k].type)) {
                choice[s] = {static_cast<int>(k), a};
                rec(s + 1);
            }
            used[k] = false;
        }
    };
    rec(0);
    return best;
}

inline std::vector<Labels> label_multiset(const RepSum &r, bool drop_trivial = false)
{
    std::vector<Labels> out;
    for (const auto &[hw, m] : r.parts) {
        Labels l = int_labels(r.d, hw);
        if (drop_trivial && std::all_of(l.begin(), l.end(), [](long long x) { return x == 0; }))
            continue;
        for (long long i = 0; i < m; ++i)
            out.push_back(l);
    }
    return out;
}

inline TypeList ss_types(const Datum &d)
{
    TypeList t = d->types();
    std::sort(t.begin(), t.end());
    return t;
}

/* Isogeny-insensitive normal form of a reductive quadruple (G, H, rho): semisimple types
   of G, and the H-label multisets of the non-trivial part of g|H and of rho. */
struct NormalForm {
    TypeList G;
    Canon H;

    auto operator<=>(const NormalForm &) const = default;
};

inline Weights adjoint_character(const Datum &G)
{
    Weights w;
    for (const auto &a : G->roots())
        add_to(w, a, 1);
    add_to(w, zeros(G->dim), G->dim - G->constraints);
    return w;
}

inline NormalForm normal_form(const Datum &G, const Datum &H, const TorusMap &emb, const RepSum &rho)
{
    RepSum gH = decompose_weight_multiset(H, restrict_along(emb, adjoint_character(G)));
    return {ss_types(G), canonical_form(H, {label_multiset(gH, true), label_multiset(rho)})};
}

inline NormalForm normal_form(const Quadruple &q)
{
    if (!q.iota.empty())
        throw Error("normal form requested for a non-reductive quadruple");
    return normal_form(q.G, q.H, q.emb, q.rho_H);
}

inline std::string str(const Labels &l)
{
    std::string s = "[";
    for (std::size_t i = 0; i < l.size(); ++i)
        s += (i ? "," : "") + std::to_string(l[i]);
    return s + "]";
}

inline std::string str(const Canon &c)
{
    std::string s = str(c.types);
    for (const auto &set : c.sets) {
        s += " {";
        for (std::size_t i = 0; i < set.size(); ++i)
            s += (i ? " " : "") + str(set[i]);
        s += "}";
    }
    return s;
}

inline std::string str(const NormalForm &n) { return "G " + str(n.G) + " | H " + str(n.H); }

struct Check {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct Validation {
    std::vector<Check> checks;
    std::map<long long, RepSum> rho_k;
    RepSum rho_H_iota;

    bool ok() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.ok; });
    }
    const Check *find(const std::string &n) const
    {
        for (const auto &c : checks)
            if (c.name == n)
                return &c;
        return nullptr;
    }
};

namespace detail {

inline Check containment(const Quadruple &q, const std::map<long long, RepSum> *rho)
{
    Check c{"containment", true, ""};
    for (int i : q.iota)
        for (std::size_t k = 0; k < q.emb.image.size(); ++k)
            if (dot(q.G->simple.at(i), q.emb.image[k]) != 0) {
                c.ok = false;
                c.detail = "root " + std::to_string(i + 1) + " of the nilpotent Levi is non-trivial on T_H";
                return c;
            }
    if (!rho) {
        c.ok = false;
        c.detail = "grading does not restrict to a character of H";
        return c;
    }
    /* Ad_H must occur in the zero level */
    RepSum adH = decompose_weight_multiset(q.H, adjoint_character(q.H));
    auto it = rho->find(0);
    std::map<Labels, long long> have;
    if (it != rho->end())
        for (const auto &l : label_multiset(it->second, true))
            ++have[l];
    for (const auto &l : label_multiset(adH, true))
        if (have[l]-- <= 0) {
            c.ok = false;
            c.detail = "adjoint summand " + str(l) + " of H is missing from the zero level";
            return c;
        }
    return c;
}

inline Check integrality(const Quadruple &q)
{
    Check c{"integrality", true, ""};
    if (q.emb.src != q.H || q.emb.tgt != q.G || static_cast<int>(q.emb.image.size()) != q.H->dim) {
        c.ok = false;
        c.detail = "torus map shape does not match H -> G";
        return c;
    }
    for (const auto &a : q.G->roots())
        for (const auto &x : q.H->labels(q.emb.pullback(a)))
            if (!is_integer(x)) {
                c.ok = false;
                c.detail = "root " + str(a) + " restricts to a non-integral weight of H";
                return c;
            }
    return c;
}

} // namespace detail

/* Structural checks on the primal side; rho_hat (optional) is checked alongside. */
inline Validation validate(const Quadruple &q, const RepSum *rho_hat = nullptr)
{
    Validation v;
    v.checks.push_back(detail::integrality(q));
    std::map<long long, RepSum> rho;
    bool graded = true;
    std::string why;
    try {
        rho = rho_k_decomposition(q);
    } catch (const Error &e) {
        graded = false;
        why = e.what();
    }
    Check cont = detail::containment(q, graded ? &rho : nullptr);
    if (!graded)
        cont.detail += ": " + why;
    v.checks.push_back(cont);
    Check sym{"symplectic", true, ""};
    Check anom{"anomaly", true, ""};
    if (graded) {
        v.rho_k = rho;
        v.rho_H_iota = rho_H_iota(q, rho);
        std::string w;
        if (!symplectic(v.rho_H_iota, &w)) {
            sym.ok = false;
            sym.detail = "rho_{H,iota}: " + w;
        }
        if (!anomaly_proxy(q.H, v.rho_H_iota.weights(), &w)) {
            anom.ok = false;
            anom.detail = "rho_{H,iota}: " + w;
        }
    } else {
        sym.ok = anom.ok = false;
        sym.detail = anom.detail = "no grading";
    }
    if (rho_hat) {
        std::string w;
        if (sym.ok && !symplectic(*rho_hat, &w)) {
            sym.ok = false;
            sym.detail = "dual rep: " + w;
        }
        if (anom.ok && !anomaly_proxy(rho_hat->d, rho_hat->weights(), &w)) {
            anom.ok = false;
            anom.detail = "dual rep: " + w;
        }
    }
    v.checks.push_back(sym);
    v.checks.push_back(anom);
    return v;
}

/* Zero-level Levi of the sl2 cocharacter, after conjugating it to be dominant. */
struct Reduction {
    Quadruple red;
    LeviLabel J;
    long long central_rank_dropped = 0;
};

inline Reduction delta_red_full(const Quadruple &q)
{
    for (int i : q.iota)
        for (const auto &x : q.emb.image)
            if (dot(q.G->simple.at(i), x) != 0)
                throw Error("H is not contained in the centralizer of the nilpotent");
    Vec h = sl2_cocharacter(q.G, q.iota);
    auto [hp, w] = q.G->codominantize(h);
    LeviLabel J;
    for (int i = 0; i < q.G->rank(); ++i)
        if (dot(q.G->simple[i], hp) == 0)
            J.push_back(i);
    auto [M, incl] = levi_subdatum(q.G, J);
    TorusMap emb{q.H, M, {}};
    for (const auto &x : q.emb.image)
        emb.image.push_back(q.G->coact(w, x));
    auto rho = rho_k_decomposition(adjoint_grading(q.G, h), q.emb);
    Reduction r;
    r.red = Quadruple{M, q.H, emb, rho_H_iota(q, rho), {}};
    r.J = J;
    r.central_rank_dropped = M->central_rank();
    return r;
}

inline Quadruple delta_red(const Quadruple &q) { return delta_red_full(q).red; }

/* Induce a representation of a Levi M-hat (sharing the torus of G-hat) to G-hat. */
inline RepSum whittaker_induce(const RepSum &rho, const Datum &Ghat)
{
    if (rho.d->dim != Ghat->dim)
        throw Error("Levi and ambient group have different tori");
    RepSum out{Ghat, {}};
    for (const auto &[hw, m] : rho.parts) {
        Vec lam = Ghat->dominantize(hw).first;
        for (const auto &x : Ghat->labels(lam))
            if (!is_integer(x))
                throw Error("weight " + str(hw) + " is not in the lattice of " + Ghat->label);
        out.parts[lam] += m;
    }
    return out;
}

inline std::vector<Vec> weyl_orbit(const Datum &d, const Vec &lam)
{
    std::set<Vec> seen{lam};
    std::vector<Vec> queue{lam};
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (int s = 0; s < d->rank(); ++s) {
            Vec v = d->reflect(s, queue[i]);
            if (seen.insert(v).second) {
                queue.push_back(v);
                if (queue.size() > 100000)
                    throw Error("Weyl orbit too large");
            }
        }
    return queue;
}

struct WhittakerResult {
    bool ok = false;
    std::string detail;
    RepSum placed;  /* the reductive rep as placed on M-hat */
    RepSum induced; /* its induction to G-hat */
};

/* Search for a placement of the reductive dual rep (on red_hat) on the Levi M-hat = J of
   G-hat whose induction is rho_hat; central characters are not constrained. */
inline WhittakerResult check_whittaker_compatibility(const RepSum &rho_hat, const LeviLabel &J,
                                                     const RepSum &red_hat)
{
    WhittakerResult res;
    const Datum &Ghat = rho_hat.d;
    auto [Mhat, incl] = levi_subdatum(Ghat, J);
    Canon target = canonical_form(red_hat.d, {label_multiset(red_hat)});
    if (ss_types(Mhat) != ss_types(red_hat.d)) {
        res.detail = "dual Levi has type " + str(ss_types(Mhat)) + ", reductive dual group has type " +
                     str(ss_types(red_hat.d));
        return res;
    }
    if (rho_hat.count() != red_hat.count()) {
        res.detail = "summand counts differ: " + std::to_string(rho_hat.count()) + " vs " +
                     std::to_string(red_hat.count());
        return res;
    }
    std::vector<Vec> hws;
    for (const auto &[hw, m] : rho_hat.parts)
        for (long long i = 0; i < m; ++i)
            hws.push_back(hw);
    std::vector<std::vector<Vec>> cand;
    for (const auto &hw : hws) {
        std::vector<Vec> c;
        for (const auto &v : weyl_orbit(Ghat, hw))
            if (Mhat->dominant(v))
                c.push_back(v);
        std::sort(c.begin(), c.end());
        cand.push_back(c);
    }
    std::vector<Vec> pick(hws.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == hws.size()) {
            RepSum placed{Mhat, {}};
            for (const auto &v : pick)
                placed.parts[v] += 1;
            if (canonical_form(Mhat, {label_multiset(placed)}) == target) {
                res.placed = placed;
                return true;
            }
            return false;
        }
        for (const auto &v : cand[i]) {
            pick[i] = v;
            if (rec(i + 1))
                return true;
        }
        return false;
    };
    if (!rec(0)) {
        res.detail = "no placement of " + str(target) + " on the dual Levi induces the listed rep";
        return res;
    }
    res.induced = whittaker_induce(res.placed, Ghat);
    res.ok = res.induced.parts == rho_hat.parts;
    if (!res.ok)
        res.detail = "induced rep differs from the listed rep";
    return res;
}

} // namespace stq

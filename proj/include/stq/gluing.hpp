#pragma once

#include "tables.hpp"

namespace stq {

/* A marked A1 factor: G factor g, the H factor h that sits diagonally in g and the rest
   of G, and the matching dual factor. Indices are 1-based; h = 0 on the torus model. */
struct Mark {
    int g = 0, h = 0, ghat = 0;
    bool operator==(const Mark &) const = default;
};

/* A quadruple in the corpus text form, with glue marks. */
struct GlueModel {
    std::string name;
    std::string G, H;
    std::vector<std::string> relations, embedding;
    std::string rho_H = "0", iota = "none";
    std::string Ghat, rho_hat;
    std::vector<Mark> marks;
    bool torus = false;  /* (GL2, GL1, 0): dual of T(std) on one SL2 */
    /* Not anomaly-free on its own, but may be paired with another such model:
       'h' for std of SL2, 'o' for odd SO_n x SL2, 'g' for G2 x SL2. */
    char pairing = 0;
    int n = 0;           /* n of the odd SO_n */
    std::string refusal; /* non-empty: may not be glued with an anomaly-free model, and why */
};

namespace detail {

inline std::vector<std::string> factor_labels(const std::string &spec)
{
    return spec == "1" ? std::vector<std::string>{} : split_product(spec);
}

inline std::string join_product(const std::vector<std::string> &f)
{
    std::string s;
    for (const auto &x : f)
        s += (s.empty() ? "" : " x ") + x;
    return s.empty() ? "1" : s;
}

/* Rewrite references G<k>, H<k> or #<k> through m. */
inline std::string renumber(const std::string &s, char tag, const std::map<int, int> &m)
{
    std::regex re(tag == '#' ? std::string(R"(#(\d+))") : std::string(R"((^|[^A-Za-z0-9_]))") + tag + R"((\d+))");
    std::string out;
    auto last = s.cbegin();
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
        const auto &mt = *it;
        int grp = tag == '#' ? 1 : 2;
        int k = std::stoi(mt[grp].str());
        auto f = m.find(k);
        if (f == m.end())
            throw Error(std::string("reference ") + tag + std::to_string(k) + " in '" + s + "' has no image");
        out.append(last, mt[0].first);
        if (tag != '#')
            out += mt[1].str();
        out += tag + std::to_string(f->second);
        last = mt[0].second;
    }
    out.append(last, s.cend());
    return out;
}

inline std::set<int> referenced(const std::string &s, char tag)
{
    std::set<int> out;
    std::regex re(std::string(R"((^|[^A-Za-z0-9_]))") + tag + R"((\d+))");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it)
        out.insert(std::stoi((*it)[2].str()));
    return out;
}

inline std::vector<std::string> expand_identity(const GlueModel &m)
{
    std::vector<std::string> out;
    for (const auto &l : m.embedding) {
        if (trim(l) != "identity") {
            if (trim(l).rfind("for ", 0) == 0)
                throw Error(m.name + ": loop lines cannot be glued");
            out.push_back(l);
            continue;
        }
        auto n = factor_labels(m.H).size();
        for (std::size_t k = 1; k <= n; ++k)
            out.push_back("H" + std::to_string(k) + " -> G" + std::to_string(k));
    }
    return out;
}

/* Embedding lines without the part landing in G factor g. */
inline std::vector<std::string> drop_target(const GlueModel &m, int g)
{
    std::vector<std::string> out;
    for (const auto &l : expand_identity(m)) {
        auto arrow = l.find("->");
        if (arrow == std::string::npos)
            throw Error(m.name + ": bad embedding line '" + l + "'");
        auto tg = referenced(l.substr(arrow + 2), 'G');
        if (!tg.count(g))
            out.push_back(l);
        else if (tg.size() > 1)
            throw Error(m.name + ": line '" + l + "' mixes the marked factor with others");
    }
    return out;
}

inline std::map<int, int> shift_map(int n, int skip, int offset)
{
    std::map<int, int> m;
    for (int k = 1, j = 1; k <= n; ++k)
        if (k != skip)
            m[k] = offset + j++;
    return m;
}

inline std::string join_sum(const std::vector<std::string> &parts)
{
    std::string s;
    for (const auto &p : parts)
        if (!p.empty() && trim(p) != "0")
            s += (s.empty() ? "" : " (+) ") + p;
    return s.empty() ? "0" : s;
}

inline std::string join_iota(const std::vector<std::string> &parts)
{
    std::string s;
    for (const auto &p : parts)
        if (!p.empty() && trim(p) != "none")
            s += (s.empty() ? "" : ", ") + p;
    return s.empty() ? "none" : s;
}

inline void check_mark(const GlueModel &m, const Mark &k)
{
    auto G = factor_labels(m.G), H = factor_labels(m.H), D = factor_labels(m.Ghat);
    auto in = [](int i, std::size_t n) { return i >= 1 && i <= static_cast<int>(n); };
    if (!in(k.g, G.size()) || !in(k.ghat, D.size()) || (k.h != 0 && !in(k.h, H.size())))
        throw Error(m.name + ": mark out of range");
    if (G[k.g - 1] != "GL2" || D[k.ghat - 1] != "GL2" || (k.h && H[k.h - 1] != "GL2"))
        throw Error(m.name + ": marked factors must be GL2");
    if (k.h == 0)
        return;
    std::string want = "H" + std::to_string(k.h) + " -> G" + std::to_string(k.g);
    auto lines = expand_identity(m);
    if (std::none_of(lines.begin(), lines.end(), [&](const std::string &l) { return trim(l) == want; }))
        throw Error(m.name + ": H" + std::to_string(k.h) + " does not map onto G" + std::to_string(k.g));
    auto iota = referenced(m.iota, 'G');
    if (iota.count(k.g))
        throw Error(m.name + ": the nilpotent meets the marked factor");
}

inline std::vector<Mark> remap_marks(const std::vector<Mark> &ms, const Mark &used, const std::map<int, int> &g,
                                     const std::map<int, int> &h, const std::map<int, int> &d)
{
    std::vector<Mark> out;
    for (const auto &k : ms)
        if (!(k == used))
            out.push_back({g.at(k.g), k.h ? h.at(k.h) : 0, d.at(k.ghat)});
    return out;
}

} // namespace detail

inline GlueModel torus_model()
{
    GlueModel m;
    m.name = "S.10";
    m.G = "GL2";
    m.H = "GL1";
    m.embedding = {"H1.1 -> G1.1"};
    m.Ghat = "GL2";
    m.rho_hat = "T(std(#1))";
    m.marks = {{1, 0, 1}};
    m.torus = true;
    return m;
}

/* The Table S models with a GL2 form of the dual; the rest carry a refusal. */
inline GlueModel table_s_model(int k, const Params &p = {})
{
    auto param = [&](const char *n) {
        auto it = p.find(n);
        if (it == p.end())
            throw Error(std::string("S.") + std::to_string(k) + " needs the parameter " + n);
        return it->second;
    };
    GlueModel m;
    m.name = "S." + std::to_string(k);
    auto trilinear = [&](std::vector<Mark> marks) {
        m.G = "GL2^3";
        m.H = "GL2";
        m.embedding = {"H1 -> G1", "H1 -> G2", "H1 -> G3"};
        m.Ghat = "GL2^3";
        m.rho_hat = "std(#1) (x) std(#2) (x) std(#3)";
        m.marks = std::move(marks);
    };
    switch (k) {
    case 1:
        if (param("m") != 1)
            throw Error("S.1 is shipped for m=1 only");
        trilinear({{1, 1, 1}, {3, 1, 3}});
        m.name += ", m=1";
        return m;
    case 3: {
        long long n = param("n");
        m.name += ", n=" + std::to_string(n);
        if (n % 2) {
            m.Ghat = "SO" + std::to_string(n) + " x SL2";
            m.rho_hat = "std(#1) (x) std(#2)";
            m.refusal = "the representation we get is not anomaly-free";
            m.pairing = 'o';
            m.n = static_cast<int>(n);
            return m;
        }
        if (n != 4)
            throw Error("S.3 is shipped for n=4 only");
        trilinear({{3, 1, 3}});
        return m;
    }
    case 9:
        m.Ghat = "SL2";
        m.rho_hat = "std(#1)";
        m.pairing = 'h';
        m.refusal = "the representation we get is not anomaly-free";
        return m;
    case 10:
        return torus_model();
    case 11: {
        long long r = param("m");
        m.name += ", m=" + std::to_string(r);
        if (r != 2 && r != 3)
            throw Error("S.11 is shipped for m=2,3 only");
        m.G = m.Ghat = "GL" + std::to_string(r) + " x GL2";
        m.H = "GL2";
        m.embedding = {"H1 -> G1", "H1 -> G2"};
        m.rho_H = r == 2 ? "T(std(#1))" : "0";
        m.rho_hat = "T(std(#1) (x) std(#2))";
        m.marks = {{2, 1, 2}};
        return m;
    }
    case 8:
    case 13:
    case 15:
        m.refusal = "the representation we get is not anomaly-free";
        return m;
    case 16:
        m.Ghat = "G2 x SL2";
        m.rho_hat = "std(#1) (x) std(#2)";
        m.pairing = 'g';
        m.refusal = "the representation we get is not anomaly-free";
        return m;
    case 2:
    case 4:
    case 5:
    case 6:
    case 7:
    case 12:
    case 14:
        m.refusal = "no GL2 form of the dual is shipped";
        return m;
    default:
        throw Error("no model S." + std::to_string(k));
    }
}

/* "S.3:n=4", "S.10", "S.11:m=2" */
inline GlueModel parse_table_s(const std::string &id)
{
    static const std::regex re(R"(S\.(\d+)((:[a-z]+=-?\d+)*))");
    std::smatch mt;
    if (!std::regex_match(id, mt, re))
        throw Error("bad model id '" + id + "'");
    Params p;
    std::string rest = mt[2];
    static const std::regex kv(R"(:([a-z]+)=(-?\d+))");
    for (auto it = std::sregex_iterator(rest.begin(), rest.end(), kv); it != std::sregex_iterator(); ++it)
        p[(*it)[1]] = std::stoll((*it)[2]);
    return table_s_model(std::stoi(mt[1]), p);
}

/* A corpus row with marks on the listed G factors (dual factor with the same index). */
inline GlueModel gluable_from_entry(const CorpusEntry &e, const Params &p, const std::vector<int> &marked)
{
    auto sub = [&](const std::string &s) { return substitute(s, p); };
    GlueModel m;
    m.name = e.id();
    m.G = sub(e.G);
    m.H = sub(e.H);
    for (const auto &r : e.H_relations)
        m.relations.push_back(sub(r));
    for (const auto &l : e.embedding)
        m.embedding.push_back(sub(l));
    m.rho_H = sub(e.rho_H);
    m.iota = sub(e.iota);
    m.Ghat = sub(e.Ghat);
    m.rho_hat = sub(e.rho_hat);
    auto lines = detail::expand_identity(m);
    for (int g : marked) {
        Mark k{g, 0, g};
        std::string tail = "-> G" + std::to_string(g);
        for (const auto &l : lines) {
            std::string t = detail::trim(l);
            if (t.size() >= tail.size() && t.compare(t.size() - tail.size(), tail.size(), tail) == 0) {
                auto hs = detail::referenced(t.substr(0, t.find("->")), 'H');
                if (hs.size() == 1) {
                    if (k.h)
                        throw Error(e.id() + ": two H factors map onto G" + std::to_string(g));
                    k.h = *hs.begin();
                }
            }
        }
        if (!k.h)
            throw Error(e.id() + ": no H factor maps onto G" + std::to_string(g));
        detail::check_mark(m, k);
        m.marks.push_back(k);
    }
    return m;
}

/* The GL2 form of T(std + std (x) std) on GL2 x GL1; it is self-dual. */
inline GlueModel double_torus_model()
{
    GlueModel m;
    m.name = "S.10 + S.10";
    m.G = m.H = m.Ghat = "GL2 x GL1";
    m.embedding = {"identity"};
    m.rho_H = m.rho_hat = "T(std(#1) (+) std(#1) (x) std(#2))";
    return m;
}

/* Two models that are not anomaly-free; only two pairs give a quadruple. */
inline GlueModel glue_anomalous(const GlueModel &a, const GlueModel &b)
{
    if (a.pairing == 'h' && b.pairing == 'h')
        return torus_model(); /* std + std = T(std) */
    if ((a.pairing == 'h' && b.pairing == 'o') || (a.pairing == 'o' && b.pairing == 'h')) {
        int n = a.pairing == 'o' ? a.n : b.n;
        if (n != 3)
            throw Error("SO" + std::to_string(n) + " x SL2 with std (x) std + std: only n=3 is shipped");
        GlueModel m;
        m.name = a.name + " + " + b.name;
        m.G = m.H = "SO3 x Sp2";
        m.embedding = {"identity"};
        m.rho_H = "std(#1) (x) std(#2) (+) std(#2)";
        m.Ghat = "Sp2 x SO3";
        m.rho_hat = "std(#2) (x) std(#1) (+) std(#1)";
        return m;
    }
    throw Error("cannot glue " + a.name + " with " + b.name + ": the generic stabilizer is not connected");
}

/* Glue a at mark ia with b at mark ib. */
inline GlueModel glue(const GlueModel &a, std::size_t ia, const GlueModel &b, std::size_t ib)
{
    if (a.pairing && b.pairing)
        return glue_anomalous(a, b);
    for (const auto *m : {&a, &b})
        if (!m->refusal.empty())
            throw Error("cannot glue " + m->name + ": " + m->refusal);
    if (ia >= a.marks.size() || ib >= b.marks.size())
        throw Error("no free marked factor on " + (ia >= a.marks.size() ? a.name : b.name));
    if (a.torus && b.torus)
        return double_torus_model();
    if (a.torus)
        return glue(b, ib, a, ia);

    const Mark ma = a.marks[ia], mb = b.marks[ib];
    detail::check_mark(a, ma);
    detail::check_mark(b, mb);
    auto aG = detail::factor_labels(a.G), aH = detail::factor_labels(a.H), aD = detail::factor_labels(a.Ghat);
    auto bG = detail::factor_labels(b.G), bH = detail::factor_labels(b.H), bD = detail::factor_labels(b.Ghat);
    int nAG = static_cast<int>(aG.size()), nAH = static_cast<int>(aH.size()), nAD = static_cast<int>(aD.size());

    GlueModel out;
    out.name = a.name + " + " + b.name;

    /* G2 x G1 x G2' */
    auto gA = detail::shift_map(nAG, ma.g, 0);
    int g1 = nAG;
    std::vector<std::string> G;
    for (int k = 1; k <= nAG; ++k)
        if (k != ma.g)
            G.push_back(aG[k - 1]);
    G.push_back("GL2");
    auto dA = detail::shift_map(nAD, ma.ghat, 0);
    int d1 = nAD;
    std::vector<std::string> D;
    for (int k = 1; k <= nAD; ++k)
        if (k != ma.ghat)
            D.push_back(aD[k - 1]);
    D.push_back("GL2");

    std::map<int, int> hA;
    for (int k = 1; k <= nAH; ++k)
        hA[k] = k;
    std::vector<std::string> H = aH;
    H.push_back("GL2");
    int hnew = nAH + 1;

    std::vector<std::string> emb, rel = a.relations, rho{a.rho_H}, iota{a.iota};
    for (auto &r : rel)
        r = detail::renumber(r, 'H', hA);
    for (const auto &l : detail::drop_target(a, ma.g))
        emb.push_back(detail::renumber(detail::renumber(l, 'G', gA), 'H', hA));
    emb.push_back("H" + std::to_string(hnew) + " -> G" + std::to_string(g1));
    iota[0] = a.iota == "none" ? a.iota : detail::renumber(a.iota, 'G', gA);
    std::vector<std::string> dual{detail::renumber(a.rho_hat, '#', [&] {
        auto m = dA;
        m[ma.ghat] = d1;
        return m;
    }())};

    if (b.torus) {
        rho.push_back("T(std(#" + std::to_string(ma.h) + ") (x) std(#" + std::to_string(hnew) + "))");
        dual.push_back("T(std(#" + std::to_string(d1) + "))");
        out.marks = detail::remap_marks(a.marks, ma, gA, hA, dA);
    } else {
        auto gB = detail::shift_map(static_cast<int>(bG.size()), mb.g, g1);
        auto dB = detail::shift_map(static_cast<int>(bD.size()), mb.ghat, d1);
        std::map<int, int> hB;
        for (int k = 1; k <= static_cast<int>(bH.size()); ++k)
            hB[k] = hnew + k;
        for (int k = 1; k <= static_cast<int>(bG.size()); ++k)
            if (k != mb.g)
                G.push_back(bG[k - 1]);
        for (int k = 1; k <= static_cast<int>(bD.size()); ++k)
            if (k != mb.ghat)
                D.push_back(bD[k - 1]);
        H.insert(H.end(), bH.begin(), bH.end());
        for (const auto &l : detail::drop_target(b, mb.g))
            emb.push_back(detail::renumber(detail::renumber(l, 'G', gB), 'H', hB));
        for (const auto &r : b.relations)
            rel.push_back(detail::renumber(r, 'H', hB));
        std::string ha = std::to_string(ma.h), hn = std::to_string(hnew), hb = std::to_string(hB.at(mb.h));
        rel.push_back("det(H" + ha + ") + det(H" + hn + ") + det(H" + hb + ")");
        rho.push_back(detail::renumber(b.rho_H, '#', hB));
        rho.push_back("std(#" + ha + ") (x) std(#" + hn + ") (x) std(#" + hb + ")");
        iota.push_back(b.iota == "none" ? b.iota : detail::renumber(b.iota, 'G', gB));
        auto dB1 = dB;
        dB1[mb.ghat] = d1;
        dual.push_back(detail::renumber(b.rho_hat, '#', dB1));
        out.marks = detail::remap_marks(a.marks, ma, gA, hA, dA);
        auto more = detail::remap_marks(b.marks, mb, gB, hB, dB);
        out.marks.insert(out.marks.end(), more.begin(), more.end());
    }
    out.G = detail::join_product(G);
    out.H = detail::join_product(H);
    out.Ghat = detail::join_product(D);
    out.relations = rel;
    out.embedding = emb;
    out.rho_H = detail::join_sum(rho);
    out.iota = detail::join_iota(iota);
    out.rho_hat = detail::join_sum(dual);
    return out;
}

inline GlueModel glue(const GlueModel &a, const GlueModel &b) { return glue(a, 0, b, 0); }

/* Left fold; each step uses the last free mark so far and the first mark of the next model. */
inline GlueModel chain_glue(const std::vector<GlueModel> &chain)
{
    if (chain.empty())
        throw Error("empty chain");
    GlueModel acc = chain[0];
    for (std::size_t i = 1; i < chain.size(); ++i) {
        for (const GlueModel *m : {static_cast<const GlueModel *>(&acc), &chain[i]})
            if (!m->refusal.empty() && !(acc.pairing && chain[i].pairing))
                throw Error("cannot glue " + m->name + ": " + m->refusal);
        if (acc.marks.empty() && !acc.pairing)
            throw Error("chain step " + std::to_string(i) + ": " + acc.name + " has no free mark");
        std::size_t last = acc.marks.empty() ? 0 : acc.marks.size() - 1;
        acc = glue(acc, last, chain[i], 0);
    }
    return acc;
}

/* External direct sum on Ghat2 x Ghat1 x Ghat2', gluing factor ia of a with factor ib of b. */
inline RepSum glue_dual(const RepSum &a, int ia, const RepSum &b, int ib)
{
    const auto &fa = a.d->factors, &fb = b.d->factors;
    if (ia < 0 || ib < 0 || ia >= static_cast<int>(fa.size()) || ib >= static_cast<int>(fb.size()))
        throw Error("glue_dual: no such factor");
    if (fa[ia].rank != 1 || fb[ib].rank != 1 || fa[ia].label != fb[ib].label)
        throw Error("glue_dual: glued factors " + fa[ia].label + " and " + fb[ib].label + " differ or are not A1");
    std::vector<std::string> labels;
    std::vector<std::pair<int, const Factor *>> from_a, from_b; /* new index, old factor */
    for (int k = 0; k < static_cast<int>(fa.size()); ++k)
        if (k != ia) {
            from_a.push_back({static_cast<int>(labels.size()), &fa[k]});
            labels.push_back(fa[k].label);
        }
    int shared = static_cast<int>(labels.size());
    labels.push_back(fa[ia].label);
    from_a.push_back({shared, &fa[ia]});
    from_b.push_back({shared, &fb[ib]});
    for (int k = 0; k < static_cast<int>(fb.size()); ++k)
        if (k != ib) {
            from_b.push_back({static_cast<int>(labels.size()), &fb[k]});
            labels.push_back(fb[k].label);
        }
    Datum d = make_datum(detail::join_product(labels));
    auto move = [&](const Vec &w, const std::vector<std::pair<int, const Factor *>> &map) {
        Vec v = zeros(d->dim);
        for (const auto &[to, f] : map)
            for (int c = 0; c < f->ncoord; ++c)
                v[d->factors[to].coord0 + c] = w[f->coord0 + c];
        return v;
    };
    RepSum out{d, {}};
    for (const auto &[hw, m] : a.parts)
        out.parts[move(hw, from_a)] += m;
    for (const auto &[hw, m] : b.parts)
        out.parts[move(hw, from_b)] += m;
    return out;
}

/* Instantiate a glued model through the corpus parser. */
struct Glued {
    CorpusEntry entry;
    Quadruple q;
    Datum Ghat;
    RepSum rho_hat;
};

inline CorpusEntry to_entry(const GlueModel &m)
{
    CorpusEntry e;
    e.table = "red1";
    e.row = 0;
    e.instances = {Params{}};
    e.G = m.G;
    e.H = m.H;
    e.H_relations = m.relations;
    e.embedding = m.embedding;
    e.rho_H = m.rho_H;
    e.iota = m.iota;
    e.Ghat = m.Ghat;
    e.rho_hat = m.rho_hat;
    e.note = m.name;
    return e;
}

inline Glued instantiate(const GlueModel &m)
{
    if (!m.refusal.empty())
        throw Error(m.name + ": " + m.refusal);
    Glued g{to_entry(m), {}, {}, {}};
    Instance in = instantiate(g.entry, Params{});
    g.q = in.q;
    g.Ghat = in.Ghat;
    g.rho_hat = in.rho_hat;
    return g;
}

/* Same quadruple and dual up to central isogeny and factor symmetries. */
inline bool same_up_to_isogeny(const Quadruple &q1, const RepSum &d1, const Quadruple &q2, const RepSum &d2)
{
    return normal_form(q1) == normal_form(q2) &&
           canonical_form(d1.d, {label_multiset(d1)}) == canonical_form(d2.d, {label_multiset(d2)});
}

} // namespace stq

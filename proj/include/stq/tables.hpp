#pragma once

#include "expr.hpp"
#include "quadruple.hpp"
#include "repspec.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

namespace stq {

inline constexpr const char *kCorpusSchema = "stq-corpus/1";

inline const std::vector<std::string> &table_ids()
{
    static const std::vector<std::string> ids{"red1", "red2", "nonred1", "nonred1x", "nonred2", "nonred2x"};
    return ids;
}

inline bool reductive_table(const std::string &t) { return t == "red1" || t == "red2"; }

struct SchemaError : Error {
    using Error::Error;
};

struct Knop {
    std::string number, W_V, l_hat;
    bool editorial = false; /* factor pairing supplied by us */

    bool present() const { return !number.empty(); }
    bool operator==(const Knop &) const = default;
};

/* Pointer to the reductive row an entry reduces to.  `params` are expressions in the
   entry's own parameters; `parity` optionally restricts the case to instances where the
   expression is odd or even. */
struct Target {
    std::string entry;
    std::map<std::string, std::string> params;
    std::string parity, parity_expr;

    bool operator==(const Target &) const = default;
};

struct CorpusEntry {
    std::string table;
    int row = 0;
    std::vector<Params> instances;
    std::string G, H;
    std::vector<std::string> H_relations; /* central characters of the ambient H that vanish on H */
    std::vector<std::string> embedding;
    std::string rho_H, iota = "none", Ghat, rho_hat;
    Knop knop;
    std::vector<Target> reduces_to;
    std::string embedding_source, period, note;
    int line = 0; /* source line, for diagnostics only */

    std::string id() const { return table + ":" + std::to_string(row); }
    bool operator==(const CorpusEntry &o) const
    {
        return table == o.table && row == o.row && instances == o.instances && G == o.G &&
               H == o.H && H_relations == o.H_relations && embedding == o.embedding && rho_H == o.rho_H && iota == o.iota && Ghat == o.Ghat &&
               rho_hat == o.rho_hat && knop == o.knop && reduces_to == o.reduces_to &&
               embedding_source == o.embedding_source && period == o.period && note == o.note;
    }
};

struct Excluded {
    std::string number, reason;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    std::vector<Excluded> excluded;
    std::map<std::string, std::string> captions;

    const CorpusEntry *find(const std::string &id) const
    {
        for (const auto &e : entries)
            if (e.id() == id)
                return &e;
        return nullptr;
    }
};

/* ---- embedding mini-language ----
     identity                  H and G are the same group
     H1 -> G2                  coordinates of H factor 1 onto those of G factor 2, in order
     H1 -> G2@3                the same, starting at the 4th coordinate of G2
     H1.2 -> G1.2 - 1/2 G3.0   one cocharacter coordinate, as a rational combination
     for i in 1..{n}: ...      repeat with {expr} substituted
   Factors are numbered from 1; coordinates use the factor's own names (0 is the
   similitude coordinate of GSp, GSO and GSpin, the rest start at 1). */

namespace detail {

inline std::string trim(const std::string &s)
{
    auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return "";
    auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline const Factor &dsl_factor(const Datum &d, char side, const std::string &tok)
{
    if (tok.size() < 2 || tok[0] != side)
        throw Error("expected a factor of " + std::string(1, side) + ", got '" + tok + "'");
    int k = std::stoi(tok.substr(1));
    if (k < 1 || k > static_cast<int>(d->factors.size()))
        throw Error("factor " + tok + " out of range for " + d->label);
    return d->factors[k - 1];
}

/* "G2.3" -> global coordinate index */
inline int dsl_coord(const Datum &d, char side, const std::string &tok)
{
    auto dot_pos = tok.find('.');
    if (dot_pos == std::string::npos)
        throw Error("expected a coordinate like " + std::string(1, side) + "1.1, got '" + tok + "'");
    const Factor &f = dsl_factor(d, side, tok.substr(0, dot_pos));
    int c = std::stoi(tok.substr(dot_pos + 1)) - f.base;
    if (c < 0 || c >= f.ncoord)
        throw Error("coordinate " + tok + " out of range for " + f.label);
    return f.coord0 + c;
}

inline Q parse_q(const std::string &s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Q(std::stoll(s));
    return Q(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

/* "[+|-][coef] X1.2 ...", terms also "det(X1)" and "sim(X1)" */
inline Vec parse_combination(const Datum &d, char side, const std::string &text)
{
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t')
            s += c;
    if (s.empty())
        throw Error("empty linear combination");
    static const std::regex term(R"(^([0-9/]*)\*?(det|sim)?\(?([A-Z][0-9]+)(\.[0-9]+)?\)?$)");
    Vec v = zeros(d->dim);
    std::size_t i = 0;
    while (i < s.size()) {
        Q sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-')
                sign = -1;
            ++i;
        }
        std::size_t end = s.find_first_of("+-", i);
        std::string t = s.substr(i, end == std::string::npos ? std::string::npos : end - i);
        std::smatch m;
        if (!std::regex_match(t, m, term) || t.empty())
            throw Error("bad term '" + t + "' in '" + text + "'");
        Q coef = m[1].length() ? parse_q(m[1]) : Q(1);
        if (m[2].length()) {
            if (m[4].length())
                throw Error("bad term '" + t + "'");
            const Factor &f = dsl_factor(d, side, m[3]);
            v += sign * coef * central_char(d, f, m[2]).begin()->first;
        } else {
            if (!m[4].length())
                throw Error("expected a coordinate in '" + t + "'");
            v[dsl_coord(d, side, m[3].str() + m[4].str())] += sign * coef;
        }
        i = end == std::string::npos ? s.size() : end;
    }
    return v;
}

inline void embedding_line(const std::string &raw, const Datum &H, const Datum &G, std::vector<Vec> &image)
{
    std::string line = trim(raw);
    if (line == "identity") {
        if (H->dim != G->dim)
            throw Error("identity embedding between tori of different rank");
        for (int k = 0; k < H->dim; ++k)
            image[k][k] += 1;
        return;
    }
    auto arrow = line.find("->");
    if (arrow == std::string::npos)
        throw Error("embedding line without '->': '" + line + "'");
    std::string lhs = trim(line.substr(0, arrow)), rhs = trim(line.substr(arrow + 2));
    if (lhs.find('.') == std::string::npos) {
        const Factor &hf = dsl_factor(H, 'H', lhs);
        int off = 0;
        auto at = rhs.find('@');
        if (at != std::string::npos) {
            off = std::stoi(rhs.substr(at + 1));
            rhs = trim(rhs.substr(0, at));
        }
        const Factor &gf = dsl_factor(G, 'G', rhs);
        if (off < 0 || off + hf.ncoord > gf.ncoord)
            throw Error("block " + lhs + " does not fit into " + rhs + " at offset " + std::to_string(off));
        for (int c = 0; c < hf.ncoord; ++c)
            image[hf.coord0 + c][gf.coord0 + off + c] += 1;
        return;
    }
    image[dsl_coord(H, 'H', lhs)] += parse_combination(G, 'G', rhs);
}

inline std::vector<std::string> expand_loops(const std::vector<std::string> &lines, const Params &p)
{
    static const std::regex loop(R"(^\s*for\s+([a-z])\s+in\s+([^:]+)\.\.([^:]+):(.*)$)");
    std::vector<std::string> out;
    for (const auto &l : lines) {
        std::smatch m;
        if (std::regex_match(l, m, loop)) {
            std::string var = m[1];
            if (p.count(var))
                throw Error("loop variable '" + var + "' shadows a parameter");
            long long a = eval_int(substitute(m[2], p), p), b = eval_int(substitute(m[3], p), p);
            for (long long v = a; v <= b; ++v) {
                Params q = p;
                q[var] = v;
                for (const auto &x : expand_loops({m[4].str()}, q))
                    out.push_back(x);
            }
        } else
            out.push_back(substitute(l, p));
    }
    return out;
}

} // namespace detail

inline TorusMap parse_embedding(const Datum &H, const Datum &G, const std::vector<std::string> &lines,
                                const Params &p = {})
{
    TorusMap m{H, G, std::vector<Vec>(H->dim, zeros(G->dim))};
    for (const auto &l : detail::expand_loops(lines, p))
        detail::embedding_line(l, H, G, m.image);
    return m;
}

inline std::vector<Vec> parse_relations(const Datum &H, const std::vector<std::string> &lines, const Params &p = {})
{
    std::vector<Vec> out;
    for (const auto &l : detail::expand_loops(lines, p)) {
        Vec c = detail::parse_combination(H, 'H', l);
        for (int j = 0; j < H->rank(); ++j)
            if (H->pair(c, j) != 0)
                throw Error("relation '" + detail::trim(l) + "' is not central (pairs non-trivially with coroot " +
                            std::to_string(j + 1) + ")");
        out.push_back(c);
    }
    return out;
}

/* Characters of the ambient torus modulo the span of central relations C, with a
   canonical representative: the central part of a weight loses its component along C.
   Row k of the result is the k-th coordinate of P(e_j) as j varies. */
inline std::vector<Vec> relation_projection(const Datum &H, const std::vector<Vec> &C)
{
    int n = H->dim, r = H->rank();
    std::vector<Vec> P(n, zeros(n));
    std::vector<Vec> gram(C.size(), zeros(C.size()));
    for (std::size_t a = 0; a < C.size(); ++a)
        for (std::size_t b = 0; b < C.size(); ++b)
            gram[a][b] = dot(C[a], C[b]);
    if (!C.empty() && determinant(gram) == 0)
        throw Error("linearly dependent relations");
    std::vector<Vec> cart(r, zeros(r));
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i)
            cart[j][i] = H->cartan[i][j];
    for (int j = 0; j < n; ++j) {
        Vec lam = unit(n, j), central = lam;
        if (r) {
            Vec b(r);
            for (int i = 0; i < r; ++i)
                b[i] = H->pair(lam, i);
            Vec c = solve(cart, b);
            for (int i = 0; i < r; ++i)
                central += (-c[i]) * H->simple[i];
        }
        Vec out = lam;
        if (!C.empty()) {
            Vec b(C.size());
            for (std::size_t a = 0; a < C.size(); ++a)
                b[a] = dot(C[a], central);
            Vec d = solve(gram, b);
            for (std::size_t a = 0; a < C.size(); ++a)
                out += (-d[a]) * C[a];
        }
        for (int k = 0; k < n; ++k)
            P[k][j] = out[k];
    }
    return P;
}

inline Vec act(const std::vector<Vec> &P, const Vec &v)
{
    Vec out(P.size());
    for (std::size_t k = 0; k < P.size(); ++k)
        out[k] = dot(P[k], v);
    return out;
}

/* "none", "G1:2..4", "G1:1,G1:3,G2:1..2", "for i in 1..{m}: G1:{2*i-1}" -> global simple-root indices */
inline LeviLabel parse_iota(const Datum &G, const std::string &text, const Params &p = {})
{
    LeviLabel out;
    std::string s = detail::trim(text);
    if (s.empty() || s == "none")
        return out;
    std::vector<std::string> raw;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        raw.push_back(item);
    for (std::string item : detail::expand_loops(raw, p)) {
        item = detail::trim(item);
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw Error("nilpotent item '" + item + "' lacks a factor");
        const Factor &f = detail::dsl_factor(G, 'G', detail::trim(item.substr(0, colon)));
        std::string r = detail::trim(item.substr(colon + 1));
        auto dots = r.find("..");
        long long a = std::stoll(r.substr(0, dots));
        long long b = dots == std::string::npos ? a : std::stoll(r.substr(dots + 2));
        for (long long i = a; i <= b; ++i) {
            if (i < 1 || i > f.rank)
                throw Error("simple root " + std::to_string(i) + " out of range for " + f.label);
            out.push_back(f.root0 + static_cast<int>(i) - 1);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/* ---- instances ---- */

struct Instance {
    const CorpusEntry *entry = nullptr;
    Params params;
    Quadruple q;
    Datum Ghat;
    RepSum rho_hat;

    std::string label() const
    {
        std::string s = entry->id();
        if (params.empty())
            return s;
        s += "[";
        bool first = true;
        for (const auto &[k, v] : params) {
            s += (first ? "" : ",") + k + "=" + std::to_string(v);
            first = false;
        }
        return s + "]";
    }
};

inline Instance instantiate(const CorpusEntry &e, const Params &p)
{
    Instance in;
    in.entry = &e;
    in.params = p;
    auto sub = [&](const std::string &s) { return substitute(s, p); };
    in.q.G = make_datum(sub(e.G));
    Datum amb = make_datum(sub(e.H));
    auto rel = parse_relations(amb, e.H_relations, p);
    in.q.H = rel.empty() ? amb : make_datum(sub(e.H), static_cast<int>(rel.size()));
    in.q.emb = parse_embedding(in.q.H, in.q.G, e.embedding, p);
    RepSum rho = e.rho_H.empty() ? RepSum{in.q.H, {}} : parse_rep(in.q.H, sub(e.rho_H));
    if (!rel.empty()) {
        auto P = relation_projection(in.q.H, rel);
        std::vector<Vec> img;
        for (std::size_t k = 0; k < P.size(); ++k) {
            Vec x = zeros(in.q.G->dim);
            for (std::size_t j = 0; j < P.size(); ++j)
                if (P[k][j] != 0)
                    x += P[k][j] * in.q.emb.image[j];
            img.push_back(x);
        }
        in.q.emb.image = img;
        RepSum r{in.q.H, {}};
        for (const auto &[hw, m] : rho.parts)
            r.parts[act(P, hw)] += m;
        rho = r;
    }
    in.q.rho_H = rho;
    in.q.iota = parse_iota(in.q.G, e.iota, p);
    in.Ghat = make_datum(sub(e.Ghat));
    in.rho_hat = parse_rep(in.Ghat, sub(e.rho_hat));
    if (in.Ghat->rank() != in.q.G->rank())
        throw Error("dual group " + in.Ghat->label + " has a different rank from " + in.q.G->label);
    return in;
}

inline std::vector<Instance> instantiate_all(const CorpusEntry &e)
{
    std::vector<Instance> out;
    for (const auto &p : e.instances)
        out.push_back(instantiate(e, p));
    return out;
}

/* Pick the reductive target of a non-reductive instance. */
inline std::pair<const CorpusEntry *, Params> reduction_target(const Corpus &c, const Instance &in)
{
    for (const auto &t : in.entry->reduces_to) {
        if (!t.parity.empty()) {
            long long v = eval_int(t.parity_expr, in.params);
            bool odd = ((v % 2) + 2) % 2 == 1;
            if ((t.parity == "odd") != odd)
                continue;
        }
        const CorpusEntry *tgt = c.find(t.entry);
        if (!tgt)
            throw Error("reduction target " + t.entry + " is not in the corpus");
        Params p;
        for (const auto &[k, ex] : t.params)
            p[k] = eval_int(ex, in.params);
        return {tgt, p};
    }
    throw Error("no reduction target applies to " + in.label());
}

/* ---- JSON ---- */

namespace detail {

using nlohmann::json;

inline std::string req_string(const json &j, const char *key)
{
    if (!j.contains(key))
        throw Error(std::string("missing field '") + key + "'");
    if (!j.at(key).is_string())
        throw Error(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

inline std::string opt_string(const json &j, const char *key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return "";
    if (!j.at(key).is_string())
        throw Error(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

inline const std::set<std::string> &row_keys()
{
    static const std::set<std::string> k{"row",     "instances", "G",          "H",
                                         "H_relations", "embedding", "rho_H",  "iota",
                                         "Ghat",    "rho_hat",   "knop",       "reduces_to",
                                         "embedding_source", "period", "note"};
    return k;
}

inline Target target_from_json(const json &j)
{
    Target t;
    t.entry = req_string(j, "entry");
    if (j.contains("params")) {
        for (const auto &[k, v] : j.at("params").items()) {
            if (v.is_number_integer())
                t.params[k] = std::to_string(v.get<long long>());
            else
                t.params[k] = v.get<std::string>();
        }
    }
    for (const char *par : {"odd", "even"})
        if (j.contains(std::string("when_") + par)) {
            t.parity = par;
            t.parity_expr = j.at(std::string("when_") + par).get<std::string>();
        }
    return t;
}

inline json target_json(const Target &t)
{
    json j{{"entry", t.entry}};
    if (!t.params.empty()) {
        json p = json::object();
        for (const auto &[k, v] : t.params)
            p[k] = v;
        j["params"] = p;
    }
    if (!t.parity.empty())
        j["when_" + t.parity] = t.parity_expr;
    return j;
}

inline CorpusEntry entry_from_json(const std::string &table, const json &j)
{
    if (!j.is_object())
        throw Error("row is not an object");
    for (const auto &[k, v] : j.items())
        if (!row_keys().count(k))
            throw Error("unknown field '" + k + "'");
    CorpusEntry e;
    e.table = table;
    if (!j.contains("row") || !j.at("row").is_number_integer())
        throw Error("missing integer field 'row'");
    e.row = j.at("row").get<int>();
    if (!j.contains("instances") || !j.at("instances").is_array() || j.at("instances").empty())
        throw Error("missing or empty 'instances'");
    for (const auto &inst : j.at("instances")) {
        Params p;
        for (const auto &[k, v] : inst.items()) {
            if (k.size() != 1 || !v.is_number_integer())
                throw Error("instance parameters must be single letters with integer values");
            p[k] = v.get<long long>();
        }
        e.instances.push_back(p);
    }
    e.G = req_string(j, "G");
    e.H = req_string(j, "H");
    if (j.contains("H_relations"))
        for (const auto &l : j.at("H_relations"))
            e.H_relations.push_back(l.get<std::string>());
    if (!j.contains("embedding"))
        throw Error("missing torus map (field 'embedding')");
    if (!j.at("embedding").is_array() || j.at("embedding").empty())
        throw Error("torus map 'embedding' must be a non-empty list of lines");
    for (const auto &l : j.at("embedding"))
        e.embedding.push_back(l.get<std::string>());
    e.rho_H = req_string(j, "rho_H");
    e.iota = req_string(j, "iota");
    e.Ghat = req_string(j, "Ghat");
    e.rho_hat = req_string(j, "rho_hat");
    if (j.contains("knop") && !j.at("knop").is_null()) {
        const auto &k = j.at("knop");
        e.knop.number = req_string(k, "number");
        e.knop.W_V = req_string(k, "W_V");
        e.knop.l_hat = req_string(k, "l_hat");
        if (k.contains("pairing")) {
            auto s = k.at("pairing").get<std::string>();
            if (s != "editorial")
                throw Error("knop.pairing must be \"editorial\"");
            e.knop.editorial = true;
        }
    }
    if (j.contains("reduces_to"))
        for (const auto &t : j.at("reduces_to"))
            e.reduces_to.push_back(target_from_json(t));
    if (!reductive_table(table) && e.reduces_to.empty())
        throw Error("non-reductive row without 'reduces_to'");
    if (reductive_table(table) && !e.reduces_to.empty())
        throw Error("reductive row with 'reduces_to'");
    e.embedding_source = opt_string(j, "embedding_source");
    e.period = opt_string(j, "period");
    e.note = opt_string(j, "note");
    return e;
}

inline json entry_json(const CorpusEntry &e)
{
    json j = json::object();
    j["row"] = e.row;
    json inst = json::array();
    for (const auto &p : e.instances) {
        json o = json::object();
        for (const auto &[k, v] : p)
            o[k] = v;
        inst.push_back(o);
    }
    j["instances"] = inst;
    j["G"] = e.G;
    j["H"] = e.H;
    if (!e.H_relations.empty())
        j["H_relations"] = e.H_relations;
    j["embedding"] = e.embedding;
    j["rho_H"] = e.rho_H;
    j["iota"] = e.iota;
    j["Ghat"] = e.Ghat;
    j["rho_hat"] = e.rho_hat;
    if (e.knop.present()) {
        json k{{"number", e.knop.number}, {"W_V", e.knop.W_V}, {"l_hat", e.knop.l_hat}};
        if (e.knop.editorial)
            k["pairing"] = "editorial";
        j["knop"] = k;
    } else
        j["knop"] = nullptr;
    if (!e.reduces_to.empty()) {
        json r = json::array();
        for (const auto &t : e.reduces_to)
            r.push_back(target_json(t));
        j["reduces_to"] = r;
    }
    if (!e.embedding_source.empty())
        j["embedding_source"] = e.embedding_source;
    if (!e.period.empty())
        j["period"] = e.period;
    if (!e.note.empty())
        j["note"] = e.note;
    return j;
}

/* 1-based line of each top-level row object, found by the i-th `"row":` key */
inline std::vector<int> row_lines(const std::string &text)
{
    std::vector<int> out;
    static const std::regex key(R"re("row"\s*:)re");
    int line = 1;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), key); it != std::sregex_iterator(); ++it) {
        auto pos = static_cast<std::size_t>(it->position());
        line += static_cast<int>(std::count(text.begin() + last, text.begin() + pos, '\n'));
        last = pos;
        out.push_back(line);
    }
    return out;
}

} // namespace detail

inline nlohmann::json table_json(const Corpus &c, const std::string &table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &e : c.entries)
        if (e.table == table)
            rows.push_back(detail::entry_json(e));
    nlohmann::json j{{"schema", kCorpusSchema}, {"table", table}};
    auto cap = c.captions.find(table);
    if (cap != c.captions.end())
        j["caption"] = cap->second;
    j["rows"] = rows;
    return j;
}

/* Parse one table file; `deep` also instantiates every instance. */
inline void load_table_text(Corpus &c, const std::string &text, const std::string &where, bool deep = true)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError(where + ": " + e.what());
    }
    auto fail = [&](int line, const std::string &m) -> void {
        throw SchemaError(where + (line ? ":" + std::to_string(line) : "") + ": " + m);
    };
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != kCorpusSchema)
        fail(1, std::string("missing or unsupported 'schema' (expected ") + kCorpusSchema + ")");
    if (!j.contains("table") || !j.at("table").is_string())
        fail(1, "missing 'table'");
    std::string table = j.at("table").get<std::string>();
    if (std::find(table_ids().begin(), table_ids().end(), table) == table_ids().end())
        fail(1, "unknown table '" + table + "'");
    if (j.contains("caption"))
        c.captions[table] = j.at("caption").get<std::string>();
    if (!j.contains("rows") || !j.at("rows").is_array())
        fail(1, "missing 'rows' list");
    auto lines = detail::row_lines(text);
    std::set<int> seen;
    int idx = 0;
    for (const auto &r : j.at("rows")) {
        int line = idx < static_cast<int>(lines.size()) ? lines[idx] : 0;
        ++idx;
        CorpusEntry e;
        try {
            e = detail::entry_from_json(table, r);
        } catch (const SchemaError &) {
            throw;
        } catch (const std::exception &ex) {
            fail(line, ex.what());
        }
        e.line = line;
        if (!seen.insert(e.row).second)
            fail(line, "duplicate row " + std::to_string(e.row) + " in table " + table);
        if (deep)
            for (const auto &p : e.instances) {
                try {
                    instantiate(e, p);
                } catch (const std::exception &ex) {
                    fail(line, e.id() + ": " + ex.what());
                }
            }
        c.entries.push_back(std::move(e));
    }
}

inline std::string read_file(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw SchemaError(p.string() + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void load_excluded(Corpus &c, const std::filesystem::path &p)
{
    auto j = nlohmann::json::parse(read_file(p));
    if (!j.contains("schema") || j.at("schema") != kCorpusSchema)
        throw SchemaError(p.string() + ": unsupported schema");
    for (const auto &r : j.at("rows"))
        c.excluded.push_back({r.at("number").get<std::string>(), r.at("reason").get<std::string>()});
}

/* Load <dir>/<table>.json for every table, plus excluded.json when present. */
inline Corpus load_corpus(const std::filesystem::path &dir, bool deep = true)
{
    Corpus c;
    for (const auto &t : table_ids()) {
        auto p = dir / (t + ".json");
        load_table_text(c, read_file(p), p.string(), deep);
    }
    auto ex = dir / "excluded.json";
    if (std::filesystem::exists(ex))
        load_excluded(c, ex);
    /* reduction pointers must land in reductive tables */
    for (const auto &e : c.entries)
        for (const auto &t : e.reduces_to) {
            const CorpusEntry *tgt = c.find(t.entry);
            if (!tgt || !reductive_table(tgt->table))
                throw SchemaError(dir.string() + "/" + e.table + ".json:" + std::to_string(e.line) + ": " +
                                  e.id() + " reduces to '" + t.entry + "', which is not a reductive row");
        }
    return c;
}

inline std::filesystem::path default_corpus_dir()
{
    if (const char *env = std::getenv("STQ_CORPUS"); env && *env)
        return env;
#ifdef STQ_DATA_DIR
    return STQ_DATA_DIR;
#else
    return "data";
#endif
}

/* ---- verification ---- */

inline const std::vector<std::string> &check_names()
{
    static const std::vector<std::string> n{"integrality", "containment", "symplectic", "anomaly", "type-duality",
                                            "grading",     "fs",          "delta-red",  "whittaker"};
    return n;
}

struct EntryReport {
    std::string id;
    std::vector<Check> checks;

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

struct Report {
    std::vector<EntryReport> entries;

    std::size_t passed() const
    {
        return static_cast<std::size_t>(
            std::count_if(entries.begin(), entries.end(), [](const EntryReport &e) { return e.ok(); }));
    }
    std::size_t failed() const { return entries.size() - passed(); }
};

namespace detail {

inline Check type_duality(const Instance &in)
{
    Check c{"type-duality", true, ""};
    const Knop &k = in.entry->knop;
    if (!k.present()) {
        c.detail = "no Knop data";
        return c;
    }
    Params p = in.params;
    TypeList w = dual(parse_types(substitute(k.W_V, p)));
    TypeList l = dual(parse_types(substitute(k.l_hat, p)));
    TypeList h = ss_types(in.q.H);
    TypeList i = levi_types(in.q.G, in.q.iota);
    if (h != w) {
        c.ok = false;
        c.detail = "H has type " + str(h) + ", dual of W_V is " + str(w);
    } else if (i != l) {
        c.ok = false;
        c.detail = "nilpotent Levi has type " + str(i) + ", dual of l is " + str(l);
    }
    return c;
}

inline Check grading(const Instance &in, const Validation &v)
{
    Check c{"grading", true, ""};
    auto g = adjoint_grading(in.q.G, sl2_cocharacter(in.q.G, in.q.iota));
    for (const auto &[k, w] : g.levels)
        if (g.size(k) != g.size(-k)) {
            c.ok = false;
            c.detail = "|g(" + std::to_string(k) + ")| != |g(" + std::to_string(-k) + ")|";
            return c;
        }
    long long total_dim = 0;
    for (const auto &[k, r] : v.rho_k)
        total_dim += (k + 1) * r.dim();
    long long dim_g = static_cast<long long>(2 * in.q.G->pos.size()) + in.q.G->dim - in.q.G->constraints;
    if (total_dim != dim_g) {
        c.ok = false;
        c.detail = "sum (k+1) dim rho_k = " + std::to_string(total_dim) + ", dim g = " + std::to_string(dim_g);
    }
    return c;
}

inline bool fs_irreps(const RepSum &r, std::string &bad)
{
    for (const auto &[hw, m] : r.parts) {
        if (weyl_dim(r.d, hw) > 100)
            continue;
        int a = fs_indicator(r.d, hw), b = fs_oracle(r.d, hw);
        if (a != b) {
            bad = str(hw) + " on " + r.d->label + ": parity " + std::to_string(a) + ", oracle " + std::to_string(b);
            return false;
        }
    }
    return true;
}

inline void merge_check(std::vector<Check> &acc, const Check &c, const std::string &label)
{
    for (auto &a : acc)
        if (a.name == c.name) {
            if (a.ok && !c.ok) {
                a.ok = false;
                a.detail = label + ": " + c.detail;
            } else if (a.ok && a.detail.empty())
                a.detail = c.detail;
            return;
        }
    acc.push_back(c);
    if (!c.ok)
        acc.back().detail = label + ": " + c.detail;
}

} // namespace detail

inline std::vector<Check> verify_instance(const Corpus &c, const Instance &in)
{
    std::vector<Check> out;
    Validation v = validate(in.q, &in.rho_hat);
    for (const auto &ch : v.checks)
        out.push_back(ch);
    out.push_back(detail::type_duality(in));
    bool graded = !v.rho_k.empty();
    if (graded)
        out.push_back(detail::grading(in, v));
    else
        out.push_back({"grading", false, "no grading"});
    {
        Check f{"fs", true, ""};
        std::string bad;
        if (graded && !detail::fs_irreps(v.rho_H_iota, bad)) {
            f.ok = false;
            f.detail = bad;
        } else if (!detail::fs_irreps(in.rho_hat, bad)) {
            f.ok = false;
            f.detail = bad;
        }
        out.push_back(f);
    }
    Check red{"delta-red", true, ""}, wh{"whittaker", true, ""};
    if (in.q.iota.empty() && reductive_table(in.entry->table)) {
        red.detail = wh.detail = "reductive";
    } else {
        try {
            auto [tgt, tp] = reduction_target(c, in);
            Instance ti = instantiate(*tgt, tp);
            Reduction r = delta_red_full(in.q);
            NormalForm got = normal_form(r.red), want = normal_form(ti.q);
            if (got != want) {
                red.ok = false;
                red.detail = "reduces to " + str(got) + ", expected " + ti.label() + " = " + str(want);
            } else
                red.detail = ti.label();
            WhittakerResult w = check_whittaker_compatibility(in.rho_hat, r.J, ti.rho_hat);
            if (!w.ok) {
                wh.ok = false;
                wh.detail = w.detail;
            }
        } catch (const std::exception &e) {
            red.ok = wh.ok = false;
            red.detail = wh.detail = e.what();
        }
    }
    out.push_back(red);
    out.push_back(wh);
    return out;
}

inline EntryReport verify_entry(const Corpus &c, const CorpusEntry &e, const std::set<std::string> &checks)
{
    EntryReport rep{e.id(), {}};
    for (const auto &p : e.instances) {
        std::string label = e.id();
        std::vector<Check> cs;
        try {
            Instance in = instantiate(e, p);
            label = in.label();
            cs = verify_instance(c, in);
        } catch (const std::exception &ex) {
            for (const auto &n : check_names())
                cs.push_back({n, false, ex.what()});
        }
        for (const auto &ch : cs)
            if (checks.empty() || checks.count(ch.name))
                detail::merge_check(rep.checks, ch, label);
    }
    return rep;
}

/* Entries are verified in parallel; the report keeps the input order. */
inline Report verify_corpus(const Corpus &c, const std::vector<const CorpusEntry *> &sel,
                            const std::set<std::string> &checks = {}, unsigned threads = 0)
{
    for (const auto &n : checks)
        if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
            throw Error("unknown check '" + n + "'");
    Report r;
    r.entries.resize(sel.size());
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < sel.size(); i = next++)
            r.entries[i] = verify_entry(c, *sel[i], checks);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(threads, sel.size()); ++t)
        pool.emplace_back(work);
    work();
    for (auto &t : pool)
        t.join();
    return r;
}

inline Report verify_corpus(const Corpus &c, const std::set<std::string> &checks = {}, unsigned threads = 0)
{
    std::vector<const CorpusEntry *> sel;
    for (const auto &e : c.entries)
        sel.push_back(&e);
    return verify_corpus(c, sel, checks, threads);
}

inline nlohmann::json report_json(const Report &r)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &e : r.entries) {
        nlohmann::json checks = nlohmann::json::object();
        for (const auto &c : e.checks)
            checks[c.name] = {{"ok", c.ok}, {"detail", c.detail}};
        entries.push_back({{"entry", e.id}, {"ok", e.ok()}, {"checks", checks}});
    }
    return {{"schema", "stq-report/1"},
            {"passed", r.passed()},
            {"total", r.entries.size()},
            {"entries", entries}};
}

} // namespace stq

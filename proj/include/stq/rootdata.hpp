#pragma once

#include "lattice.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <regex>
#include <set>

namespace stq {

/* Simple Lie type, normalized: B1=C1=A1, C2=B2, D2=A1xA1, D3=A3. */
struct SimpleType {
    char t = 'A';
    int n = 1;
    auto operator<=>(const SimpleType &) const = default;
};

inline std::string str(const SimpleType &s) { return std::string(1, s.t) + std::to_string(s.n); }

using TypeList = std::vector<SimpleType>;

inline TypeList normalize(char t, int n)
{
    if (n <= 0)
        return {};
    switch (t) {
    case 'A':
        return {{'A', n}};
    case 'B':
        if (n == 1)
            return {{'A', 1}};
        return {{'B', n}};
    case 'C':
        if (n == 1)
            return {{'A', 1}};
        if (n == 2)
            return {{'B', 2}};
        return {{'C', n}};
    case 'D':
        if (n == 1)
            return {};
        if (n == 2)
            return {{'A', 1}, {'A', 1}};
        if (n == 3)
            return {{'A', 3}};
        return {{'D', n}};
    case 'E':
        if (n != 6 && n != 7)
            throw Error("unsupported type E" + std::to_string(n));
        return {{'E', n}};
    case 'G':
        if (n != 2)
            throw Error("unsupported type G" + std::to_string(n));
        return {{'G', 2}};
    default:
        throw Error(std::string("unsupported type label ") + t);
    }
}

inline SimpleType dual(SimpleType s)
{
    if (s.t == 'B')
        return s.n == 2 ? s : SimpleType{'C', s.n};
    if (s.t == 'C')
        return {'B', s.n};
    return s;
}

inline TypeList dual(TypeList l)
{
    for (auto &s : l)
        s = dual(s);
    std::sort(l.begin(), l.end());
    return l;
}

inline std::string str(const TypeList &l)
{
    if (l.empty())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (i)
            s += "x";
        s += str(l[i]);
    }
    return s;
}

/* "A1xA1xB2", "(A1)^3", "C2 x D4 x A1", "0" */
inline TypeList parse_types(const std::string &text)
{
    TypeList out;
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '_' && c != '{' && c != '}')
            s += c;
    if (s.empty() || s == "0" || s == "1" || s == "trivial")
        return out;
    static const std::regex item(R"(^\(?([ABCDEG])(-?\d+)\)?(\^(\d+))?$)");
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find('x', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        std::smatch m;
        if (!std::regex_match(tok, m, item))
            throw Error("bad root type '" + tok + "'");
        int n = std::stoi(m[2]);
        int rep = m[4].matched ? std::stoi(m[4]) : 1;
        if (n < 0)
            throw Error("negative rank in root type '" + tok + "'");
        for (int r = 0; r < rep; ++r)
            for (auto t : normalize(m[1].str()[0], n))
                out.push_back(t);
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

using Matrix = std::vector<std::vector<int>>;

inline Matrix cartan_of(SimpleType s)
{
    int n = s.n;
    Matrix C(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        C[i][i] = 2;
    auto link = [&](int i, int j) { C[i][j] = C[j][i] = -1; };
    switch (s.t) {
    case 'A':
        for (int i = 0; i + 1 < n; ++i)
            link(i, i + 1);
        break;
    case 'B':
        for (int i = 0; i + 1 < n; ++i)
            link(i, i + 1);
        C[n - 2][n - 1] = -2; /* <a_{n-1}, a_n^v> = -2: a_{n-1} long */
        break;
    case 'C':
        for (int i = 0; i + 1 < n; ++i)
            link(i, i + 1);
        C[n - 1][n - 2] = -2;
        break;
    case 'D':
        for (int i = 0; i + 2 < n; ++i)
            link(i, i + 1);
        link(n - 3, n - 1);
        break;
    case 'E':
        link(0, 2);
        link(2, 3);
        link(3, 4);
        link(1, 3);
        for (int i = 4; i + 1 < n; ++i)
            link(i, i + 1);
        break;
    case 'G':
        C[0][1] = -1;
        C[1][0] = -3;
        break;
    }
    return C;
}

/* A connected Dynkin component; nodes are global simple-root indices in Bourbaki order. */
struct Component {
    SimpleType type;
    std::vector<int> nodes;
};

/* Diagram automorphisms as permutations of Bourbaki positions. */
inline std::vector<std::vector<int>> automorphisms(SimpleType s)
{
    std::vector<int> id(s.n);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<int>> out{id};
    if (s.t == 'A' && s.n >= 2) {
        auto r = id;
        std::reverse(r.begin(), r.end());
        out.push_back(r);
    } else if (s.t == 'D' && s.n >= 5) {
        auto r = id;
        std::swap(r[s.n - 2], r[s.n - 1]);
        out.push_back(r);
    } else if (s.t == 'D' && s.n == 4) {
        std::vector<int> legs{0, 2, 3};
        std::sort(legs.begin(), legs.end());
        do {
            if (legs == std::vector<int>{0, 2, 3})
                continue;
            std::vector<int> p{legs[0], 1, legs[1], legs[2]};
            out.push_back(p);
        } while (std::next_permutation(legs.begin(), legs.end()));
    } else if (s.t == 'E' && s.n == 6) {
        out.push_back({5, 1, 4, 3, 2, 0});
    }
    return out;
}

/* Split a Cartan matrix (C[i][j] = <a_i, a_j^v>) into Bourbaki-ordered components. */
inline std::vector<Component> identify(const Matrix &C, const std::vector<int> &subset)
{
    std::vector<Component> out;
    std::set<int> left(subset.begin(), subset.end());
    auto adj = [&](int i, int j) { return i != j && (C[i][j] != 0 || C[j][i] != 0); };
    while (!left.empty()) {
        int start = *left.begin();
        std::vector<int> comp{start};
        left.erase(start);
        for (std::size_t k = 0; k < comp.size(); ++k)
            for (auto it = left.begin(); it != left.end();) {
                if (adj(comp[k], *it)) {
                    comp.push_back(*it);
                    it = left.erase(it);
                } else
                    ++it;
            }
        int r = static_cast<int>(comp.size());
        auto nbrs = [&](int v) {
            std::vector<int> n;
            for (int u : comp)
                if (adj(u, v))
                    n.push_back(u);
            return n;
        };
        int maxbond = 1;
        for (int u : comp)
            for (int v : comp)
                if (u != v)
                    maxbond = std::max(maxbond, std::abs(C[u][v]));
        auto walk = [&](int from, int avoid) {
            std::vector<int> path{from};
            int prev = avoid, cur = from;
            while (true) {
                int nxt = -1;
                for (int u : nbrs(cur))
                    if (u != prev)
                        nxt = u;
                if (nxt < 0 || nbrs(cur).size() > 2)
                    break;
                path.push_back(nxt);
                prev = cur;
                cur = nxt;
            }
            return path;
        };
        Component c;
        if (r == 1) {
            c = {{'A', 1}, comp};
        } else if (maxbond == 3) {
            int a = comp[0], b = comp[1];
            if (C[a][b] == -3) /* a long */
                std::swap(a, b);
            c = {{'G', 2}, {a, b}};
        } else if (maxbond == 2) {
            int endpoint = -1;
            int i2 = -1, j2 = -1;
            for (int u : comp)
                for (int v : comp)
                    if (u != v && C[u][v] == -2) {
                        i2 = u; /* long */
                        j2 = v; /* short */
                    }
            std::vector<int> order;
            if (r == 2) {
                order = {i2, j2};
                c = {{'B', 2}, order};
            } else {
                for (int u : comp)
                    if (nbrs(u).size() == 1 && u != i2 && u != j2)
                        endpoint = u;
                order = walk(endpoint, -1);
                int last = order.back();
                bool last_short = (last == j2);
                c = {{last_short ? 'B' : 'C', r}, order};
            }
        } else {
            int branch = -1;
            for (int u : comp)
                if (nbrs(u).size() >= 3)
                    branch = u;
            if (branch < 0) {
                int endpoint = comp[0];
                for (int u : comp)
                    if (nbrs(u).size() == 1) {
                        endpoint = u;
                        break;
                    }
                c = {{'A', r}, walk(endpoint, -1)};
            } else {
                std::vector<std::vector<int>> arms;
                for (int u : nbrs(branch))
                    arms.push_back(walk(u, branch));
                std::sort(arms.begin(), arms.end(),
                          [](const auto &x, const auto &y) { return x.size() < y.size(); });
                std::size_t a = arms[0].size(), b = arms[1].size(), d = arms[2].size();
                if (a == 1 && b == 1) {
                    std::vector<int> order(arms[2].rbegin(), arms[2].rend());
                    order.push_back(branch);
                    order.push_back(arms[0][0]);
                    order.push_back(arms[1][0]);
                    c = {{'D', r}, order};
                } else if (a == 1 && b == 2 && (d == 2 || d == 3)) {
                    std::vector<int> order{arms[1][1], arms[0][0], arms[1][0], branch};
                    for (int u : arms[2])
                        order.push_back(u);
                    c = {{'E', r}, order};
                } else {
                    throw Error("unsupported Dynkin diagram");
                }
            }
        }
        out.push_back(c);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Component &x, const Component &y) { return x.type < y.type; });
    return out;
}

enum class Kind { GL, SL, PGL, Sp, GSp, SO, Spin, GSO, GSpin, PGSO, E, GE, G2, Torus };

/* One named factor of a product group; owns a contiguous coordinate block. */
struct Factor {
    std::string label;
    Kind kind = Kind::GL;
    int n = 0;     /* numeric suffix of the label */
    int rank = 0;  /* semisimple rank */
    int coord0 = 0;
    int ncoord = 0;
    int base = 1;  /* name of the first coordinate (0 for similitude groups) */
    int root0 = 0; /* first global simple-root index */
    char series = 'A';
};

class RootDatum;
using Datum = std::shared_ptr<const RootDatum>;

struct WeylElement {
    /* w = s_{word[0]} s_{word[1]} ... ; the last letter acts first */
    std::vector<int> word;
    std::size_t length() const { return word.size(); }
};

class RootDatum {
public:
    std::vector<Factor> factors;
    int dim = 0;
    std::vector<Vec> simple, cosimple;
    int constraints = 0; /* extra central relations, e.g. S(...) and G(...) groups */
    std::string label;

    Matrix cartan;
    std::vector<Vec> pos, copos;
    std::vector<std::vector<int>> poscoef;
    Vec rho, two_rho_check;
    std::vector<Component> components;

    RootDatum(std::vector<Factor> f, int d, std::vector<Vec> a, std::vector<Vec> av, int cons = 0,
              std::string lab = "")
        : factors(std::move(f)), dim(d), simple(std::move(a)), cosimple(std::move(av)),
          constraints(cons), label(std::move(lab))
    {
        int r = rank();
        cartan.assign(r, std::vector<int>(r, 0));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                Q c = dot(simple[i], cosimple[j]);
                if (!is_integer(c))
                    throw Error("non-integral Cartan entry");
                cartan[i][j] = static_cast<int>(c.numerator());
            }
        for (int i = 0; i < r; ++i)
            if (cartan[i][i] != 2)
                throw Error("simple root does not pair to 2 with its coroot");
        std::vector<int> all(r);
        std::iota(all.begin(), all.end(), 0);
        components = identify(cartan, all);
        enumerate_positive();
        rho = zeros(dim);
        two_rho_check = zeros(dim);
        for (std::size_t k = 0; k < pos.size(); ++k) {
            rho += Q(1, 2) * pos[k];
            two_rho_check += copos[k];
        }
    }

    int rank() const { return static_cast<int>(simple.size()); }
    long long group_dim() const
    {
        return 2 * static_cast<long long>(pos.size()) + dim - constraints;
    }
    int central_rank() const { return dim - constraints - rank(); }

    TypeList types() const
    {
        TypeList t;
        for (const auto &c : components)
            t.push_back(c.type);
        std::sort(t.begin(), t.end());
        return t;
    }

    Q pair(const Vec &w, int i) const { return dot(w, cosimple.at(i)); }

    Vec labels(const Vec &w) const
    {
        Vec l(rank());
        for (int i = 0; i < rank(); ++i)
            l[i] = pair(w, i);
        return l;
    }

    Vec reflect(int i, const Vec &w) const
    {
        Q c = pair(w, i);
        if (c == 0)
            return w;
        return w - c * simple[i];
    }

    Vec coreflect(int i, const Vec &x) const
    {
        Q c = dot(simple[i], x);
        if (c == 0)
            return x;
        return x - c * cosimple[i];
    }

    Vec act(const WeylElement &w, Vec v) const
    {
        for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
            v = reflect(*it, v);
        return v;
    }

    Vec coact(const WeylElement &w, Vec x) const
    {
        for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
            x = coreflect(*it, x);
        return x;
    }

    bool dominant(const Vec &w) const
    {
        for (int i = 0; i < rank(); ++i)
            if (pair(w, i) < 0)
                return false;
        return true;
    }

    bool regular_dominant(const Vec &w) const
    {
        for (int i = 0; i < rank(); ++i)
            if (pair(w, i) <= 0)
                return false;
        return true;
    }

    std::pair<Vec, WeylElement> dominantize(Vec w) const
    {
        std::vector<int> applied;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int i = 0; i < rank(); ++i)
                if (pair(w, i) < 0) {
                    w = reflect(i, w);
                    applied.push_back(i);
                    moved = true;
                    break;
                }
        }
        std::reverse(applied.begin(), applied.end());
        return {w, WeylElement{applied}};
    }

    /* dominant for cocharacters means <a_i, x> >= 0 */
    std::pair<Vec, WeylElement> codominantize(Vec x) const
    {
        std::vector<int> applied;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int i = 0; i < rank(); ++i)
                if (dot(simple[i], x) < 0) {
                    x = coreflect(i, x);
                    applied.push_back(i);
                    moved = true;
                    break;
                }
        }
        std::reverse(applied.begin(), applied.end());
        return {x, WeylElement{applied}};
    }

    WeylElement longest_element() const
    {
        if (rank() == 0)
            throw Error("longest element of a torus requested");
        return dominantize(-rho).second;
    }

    Vec minus_w0(const Vec &w) const
    {
        if (rank() == 0)
            return -w;
        return -act(longest_element_cached(), w);
    }

    /* all roots, positive then negative */
    std::vector<Vec> roots() const
    {
        std::vector<Vec> r = pos;
        for (const auto &p : pos)
            r.push_back(-p);
        return r;
    }

    const Factor &factor(const std::string &lab, int occurrence = 1) const
    {
        int seen = 0;
        for (const auto &f : factors)
            if (f.label == lab && ++seen == occurrence)
                return f;
        throw Error("no factor '" + lab + (occurrence > 1 ? "#" + std::to_string(occurrence) : "") +
                    "' in " + label);
    }

    /* global coordinate index of a named coordinate of factor k */
    int coord(int k, int c) const
    {
        const auto &f = factors.at(k);
        int local = c - f.base;
        if (local < 0 || local >= f.ncoord)
            throw Error("coordinate " + std::to_string(c) + " out of range for " + f.label);
        return f.coord0 + local;
    }

private:
    mutable std::shared_ptr<WeylElement> w0_;

    const WeylElement &longest_element_cached() const
    {
        /* constructed lazily; identical on every call */
        if (!w0_)
            w0_ = std::make_shared<WeylElement>(longest_element());
        return *w0_;
    }

    void enumerate_positive()
    {
        int r = rank();
        std::map<Vec, int> seen;
        std::deque<int> queue;
        for (int i = 0; i < r; ++i) {
            seen[simple[i]] = static_cast<int>(pos.size());
            pos.push_back(simple[i]);
            copos.push_back(cosimple[i]);
            std::vector<int> c(r, 0);
            c[i] = 1;
            poscoef.push_back(c);
            queue.push_back(static_cast<int>(pos.size()) - 1);
        }
        while (!queue.empty()) {
            int k = queue.front();
            queue.pop_front();
            for (int i = 0; i < r; ++i) {
                Q c = pair(pos[k], i);
                if (c == 0)
                    continue;
                Vec nr = pos[k] - c * simple[i];
                std::vector<int> coef = poscoef[k];
                coef[i] -= static_cast<int>(c.numerator());
                bool positive = true;
                for (int x : coef)
                    if (x < 0)
                        positive = false;
                if (!positive || seen.count(nr))
                    continue;
                seen[nr] = static_cast<int>(pos.size());
                pos.push_back(nr);
                copos.push_back(coreflect(i, copos[k]));
                poscoef.push_back(coef);
                queue.push_back(static_cast<int>(pos.size()) - 1);
                if (pos.size() > 200)
                    throw Error("root system too large");
            }
        }
    }
};

/* Linear map on cocharacters, src -> tgt; image[k] is the image of src basis cocharacter k. */
struct TorusMap {
    Datum src, tgt;
    std::vector<Vec> image;

    Vec pullback(const Vec &w) const
    {
        Vec out(image.size());
        for (std::size_t k = 0; k < image.size(); ++k)
            out[k] = dot(w, image[k]);
        return out;
    }

    Vec push(const Vec &x) const
    {
        Vec y = zeros(tgt->dim);
        for (std::size_t k = 0; k < image.size(); ++k)
            if (x[k] != 0)
                y += x[k] * image[k];
        return y;
    }

    static TorusMap identity(Datum d)
    {
        TorusMap m{d, d, {}};
        for (int k = 0; k < d->dim; ++k)
            m.image.push_back(unit(d->dim, k));
        return m;
    }
};

/* ---- factor construction ---- */

namespace detail {

struct Block {
    Factor f;
    std::vector<Vec> a, av; /* local coordinates */
};

inline Vec lv(int n, std::initializer_list<std::pair<int, int>> terms)
{
    Vec v = zeros(n);
    for (auto [i, c] : terms)
        v[i] += c;
    return v;
}

inline Block label_block(Factor f, SimpleType s, int extra = 0)
{
    Matrix C = cartan_of(s);
    Block b{f, {}, {}};
    int n = s.n + extra;
    for (int i = 0; i < s.n; ++i) {
        Vec a = zeros(n), av = zeros(n);
        for (int j = 0; j < s.n; ++j)
            a[j] = C[i][j];
        av[i] = 1;
        b.a.push_back(a);
        b.av.push_back(av);
    }
    b.f.ncoord = n;
    b.f.rank = s.n;
    b.f.series = s.t;
    return b;
}

inline Block make_block(const std::string &label)
{
    static const std::regex re(R"(^(GSpin|GSp|GSO|GL|GE|PGSO|PGL|Spin|SO|SL|Sp|E|G|T)(\d+)$)");
    std::smatch m;
    if (!std::regex_match(label, m, re))
        throw Error("unsupported group label '" + label + "'");
    std::string k = m[1];
    int N = std::stoi(m[2]);
    Factor f;
    f.label = label;
    f.n = N;
    Block b{f, {}, {}};
    auto ab = [&](Vec a, Vec av) {
        b.a.push_back(std::move(a));
        b.av.push_back(std::move(av));
    };
    if (k == "GL" || k == "T") {
        if (N < 1)
            throw Error("bad rank in '" + label + "'");
        b.f.kind = k == "GL" ? Kind::GL : Kind::Torus;
        b.f.ncoord = N;
        if (k == "GL") {
            b.f.rank = N - 1;
            for (int i = 0; i + 1 < N; ++i)
                ab(lv(N, {{i, 1}, {i + 1, -1}}), lv(N, {{i, 1}, {i + 1, -1}}));
        }
        return b;
    }
    if (k == "SL" || k == "PGL") {
        if (N < 2)
            throw Error("bad rank in '" + label + "'");
        f.kind = k == "SL" ? Kind::SL : Kind::PGL;
        return label_block(f, {'A', N - 1});
    }
    if (k == "E" || k == "GE") {
        if (N != 6 && N != 7)
            throw Error("unsupported type " + label);
        if (k == "GE" && N != 6)
            throw Error("unsupported type " + label);
        f.kind = k == "E" ? Kind::E : Kind::GE;
        return label_block(f, {'E', N}, k == "GE" ? 1 : 0);
    }
    if (k == "G") {
        if (N != 2)
            throw Error("unsupported type " + label);
        f.kind = Kind::G2;
        return label_block(f, {'G', 2});
    }
    if (k == "PGSO") {
        if (N % 2 || N < 8)
            throw Error("unsupported group " + label);
        f.kind = Kind::PGSO;
        return label_block(f, {'D', N / 2});
    }
    if (k == "Sp" || k == "SO" || k == "Spin") {
        int n = N / 2;
        bool odd = N % 2;
        if (k == "Sp" && (odd || n < 1))
            throw Error("bad rank in '" + label + "'");
        if (n < 1)
            throw Error("bad rank in '" + label + "'");
        b.f.kind = k == "Sp" ? Kind::Sp : k == "SO" ? Kind::SO : Kind::Spin;
        b.f.ncoord = n;
        b.f.series = k == "Sp" ? 'C' : odd ? 'B' : 'D';
        for (int i = 0; i + 1 < n; ++i)
            ab(lv(n, {{i, 1}, {i + 1, -1}}), lv(n, {{i, 1}, {i + 1, -1}}));
        if (k == "Sp")
            ab(lv(n, {{n - 1, 2}}), lv(n, {{n - 1, 1}}));
        else if (odd)
            ab(lv(n, {{n - 1, 1}}), lv(n, {{n - 1, 2}}));
        else if (n >= 2)
            ab(lv(n, {{n - 2, 1}, {n - 1, 1}}), lv(n, {{n - 2, 1}, {n - 1, 1}}));
        b.f.rank = static_cast<int>(b.a.size());
        return b;
    }
    if (k == "GSp" || k == "GSO" || k == "GSpin") {
        int n = N / 2;
        bool odd = N % 2;
        if ((k != "GSpin" && odd) || n < 1)
            throw Error("bad rank in '" + label + "'");
        if (k == "GSO" && n < 2)
            throw Error("bad rank in '" + label + "'");
        b.f.kind = k == "GSp" ? Kind::GSp : k == "GSO" ? Kind::GSO : Kind::GSpin;
        b.f.base = 0;
        b.f.ncoord = n + 1;
        int m = n + 1;
        for (int i = 1; i < n; ++i)
            ab(lv(m, {{i, 1}, {i + 1, -1}}), lv(m, {{i, 1}, {i + 1, -1}}));
        if (k == "GSp") {
            b.f.series = 'C';
            ab(lv(m, {{n, 2}, {0, -1}}), lv(m, {{n, 1}}));
        } else if (k == "GSO") {
            b.f.series = 'D';
            ab(lv(m, {{n - 1, 1}, {n, 1}, {0, -1}}), lv(m, {{n - 1, 1}, {n, 1}}));
        } else if (odd) {
            b.f.series = 'B';
            ab(lv(m, {{n, 1}}), lv(m, {{n, 2}, {0, -1}}));
        } else {
            b.f.series = 'D';
            if (n >= 2)
                ab(lv(m, {{n - 1, 1}, {n, 1}}), lv(m, {{n - 1, 1}, {n, 1}, {0, -1}}));
        }
        b.f.rank = static_cast<int>(b.a.size());
        return b;
    }
    throw Error("unsupported group label '" + label + "'");
}

inline std::vector<std::string> split_product(const std::string &spec)
{
    std::vector<std::string> out;
    std::string s;
    /* accept " x ", "×" and "*" as separators */
    std::string norm;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec.compare(i, 2, "\xC3\x97") == 0) {
            norm += ' ';
            norm += 'x';
            norm += ' ';
            ++i;
            continue;
        }
        norm += spec[i];
    }
    std::istringstream in(norm);
    std::string tok;
    while (in >> tok) {
        if (tok == "x" || tok == "*")
            continue;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            int rep = std::stoi(tok.substr(caret + 1));
            std::string base = tok.substr(0, caret);
            if (base.size() > 2 && base.front() == '(' && base.back() == ')')
                base = base.substr(1, base.size() - 2);
            for (int r = 0; r < rep; ++r)
                out.push_back(base);
        } else
            out.push_back(tok);
    }
    return out;
}

} // namespace detail

/* Build a product group from labels such as "GSp6 x GSpin7" or "GL2^5". */
inline Datum make_datum(const std::string &spec, int constraints = 0)
{
    std::vector<detail::Block> blocks;
    for (const auto &lab : detail::split_product(spec))
        blocks.push_back(detail::make_block(lab));
    std::vector<Factor> facs;
    int dim = 0, roots = 0;
    for (auto &b : blocks) {
        b.f.coord0 = dim;
        b.f.root0 = roots;
        dim += b.f.ncoord;
        roots += static_cast<int>(b.a.size());
        facs.push_back(b.f);
    }
    std::vector<Vec> a, av;
    for (const auto &b : blocks)
        for (std::size_t i = 0; i < b.a.size(); ++i) {
            Vec x = zeros(dim), y = zeros(dim);
            for (int c = 0; c < b.f.ncoord; ++c) {
                x[b.f.coord0 + c] = b.a[i][c];
                y[b.f.coord0 + c] = b.av[i][c];
            }
            a.push_back(x);
            av.push_back(y);
        }
    std::string label;
    for (std::size_t i = 0; i < facs.size(); ++i)
        label += (i ? " x " : "") + facs[i].label;
    if (facs.empty())
        label = "1";
    return std::make_shared<RootDatum>(facs, dim, a, av, constraints, label);
}

enum class Lattice { SimplyConnected, Adjoint, Explicit };

/* Semisimple datum from type labels.  Explicit mode takes a basis X of the character
   lattice in fundamental-weight coordinates and a basis Y of the cocharacter lattice in
   simple-coroot coordinates; their pairing must be perfect. */
inline Datum build_root_datum(const std::string &types, Lattice lat = Lattice::SimplyConnected,
                              const std::vector<Vec> &X = {}, const std::vector<Vec> &Y = {})
{
    TypeList tl = parse_types(types);
    int r = 0;
    for (auto t : tl)
        r += t.n;
    Matrix C(r, std::vector<int>(r, 0));
    int off = 0;
    for (auto t : tl) {
        Matrix c = cartan_of(t);
        for (int i = 0; i < t.n; ++i)
            for (int j = 0; j < t.n; ++j)
                C[off + i][off + j] = c[i][j];
        off += t.n;
    }
    std::vector<Vec> a, av;
    for (int i = 0; i < r; ++i) {
        Vec x = zeros(r);
        for (int j = 0; j < r; ++j)
            x[j] = C[i][j];
        a.push_back(x);
        av.push_back(unit(r, i));
    }
    if (lat == Lattice::Adjoint) {
        /* coordinates w.r.t. simple roots; coroot j pairs with root i as C[i][j] */
        std::vector<Vec> a2, av2;
        for (int i = 0; i < r; ++i) {
            a2.push_back(unit(r, i));
            Vec y = zeros(r);
            for (int k = 0; k < r; ++k)
                y[k] = C[k][i];
            av2.push_back(y);
        }
        a = a2;
        av = av2;
    } else if (lat == Lattice::Explicit) {
        if (static_cast<int>(X.size()) != r || static_cast<int>(Y.size()) != r)
            throw Error("explicit lattice needs rank-many basis vectors");
        std::vector<Vec> P(r, zeros(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                P[i][j] = dot(X[i], Y[j]);
        Q det = determinant(P);
        if (det != 1 && det != -1)
            throw Error("non-perfect pairing (det " + str(det) + ")");
        /* roots in X coordinates: solve sum_k x_k X_k = a_i */
        std::vector<Vec> XT(r, zeros(r)), YT(r, zeros(r));
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < r; ++k) {
                XT[i][k] = X[k][i];
                YT[i][k] = Y[k][i];
            }
        std::vector<Vec> a2, av2;
        for (int i = 0; i < r; ++i) {
            Vec x = solve(XT, a[i]);
            for (auto &q : x)
                if (!is_integer(q))
                    throw Error("root outside the explicit character lattice");
            Vec y = solve(YT, av[i]);
            for (auto &q : y)
                if (!is_integer(q))
                    throw Error("coroot outside the explicit cocharacter lattice");
            a2.push_back(x);
            /* pairing x . P y expressed as a plain dot product */
            Vec py = zeros(r);
            for (int k = 0; k < r; ++k)
                for (int j = 0; j < r; ++j)
                    py[k] += P[k][j] * y[j];
            av2.push_back(py);
        }
        a = a2;
        av = av2;
    }
    return std::make_shared<RootDatum>(std::vector<Factor>{}, r, a, av, 0, str(tl));
}

/* Levi sub-datum on the same torus; L lists global simple-root indices. */
inline std::pair<Datum, TorusMap> levi_subdatum(const Datum &d, const std::vector<int> &L)
{
    std::vector<Vec> a, av;
    for (int i : L) {
        if (i < 0 || i >= d->rank())
            throw Error("invalid Levi index " + std::to_string(i));
        a.push_back(d->simple[i]);
        av.push_back(d->cosimple[i]);
    }
    auto sub = std::make_shared<RootDatum>(d->factors, d->dim, a, av, d->constraints,
                                           "Levi(" + d->label + ")");
    TorusMap m{sub, d, {}};
    for (int k = 0; k < d->dim; ++k)
        m.image.push_back(unit(d->dim, k));
    return {sub, m};
}

/* Langlands dual: roots and coroots exchanged on the dual torus. */
inline Datum dual_datum(const Datum &d)
{
    return std::make_shared<RootDatum>(d->factors, d->dim, d->cosimple, d->simple, d->constraints,
                                       "dual(" + d->label + ")");
}

inline TypeList levi_types(const Datum &d, const std::vector<int> &L)
{
    TypeList t;
    for (const auto &c : identify(d->cartan, L))
        t.push_back(c.type);
    std::sort(t.begin(), t.end());
    return t;
}

} // namespace stq

#pragma once

#include "repcalc.hpp"

#include <cctype>
#include <functional>

namespace stq {

namespace detail {

inline int factor_index(const Datum &d, const std::string &ref)
{
    if (!ref.empty() && ref[0] == '#') {
        int k = std::stoi(ref.substr(1));
        if (k < 1 || k > static_cast<int>(d->factors.size()))
            throw Error("factor index " + ref + " out of range in " + d->label);
        return k - 1;
    }
    std::string lab = ref;
    int occ = 1;
    auto hash = ref.find('#');
    if (hash != std::string::npos) {
        lab = ref.substr(0, hash);
        occ = std::stoi(ref.substr(hash + 1));
    }
    const Factor &f = d->factor(lab, occ);
    return static_cast<int>(&f - d->factors.data());
}

/* global vector from factor-local coordinates */
inline Vec embed(const Datum &d, const Factor &f, const Vec &local)
{
    if (static_cast<int>(local.size()) != f.ncoord)
        throw Error("expected " + std::to_string(f.ncoord) + " coordinates for " + f.label);
    Vec v = zeros(d->dim);
    for (int c = 0; c < f.ncoord; ++c)
        v[f.coord0 + c] = local[c];
    return v;
}

inline Weights from_local(const Datum &d, const Factor &f, const std::vector<Vec> &ws)
{
    Weights out;
    for (const auto &w : ws)
        add_to(out, embed(d, f, w), 1);
    return out;
}

/* the irreducible of a factor whose highest weight has the given local coordinates */
inline Weights local_irrep(const Datum &d, const Factor &f, const Vec &local)
{
    return weight_multiplicities(d, embed(d, f, local));
}

inline Vec fundamental(const Factor &f, int node)
{
    Vec v = zeros(f.ncoord);
    v.at(node) = 1;
    return v;
}

inline Weights std_rep(const Datum &d, const Factor &f)
{
    std::vector<Vec> ws;
    int N = f.ncoord;
    auto u = [&](int i) { return unit(N, i); };
    switch (f.kind) {
    case Kind::GL:
    case Kind::Torus:
        for (int i = 0; i < N; ++i)
            ws.push_back(u(i));
        break;
    case Kind::SL:
    case Kind::PGL:
    case Kind::G2:
    case Kind::PGSO:
        return local_irrep(d, f, fundamental(f, 0));
    case Kind::E:
    case Kind::GE:
        return local_irrep(d, f, fundamental(f, f.n == 7 ? 6 : 0));
    case Kind::Sp:
    case Kind::SO:
    case Kind::Spin:
        for (int i = 0; i < N; ++i) {
            ws.push_back(u(i));
            ws.push_back(-u(i));
        }
        if (f.kind != Kind::Sp && f.n % 2)
            ws.push_back(zeros(N));
        break;
    case Kind::GSp:
    case Kind::GSO:
        for (int i = 1; i < N; ++i) {
            ws.push_back(u(i));
            ws.push_back(u(0) - u(i));
        }
        break;
    case Kind::GSpin:
        for (int i = 1; i < N; ++i) {
            ws.push_back(u(i));
            ws.push_back(-u(i));
        }
        if (f.n % 2)
            ws.push_back(zeros(N));
        break;
    }
    return from_local(d, f, ws);
}

/* parity: 0 both half-spins, +1 / -1 a single half-spin */
inline Weights spin_rep(const Datum &d, const Factor &f, int parity)
{
    bool even = f.series == 'D';
    if (!even && parity != 0)
        throw Error("half-spin representation requested for odd orthogonal factor " + f.label);
    if (f.kind == Kind::PGSO) {
        int n = f.rank;
        Weights w;
        if (parity >= 0)
            w = merge(w, local_irrep(d, f, fundamental(f, n - 1)));
        if (parity <= 0)
            w = merge(w, local_irrep(d, f, fundamental(f, n - 2)));
        return w;
    }
    std::vector<Vec> ws;
    if (f.kind == Kind::SO || f.kind == Kind::Spin) {
        int n = f.ncoord;
        for (int mask = 0; mask < (1 << n); ++mask) {
            Vec v(n, Q(1, 2));
            int minus = 0;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) {
                    v[i] = Q(-1, 2);
                    ++minus;
                }
            if (even && parity == 1 && minus % 2)
                continue;
            if (even && parity == -1 && minus % 2 == 0)
                continue;
            ws.push_back(v);
        }
    } else if (f.kind == Kind::GSpin) {
        int n = f.ncoord - 1;
        for (int mask = 0; mask < (1 << n); ++mask) {
            Vec v = zeros(n + 1);
            v[0] = 1;
            int zero = 0;
            for (int i = 0; i < n; ++i) {
                if (mask >> i & 1)
                    v[i + 1] = 1;
                else
                    ++zero;
            }
            if (even && parity == 1 && zero % 2)
                continue;
            if (even && parity == -1 && zero % 2 == 0)
                continue;
            ws.push_back(v);
        }
    } else
        throw Error("no spin representation for " + f.label);
    return from_local(d, f, ws);
}

/* k-th exterior or symmetric power (k >= 1) of a weight list with multiplicities */
inline Weights power(const Weights &w, int k, bool exterior)
{
    std::vector<Vec> list;
    for (const auto &[v, m] : w)
        for (long long i = 0; i < m; ++i)
            list.push_back(v);
    Weights out;
    if (k <= 0)
        return out;
    std::size_t dim = list.empty() ? 0 : list[0].size();
    std::function<void(std::size_t, int, Vec)> rec = [&](std::size_t start, int left, Vec acc) {
        if (left == 0) {
            add_to(out, acc, 1);
            return;
        }
        for (std::size_t i = start; i < list.size(); ++i)
            rec(exterior ? i + 1 : i, left - 1, acc + list[i]);
    };
    rec(0, k, zeros(dim));
    return out;
}

inline Weights adjoint_rep(const Datum &d, const Factor &f)
{
    Weights out;
    for (std::size_t r = 0; r < d->pos.size(); ++r) {
        bool inside = true;
        for (int c = 0; c < d->dim; ++c)
            if (d->pos[r][c] != 0 && (c < f.coord0 || c >= f.coord0 + f.ncoord))
                inside = false;
        if (inside) {
            add_to(out, d->pos[r], 1);
            add_to(out, -d->pos[r], 1);
        }
    }
    add_to(out, zeros(d->dim), f.ncoord);
    return out;
}

inline Weights central_char(const Datum &d, const Factor &f, const std::string &name)
{
    int N = f.ncoord;
    Vec v = zeros(N);
    if (name == "det") {
        if (f.kind != Kind::GL && f.kind != Kind::Torus)
            throw Error("det is defined for GL factors, not " + f.label);
        for (auto &x : v)
            x = 1;
    } else {
        if (f.kind == Kind::GSp || f.kind == Kind::GSO)
            v[0] = 1;
        else if (f.kind == Kind::GSpin) {
            v[0] = 2;
            for (int i = 1; i < N; ++i)
                v[i] = 1;
        } else
            throw Error("sim is defined for similitude factors, not " + f.label);
    }
    return Weights{{embed(d, f, v), 1}};
}

inline Vec parse_labels(const std::string &s)
{
    Vec v;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) {
        auto slash = tok.find('/');
        if (slash == std::string::npos)
            v.push_back(Q(std::stoll(tok)));
        else
            v.push_back(Q(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1))));
    }
    return v;
}

} // namespace detail

/* Named representation of one factor, as a weight multiset on the whole datum. */
inline Weights named_rep(const Datum &d, const std::string &name, const std::string &fref)
{
    const Factor &f = d->factors.at(detail::factor_index(d, fref));
    std::smatch m;
    static const std::regex power_re(R"(^(wedge|wedge0|Sym)_(\d+)$)");
    static const std::regex hw_re(R"(^V\[([-0-9/,]*)\]$)");
    if (name == "std" || name == "Std")
        return detail::std_rep(d, f);
    if (name == "Spin")
        return detail::spin_rep(d, f, 0);
    if (name == "HSpin" || name == "HSpin+")
        return detail::spin_rep(d, f, 1);
    if (name == "HSpin-")
        return detail::spin_rep(d, f, -1);
    if (name == "Ad")
        return detail::adjoint_rep(d, f);
    if (name == "det" || name == "sim")
        return detail::central_char(d, f, name);
    if (name == "triv")
        return Weights{{zeros(d->dim), 1}};
    if (std::regex_match(name, m, power_re)) {
        int k = std::stoi(m[2]);
        Weights s = detail::std_rep(d, f);
        auto pw = [&](int j) {
            if (j < 0)
                return Weights{};
            if (j == 0)
                return Weights{{zeros(d->dim), 1}};
            return detail::power(s, j, m[1] != "Sym");
        };
        if (m[1] == "wedge0") {
            Weights out = pw(k);
            for (const auto &[v, c] : pw(k - 2))
                add_to(out, v, -c);
            return out;
        }
        return pw(k);
    }
    if (std::regex_match(name, m, hw_re))
        return detail::local_irrep(d, f, detail::parse_labels(m[1]));
    throw Error("unknown representation name '" + name + "'");
}

/* Parser for representation expressions:
     sum    := term ( "(+)" term )*
     term   := factor ( "(x)" factor )*
     factor := "T(" sum ")" | name "(" fref ")" | "(" sum ")" | integer "*" factor | "0" | "1"  */
class RepParser {
public:
    RepParser(Datum d, std::string text) : d_(std::move(d)), s_(normalize(text)) {}

    Weights parse()
    {
        skip();
        if (pos_ == s_.size())
            return {};
        Weights w = sum();
        skip();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
        return w;
    }

private:
    Datum d_;
    std::string s_;
    std::size_t pos_ = 0;

    static std::string normalize(const std::string &t)
    {
        std::string out;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t.compare(i, 3, "\xE2\x8A\x95") == 0) { /* circled plus */
                out += "(+)";
                i += 2;
            } else if (t.compare(i, 3, "\xE2\x8A\x97") == 0) { /* circled times */
                out += "(x)";
                i += 2;
            } else
                out += t[i];
        }
        return out;
    }

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw Error("rep spec '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool eat(const std::string &tok)
    {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Weights sum()
    {
        Weights w = term();
        while (eat("(+)"))
            w = merge(w, term());
        return w;
    }

    Weights term()
    {
        Weights w = factor();
        while (eat("(x)"))
            w = convolve(w, factor());
        return w;
    }

    std::string word()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != '*' &&
               !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            if (s_[pos_] == '[') {
                auto close = s_.find(']', pos_);
                if (close == std::string::npos)
                    fail("unterminated '['");
                pos_ = close + 1;
                continue;
            }
            ++pos_;
        }
        return s_.substr(start, pos_ - start);
    }

    Weights factor()
    {
        skip();
        if (s_.compare(pos_, 3, "(+)") == 0 || s_.compare(pos_, 3, "(x)") == 0)
            fail("missing operand");
        if (eat("(")) {
            Weights w = sum();
            if (!eat(")"))
                fail("expected ')'");
            return w;
        }
        std::string w = word();
        if (w.empty())
            fail("expected a representation");
        if (w == "T") {
            if (!eat("("))
                fail("expected '(' after T");
            Weights x = sum();
            if (!eat(")"))
                fail("expected ')'");
            return merge(x, negate(x));
        }
        if (std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            long long n = std::stoll(w);
            if (eat("*")) {
                Weights x = factor();
                Weights out;
                for (const auto &[v, m] : x)
                    add_to(out, v, n * m);
                return out;
            }
            if (n == 0)
                return {};
            if (n == 1)
                return Weights{{zeros(d_->dim), 1}};
            fail("bare integer other than 0 or 1");
        }
        if (!eat("("))
            fail("expected '(' after '" + w + "'");
        skip();
        std::size_t close = s_.find(')', pos_);
        if (close == std::string::npos)
            fail("expected ')'");
        std::string ref = s_.substr(pos_, close - pos_);
        while (!ref.empty() && std::isspace(static_cast<unsigned char>(ref.back())))
            ref.pop_back();
        pos_ = close + 1;
        return named_rep(d_, w, ref);
    }
};

inline Weights parse_rep_weights(const Datum &d, const std::string &text)
{
    return RepParser(d, text).parse();
}

inline RepSum parse_rep(const Datum &d, const std::string &text)
{
    return decompose_weight_multiset(d, parse_rep_weights(d, text));
}

} // namespace stq

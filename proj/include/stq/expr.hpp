#pragma once

#include "lattice.hpp"

#include <cctype>
#include <map>
#include <string>

namespace stq {

using Params = std::map<std::string, long long>;

/* Integer arithmetic on family parameters: + - * / (exact), parentheses,
   implicit multiplication ("2m", "2(n+1)"). */
class IntExpr {
public:
    IntExpr(std::string text, const Params &p) : s_(std::move(text)), p_(p) {}

    long long eval()
    {
        long long v = sum();
        skip();
        if (i_ != s_.size())
            fail("unexpected trailing input");
        return v;
    }

private:
    std::string s_;
    const Params &p_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string &m) const { throw Error("expression '" + s_ + "': " + m); }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    char peek()
    {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    long long sum()
    {
        long long v = product();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++i_;
            long long r = product();
            v = c == '+' ? v + r : v - r;
        }
        return v;
    }

    long long product()
    {
        long long v = unary();
        while (true) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++i_;
                long long r = unary();
                if (c == '*')
                    v *= r;
                else {
                    if (r == 0 || v % r)
                        fail("inexact division");
                    v /= r;
                }
            } else if (c == '(' || std::isalpha(static_cast<unsigned char>(c)) ||
                       std::isdigit(static_cast<unsigned char>(c))) {
                v *= unary();
            } else
                return v;
        }
    }

    long long unary()
    {
        char c = peek();
        if (c == '-') {
            ++i_;
            return -unary();
        }
        if (c == '(') {
            ++i_;
            long long v = sum();
            if (peek() != ')')
                fail("expected ')'");
            ++i_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long v = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                v = v * 10 + (s_[i_++] - '0');
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            /* single-letter parameter names so that "mn" reads as m*n */
            std::string name(1, s_[i_++]);
            auto it = p_.find(name);
            if (it == p_.end())
                fail("unknown parameter '" + name + "'");
            return it->second;
        }
        fail("expected a number or parameter");
    }
};

inline long long eval_int(const std::string &text, const Params &p) { return IntExpr(text, p).eval(); }

/* Replace every {expr} in a template string by its integer value. */
inline std::string substitute(const std::string &tmpl, const Params &p)
{
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        auto open = tmpl.find('{', i);
        if (open == std::string::npos) {
            out += tmpl.substr(i);
            break;
        }
        auto close = tmpl.find('}', open);
        if (close == std::string::npos)
            throw Error("unterminated '{' in '" + tmpl + "'");
        out += tmpl.substr(i, open - i);
        out += std::to_string(eval_int(tmpl.substr(open + 1, close - open - 1), p));
        i = close + 1;
    }
    return out;
}

} // namespace stq

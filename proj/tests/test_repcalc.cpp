#include <catch_amalgamated.hpp>

#include <stq/repcalc.hpp>

using namespace stq;

namespace {

Vec half(int n, int minus = 0)
{
    Vec v(n, Q(1, 2));
    for (int i = 0; i < minus; ++i)
        v[n - 1 - i] = Q(-1, 2);
    return v;
}

/* binomial via Pascal's triangle */
long long binom(int n, int k)
{
    std::vector<std::vector<long long>> t(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        t[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t[n][k];
}

} // namespace

TEST_CASE("dimensions of small representations")
{
    CHECK(weyl_dim(make_datum("E7"), unit(7, 6)) == 56);
    CHECK(weyl_dim(make_datum("E6"), unit(6, 0)) == 27);
    CHECK(weyl_dim(make_datum("G2"), unit(2, 0)) == 7);
    CHECK(weyl_dim(make_datum("Spin7"), half(3)) == 8);
    CHECK(weyl_dim(make_datum("Spin12"), half(6)) == 32);
    CHECK(weyl_dim(make_datum("Spin11"), half(5)) == 32);
    CHECK(weyl_dim(make_datum("Sp6"), Vec{1, 1, 1}) == 14);
    CHECK(weyl_dim(make_datum("GL6"), Vec{1, 1, 1, 0, 0, 0}) == 20);
}

TEST_CASE("Freudenthal weight counts agree with the Weyl dimension")
{
    struct Row {
        std::string g;
        Vec hw;
    };
    std::vector<Row> rows = {
        {"E7", unit(7, 6)},        {"E7", unit(7, 0)},        {"E6", unit(6, 0)},
        {"E6", unit(6, 1)},        {"G2", unit(2, 0)},        {"G2", unit(2, 1)},
        {"Spin7", half(3)},        {"Spin12", half(6)},       {"Spin12", half(6, 1)},
        {"Sp6", Vec{1, 1, 1}},     {"Sp6", Vec{2, 0, 0}},     {"SO9", Vec{1, 1, 0, 0}},
        {"GSp4", Vec{1, 1, 0}},    {"GSpin7", Vec{1, 1, 1, 1}}, {"GL4", Vec{2, 1, 0, -1}},
    };
    for (const auto &r : rows) {
        INFO(r.g << " " << str(r.hw));
        auto d = make_datum(r.g);
        auto w = weight_multiplicities(d, r.hw);
        CHECK(total(w) == weyl_dim(d, r.hw));
        CHECK(is_weyl_invariant(d, w));
    }
}

TEST_CASE("zero weight multiplicities")
{
    auto a2 = make_datum("SL3");
    auto w = weight_multiplicities(a2, Vec{1, 1});
    CHECK(w.at(Vec{0, 0}) == 2);
    /* adjoint of E7 has zero weight of multiplicity rank 7 */
    auto e7 = make_datum("E7");
    auto ad = weight_multiplicities(e7, unit(7, 0));
    CHECK(total(ad) == 133);
    CHECK(ad.at(zeros(7)) == 7);
    /* wedge^3 of std Sp6 has e_1 twice; the primitive part keeps one */
    auto sp6 = make_datum("Sp6");
    auto w3 = weight_multiplicities(sp6, Vec{1, 1, 1});
    CHECK(w3.at(Vec{1, 0, 0}) == 1);
}

TEST_CASE("tensor products: Klimyk against peeling")
{
    auto d = make_datum("Spin7");
    auto s = half(3);
    auto k = tensor_decompose({d, s}, {d, s});
    std::map<Vec, long long> expect = {
        {Vec{0, 0, 0}, 1}, {Vec{1, 0, 0}, 1}, {Vec{1, 1, 0}, 1}, {Vec{1, 1, 1}, 1}};
    CHECK(k.parts == expect);
    auto w = weight_multiplicities(d, s);
    auto p = decompose_weight_multiset(d, convolve(w, w));
    CHECK(p.parts == expect);
    CHECK(k.dim() == 64);

    auto e7 = make_datum("E7");
    CHECK_THROWS_AS(tensor_decompose({e7, unit(7, 6)}, {e7, unit(7, 6)}), Error);
}

TEST_CASE("exterior powers of GL_n decompose as a single irreducible")
{
    auto d = make_datum("GL6");
    Weights std6;
    for (int i = 0; i < 6; ++i)
        std6[unit(6, i)] = 1;
    /* wedge^3 by subsets */
    Weights w3;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c)
                add_to(w3, unit(6, a) + unit(6, b) + unit(6, c), 1);
    auto r = decompose_weight_multiset(d, w3);
    REQUIRE(r.parts.size() == 1);
    CHECK(r.parts.begin()->first == Vec{1, 1, 1, 0, 0, 0});
    CHECK(r.dim() == binom(6, 3));
}

TEST_CASE("decomposition rejects non-characters")
{
    auto d = make_datum("SL2");
    CHECK_THROWS_AS(decompose_weight_multiset(d, Weights{{Vec{1}, 1}}), Error);
    /* invariant but virtual: (2) + (-2) - (0) */
    CHECK_THROWS_AS(decompose_weight_multiset(d, Weights{{Vec{2}, 1}, {Vec{-2}, 1}, {Vec{0}, -1}}),
                    Error);
}

TEST_CASE("Frobenius-Schur indicator agrees with the Sym/Alt oracle")
{
    struct Row {
        std::string g;
        Vec hw;
        int expect;
    };
    std::vector<Row> rows = {
        {"E7", unit(7, 6), -1},      {"E6", unit(6, 0), 0},        {"G2", unit(2, 0), 1},
        {"Spin7", half(3), 1},       {"Spin11", half(5), -1},      {"Spin12", half(6), -1},
        {"Spin10", half(5), 0},      {"Sp6", Vec{1, 1, 1}, -1},    {"Sp4", Vec{1, 0}, -1},
        {"SO8", Vec{1, 0, 0, 0}, 1}, {"SL2", Vec{3}, -1},          {"SL2", Vec{2}, 1},
        {"GL2", Vec{1, 0}, 0},       {"SL3", Vec{1, 0}, 0},        {"SL3", Vec{1, 1}, 1},
        {"Spin8", half(4), 1},       {"SL4", Vec{0, 1, 0}, 1},     {"SL6", Vec{0, 0, 1, 0, 0}, -1},
    };
    for (const auto &r : rows) {
        INFO(r.g << " " << str(r.hw));
        auto d = make_datum(r.g);
        CHECK(fs_indicator(d, r.hw) == r.expect);
        CHECK(fs_oracle(d, r.hw) == r.expect);
    }
}

TEST_CASE("dual irreps")
{
    auto e6 = make_datum("E6");
    auto du = dual_irrep({e6, unit(6, 0)});
    CHECK(du.hw == unit(6, 5));
    auto gl3 = make_datum("GL3");
    CHECK(dual_irrep({gl3, Vec{1, 0, 0}}).hw == Vec{0, 0, -1});
}

TEST_CASE("symplectic predicate on labels")
{
    auto sp4 = make_datum("Sp4");
    RepSum r{sp4, {{Vec{1, 0}, 1}}};
    CHECK(symplectic(r));
    RepSum o{sp4, {{Vec{1, 1}, 1}}};
    CHECK_FALSE(symplectic(o));
    o.parts[Vec{1, 1}] = 2;
    CHECK(symplectic(o));
    auto gl3 = make_datum("GL3");
    RepSum t{gl3, {{Vec{1, 0, 0}, 1}}};
    CHECK_FALSE(symplectic(t));
    t.parts[Vec{0, 0, -1}] = 1;
    CHECK(symplectic(t));
}

TEST_CASE("anomaly proxy")
{
    auto sl2 = make_datum("SL2");
    auto std2 = weight_multiplicities(sl2, Vec{1});
    CHECK_FALSE(anomaly_proxy(sl2, std2));
    CHECK(anomaly_proxy(sl2, merge(std2, std2)));
    auto sp6 = make_datum("Sp6");
    auto w14 = weight_multiplicities(sp6, Vec{1, 1, 1});
    auto w6 = weight_multiplicities(sp6, Vec{1, 0, 0});
    CHECK_FALSE(anomaly_proxy(sp6, w14));
    CHECK_FALSE(anomaly_proxy(sp6, w6));
    CHECK(anomaly_proxy(sp6, merge(w14, w6)));
}

TEST_CASE("restriction along a torus map")
{
    auto gl2 = make_datum("GL2");
    auto gl2sq = make_datum("GL2 x GL2");
    TorusMap diag{gl2, gl2sq, {Vec{1, 0, 1, 0}, Vec{0, 1, 0, 1}}};
    Weights w = weight_multiplicities(gl2sq, Vec{1, 0, 1, 0});
    auto r = decompose_weight_multiset(gl2, restrict_along(diag, w));
    std::map<Vec, long long> expect = {{Vec{2, 0}, 1}, {Vec{1, 1}, 1}};
    CHECK(r.parts == expect);
}

#include <catch_amalgamated.hpp>

#include <stq/quadruple.hpp>
#include <stq/repspec.hpp>

using namespace stq;

namespace {

Quadruple gross_prasad_so5_so4()
{
    auto G = make_datum("SO5 x SO4");
    auto H = make_datum("SO4");
    TorusMap emb{H, G, {Vec{1, 0, 1, 0}, Vec{0, 1, 0, 1}}};
    return {G, H, emb, RepSum{H, {}}, {}};
}

Quadruple trilinear()
{
    auto G = make_datum("GL2 x GL2 x GL2");
    auto H = make_datum("GL2");
    TorusMap emb{H, G, {Vec{1, 0, 1, 0, 1, 0}, Vec{0, 1, 0, 1, 0, 1}}};
    return {G, H, emb, RepSum{H, {}}, {}};
}

Quadruple ginzburg_rallis()
{
    auto G = make_datum("GL6");
    auto H = make_datum("GL2");
    TorusMap emb{H, G, {Vec{1, 1, 1, 0, 0, 0}, Vec{0, 0, 0, 1, 1, 1}}};
    return {G, H, emb, RepSum{H, {}}, {0, 1, 3, 4}};
}

Quadruple gsp10()
{
    auto G = make_datum("GSp10");
    auto H = make_datum("GL2");
    TorusMap emb{H, G, {Vec{1, 1, 1, 1, 1, 1}, Vec{1, 0, 0, 0, 0, 0}}};
    return {G, H, emb, RepSum{H, {}}, {0, 1, 2, 3}};
}

} // namespace

TEST_CASE("canonical forms identify permuted and twisted label data")
{
    auto d = make_datum("SL2 x SL3 x SL2");
    /* labels are indexed by global simple roots: A1 | A2 | A1 */
    Canon a = canonical_form(d, {{{1, 1, 0, 0}, {0, 0, 0, 2}}});
    Canon b = canonical_form(d, {{{0, 0, 1, 1}, {2, 0, 0, 0}}});
    CHECK(a == b);
    Canon c = canonical_form(d, {{{1, 1, 0, 1}, {0, 0, 0, 2}}});
    CHECK(a != c);
    auto e6 = make_datum("E6");
    CHECK(canonical_form(e6, {{{1, 0, 0, 0, 0, 0}}}) == canonical_form(e6, {{{0, 0, 0, 0, 0, 1}}}));
    auto d4 = make_datum("Spin8");
    CHECK(canonical_form(d4, {{{1, 0, 0, 0}}}) == canonical_form(d4, {{{0, 0, 0, 1}}}));
    CHECK(canonical_form(d4, {{{1, 0, 0, 0}}}) != canonical_form(d4, {{{0, 1, 0, 0}}}));
}

TEST_CASE("validation of a reductive row")
{
    auto q = gross_prasad_so5_so4();
    auto Ghat = make_datum("Sp4 x SO4");
    RepSum rh = parse_rep(Ghat, "std(Sp4)(x)std(SO4)");
    auto v = validate(q, &rh);
    for (const auto &c : v.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.ok);
    }
}

TEST_CASE("validation failures")
{
    auto G = make_datum("GL3");
    auto H = make_datum("GL3");
    Quadruple q{G, H, TorusMap::identity(G), parse_rep(H, "std(GL3)"), {}};
    q.emb.src = H;
    auto v = validate(q);
    CHECK_FALSE(v.find("symplectic")->ok);
    CHECK(v.find("containment")->ok);

    auto g = ginzburg_rallis();
    g.emb.image[0] = Vec{1, 1, 0, 0, 0, 0};
    g.emb.image[1] = Vec{0, 0, 1, 1, 1, 1};
    auto w = validate(g);
    CHECK_FALSE(w.find("containment")->ok);
    CHECK_THROWS_AS(delta_red(g), Error);
}

TEST_CASE("reduction to the trilinear model")
{
    auto tri = normal_form(trilinear());
    auto r1 = delta_red_full(ginzburg_rallis());
    CHECK(normal_form(r1.red) == tri);
    auto r2 = delta_red_full(gsp10());
    CHECK(normal_form(r2.red) == tri);
    CHECK(ss_types(r2.red.G) == parse_types("A1^3"));
    /* idempotent */
    CHECK(normal_form(delta_red(r2.red)) == tri);
    auto gp = gross_prasad_so5_so4();
    CHECK(normal_form(delta_red(gp)) == normal_form(gp));
    CHECK(normal_form(gp) != tri);
}

TEST_CASE("Whittaker induction")
{
    auto gl4 = make_datum("GL4");
    auto [m, incl] = levi_subdatum(gl4, {0, 1});
    RepSum s{m, {{Vec{1, 0, 0, 0}, 1}}};
    CHECK(whittaker_induce(s, gl4).parts == s.parts);
    RepSum t{m, {{Vec{0, 0, 0, 1}, 1}}};
    CHECK(whittaker_induce(t, gl4).parts == std::map<Vec, long long>{{Vec{1, 0, 0, 0}, 1}});
    RepSum id{gl4, {{Vec{1, 1, 0, 0}, 2}}};
    CHECK(whittaker_induce(id, gl4).parts == id.parts);
}

TEST_CASE("Whittaker compatibility: Spin11 from the triple product")
{
    auto Ghat = make_datum("GSpin11");
    RepSum rho_hat = parse_rep(Ghat, "Spin(GSpin11)");
    auto tri_hat = make_datum("GL2 x GL2 x GL2");
    RepSum red_hat = parse_rep(tri_hat, "std(#1)(x)std(#2)(x)std(#3)");
    auto r = delta_red_full(gsp10());
    auto res = check_whittaker_compatibility(rho_hat, r.J, red_hat);
    INFO(res.detail);
    CHECK(res.ok);

    /* wrong Levi */
    auto bad = check_whittaker_compatibility(rho_hat, {0, 1}, red_hat);
    CHECK_FALSE(bad.ok);
}

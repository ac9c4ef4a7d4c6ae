#include <catch_amalgamated.hpp>

#include <stq/grading.hpp>

using namespace stq;

namespace {

std::map<long long, long long> level_sizes(const AdjointGrading &g)
{
    std::map<long long, long long> s;
    for (const auto &[k, w] : g.levels)
        s[k] = total(w);
    return s;
}

long long conserved(const std::map<long long, RepSum> &rho)
{
    long long n = 0;
    for (const auto &[k, r] : rho)
        n += (k + 1) * r.dim();
    return n;
}

} // namespace

TEST_CASE("sl2 cocharacters")
{
    auto sl2 = make_datum("SL2");
    CHECK(sl2_cocharacter(sl2, {0}) == Vec{1});
    auto gl3 = make_datum("GL3");
    CHECK(sl2_cocharacter(gl3, {}) == zeros(3));
    CHECK(sl2_cocharacter(gl3, {0, 1}) == Vec{2, 0, -2});
}

TEST_CASE("adjoint gradings")
{
    auto sl2 = make_datum("SL2");
    CHECK(level_sizes(adjoint_grading(sl2, Vec{1})) == std::map<long long, long long>{{-2, 1}, {0, 1}, {2, 1}});

    /* explicit principal triple of gl3: h = diag(2,0,-2), eigenvalue of E_ij is h_i - h_j */
    auto gl3 = make_datum("GL3");
    Vec h{2, 0, -2};
    std::map<long long, long long> expect;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            ++expect[(h[i] - h[j]).numerator()];
    auto g = adjoint_grading(gl3, sl2_cocharacter(gl3, {0, 1}));
    CHECK(level_sizes(g) == expect);
    CHECK(g.size(4) - g.size(6) == 1);
    CHECK(g.size(2) - g.size(4) == 1);

    auto gsp6 = make_datum("GSp6");
    auto gg = adjoint_grading(gsp6, sl2_cocharacter(gsp6, {0, 1}));
    long long n = 0;
    for (const auto &[k, w] : gg.levels) {
        n += total(w);
        CHECK(gg.size(k) == gg.size(-k));
    }
    CHECK(n == 22);
    CHECK(adjoint_grading(gsp6, zeros(4)).levels.size() == 1);
}

TEST_CASE("principal SL2: a single string of length 3")
{
    auto sl2 = make_datum("SL2");
    auto t = make_datum("T1");
    Quadruple q{sl2, t, TorusMap{t, sl2, {zeros(1)}}, RepSum{t, {}}, {0}};
    auto rho = rho_k_decomposition(q);
    REQUIRE(rho.size() == 1);
    CHECK(rho.begin()->first == 2);
    CHECK(rho.begin()->second.dim() == 1);
}

TEST_CASE("GL6 with nilpotent of type A2xA2 and H = GL2")
{
    /* C^6 = C^3 (x) C^2: sl2 acts on C^3, GL2 on C^2; gl6 = (Sym^4 + Sym^2 + Sym^0) (x) gl2 */
    auto gl6 = make_datum("GL6");
    auto gl2 = make_datum("GL2");
    TorusMap emb{gl2, gl6, {Vec{1, 1, 1, 0, 0, 0}, Vec{0, 0, 0, 1, 1, 1}}};
    Quadruple q{gl6, gl2, emb, RepSum{gl2, {}}, {0, 1, 3, 4}};
    auto rho = rho_k_decomposition(q);
    std::map<Vec, long long> ad = {{Vec{1, -1}, 1}, {Vec{0, 0}, 1}};
    REQUIRE(rho.size() == 3);
    for (long long k : {0, 2, 4})
        CHECK(rho.at(k).parts == ad);
    CHECK(conserved(rho) == 36);
    CHECK(rho_H_iota(q).count() == 0);
    CHECK_FALSE(fourier_jacobi(rho));
}

TEST_CASE("GSp10 with nilpotent of type A4 and H = GL2")
{
    /* std = Sym^4 (x) C^2; T_H fixes the principal nilpotent of the GL5 Levi */
    auto g = make_datum("GSp10");
    auto h = make_datum("GL2");
    TorusMap emb{h, g, {Vec{1, 1, 1, 1, 1, 1}, Vec{1, 0, 0, 0, 0, 0}}};
    Quadruple q{g, h, emb, RepSum{h, {}}, {0, 1, 2, 3}};
    auto rho = rho_k_decomposition(q);
    CHECK(conserved(rho) == 56);
    CHECK_FALSE(fourier_jacobi(rho));
    CHECK(rho_H_iota(q).count() == 0);
    /* gsp10 = Sym^2(V4) (x) Sym^2(C^2) + Alt^2(V4) (x) Alt^2(C^2) + center,
       Sym^2 V4 = V8 + V4 + V0, Alt^2 V4 = V6 + V2 */
    std::map<Vec, long long> ad = {{Vec{1, -1}, 1}};
    std::map<Vec, long long> line = {{Vec{0, 0}, 1}};
    std::map<Vec, long long> ad_line = {{Vec{1, -1}, 1}, {Vec{0, 0}, 1}};
    CHECK(rho.at(8).parts == ad);
    CHECK(rho.at(6).parts == line);
    CHECK(rho.at(4).parts == ad);
    CHECK(rho.at(2).parts == line);
    CHECK(rho.at(0).parts == ad_line);
}

TEST_CASE("odd levels: Fourier-Jacobi type")
{
    /* Sp4 with nilpotent principal in the long-root A1: h = e2 coroot */
    auto sp4 = make_datum("Sp4");
    auto sl2 = make_datum("SL2");
    /* centralizer SL2 of the long root sl2 acts on the e1 coordinate */
    TorusMap emb{sl2, sp4, {Vec{1, 0}}};
    Quadruple q{sp4, sl2, emb, RepSum{sl2, {}}, {1}};
    auto rho = rho_k_decomposition(q);
    CHECK(conserved(rho) == 10);
    CHECK(fourier_jacobi(rho));
    CHECK(rho.at(1).parts == std::map<Vec, long long>{{Vec{1}, 1}});
    CHECK(symplectic(rho_H_iota(q)));
}

TEST_CASE("rho_k rejects an inconsistent embedding")
{
    auto gl6 = make_datum("GL6");
    auto gl2 = make_datum("GL2");
    TorusMap bad{gl2, gl6, {Vec{1, 1, 1, 1, 0, 0}, Vec{0, 0, 0, 0, 1, 1}}};
    Quadruple q{gl6, gl2, bad, RepSum{gl2, {}}, {0, 1, 3, 4}};
    CHECK_THROWS_AS(rho_k_decomposition(q), Error);
}

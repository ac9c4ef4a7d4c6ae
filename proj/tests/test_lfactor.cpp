#include <catch_amalgamated.hpp>

#include <stq/lfactor.hpp>

#include <chrono>

using namespace stq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool close(cplx a, cplx b, double rel = 1e-12) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("small L-factors by hand")
{
    auto d = make_datum("GL2 x GL3");
    std::mt19937_64 rng(7);
    SatakeParameter c = random_tempered(d, 5, rng);
    auto z = c.coordinates();
    cplx s(0.5, 0.3);
    cplx qs = std::pow(cplx(5), -s);

    CHECK(close(lfactor(parse_rep(d, "1"), c, s).value, 1.0 / (1.0 - qs)));

    cplx want = 1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            want /= 1.0 - z[i] * z[2 + j] * qs;
    LFactorValue v = lfactor(parse_rep(d, "std(#1) (x) std(#2)"), c, s);
    CHECK(close(v.value, want));
    CHECK(v.factors.size() == 6);

    CHECK(lfactor(parse_rep(d, "0"), c, s).value == cplx(1));

    /* a pole is reported, not regularized */
    SatakeParameter p = SatakeParameter::from_coordinates(make_datum("GL1"), {cplx(4)}, 4);
    CHECK_THROWS_WITH(lfactor(parse_rep(p.d, "std(#1)"), p, 1.0), Catch::Matchers::ContainsSubstring("pole"));
    CHECK_THROWS_AS(SatakeParameter::from_coordinates(p.d, {cplx(0)}, 4), Error);
    CHECK_THROWS_AS(SatakeParameter::from_coordinates(p.d, {cplx(1)}, 1), Error);
    CHECK_FALSE(p.tempered);
}

TEST_CASE("half-integral weights")
{
    auto d = make_datum("Spin5");
    std::mt19937_64 rng(3);
    SatakeParameter c = random_tempered(d, 3, rng);
    /* spin is 4-dimensional and its weights are (+-1/2, +-1/2) */
    LFactorValue v = lfactor(parse_rep(d, "Spin(#1)"), c, 0.5);
    CHECK(v.factors.size() == 4);
    for (const auto &[ev, m] : v.factors)
        CHECK_THAT(std::abs(ev), WithinAbs(1, 1e-14));
}

TEST_CASE("tempered bound")
{
    auto d = make_datum("Sp6");
    std::mt19937_64 rng(11);
    RepSum r = parse_rep(d, "wedge0_3(#1)");
    for (int k = 0; k < 20; ++k) {
        SatakeParameter c = random_tempered(d, 7, rng);
        double s = 1.5;
        CHECK(std::abs(lfactor(r, c, s).value) <= std::pow(1 - std::pow(7.0, -s), -14.0) * (1 + 1e-12));
    }
}

TEST_CASE("multiplicativity and Weyl invariance on shipped reps")
{
    Corpus corpus = load_corpus(default_corpus_dir());
    std::mt19937_64 rng(2024);
    int reps = 0;
    for (const auto &e : corpus.entries)
        for (const auto &in : instantiate_all(e)) {
            if (in.rho_hat.dim() > 100)
                continue;
            ++reps;
            const Datum &D = in.Ghat;
            std::uniform_int_distribution<int> letter(0, std::max(0, D->rank() - 1));
            for (int k = 0; k < 5; ++k) {
                SatakeParameter c = random_tempered(D, 3, rng);
                cplx whole = lfactor(in.rho_hat, c, 0.5).value;
                cplx parts = 1;
                for (const auto &[hw, m] : in.rho_hat.parts)
                    parts *= std::pow(lfactor(RepSum{D, {{hw, 1}}}, c, 0.5).value, static_cast<double>(m));
                INFO(in.label());
                CHECK(close(whole, parts));
                if (D->rank() == 0)
                    continue;
                WeylElement w;
                for (int i = 0; i < 12; ++i)
                    w.word.push_back(letter(rng));
                CHECK(close(lfactor(in.rho_hat, weyl_act(c, w), 0.5).value, whole));
            }
        }
    CHECK(reps > 50);
}

TEST_CASE("partial L-series")
{
    auto d = make_datum("GL2");
    std::mt19937_64 rng(5);
    RepSum r = parse_rep(d, "std(#1)");
    auto a = random_tempered(d, 2, rng), b = random_tempered(d, 3, rng);
    CHECK(lseries_partial(r, {}, 1.0) == cplx(1));
    CHECK(close(lseries_partial(r, {a}, 1.0), lfactor(r, a, 1.0).value));
    CHECK(close(lseries_partial(r, {a, b}, 1.0), lfactor(r, a, 1.0).value * lfactor(r, b, 1.0).value));
    CHECK(close(lseries_partial(r, {a, b}, 1.0), lseries_partial(r, {b, a}, 1.0)));
}

TEST_CASE("right-hand side of the period conjecture")
{
    Corpus corpus = load_corpus(default_corpus_dir());
    const CorpusEntry *gp = nullptr;
    for (const auto &e : corpus.entries)
        if (e.period == "Gross-Prasad")
            gp = &e;
    REQUIRE(gp);
    std::mt19937_64 rng(9);
    for (const auto &in : instantiate_all(*gp))
        for (int k = 0; k < 10; ++k) {
            SatakeParameter c = random_tempered(in.Ghat, 5, rng);
            cplx v = conjecture_rhs(in, c);
            CHECK(std::isfinite(v.real()));
            CHECK_THAT(v.imag(), WithinAbs(0, 1e-9 * std::abs(v)));
            CHECK(v.real() > 0);
        }

    /* Ad against itself */
    auto d = make_datum("GL3");
    SatakeParameter c = random_tempered(d, 5, rng);
    RepSum ad = parse_rep(d, "Ad(#1)");
    Instance in;
    in.Ghat = d;
    in.rho_hat = ad;
    CHECK(close(conjecture_rhs(in, c), lfactor(ad, c, 0.5).value / lfactor(ad, c, 1.0).value));
    LTerm shift{parse_rep(d, "std(#1)"), 2.0};
    CHECK(close(conjecture_rhs(in, c, {shift}), conjecture_rhs(in, c) * lfactor(shift.rho, c, 2.0).value));
}

TEST_CASE("Cauchy identity")
{
    SECTION("one variable")
    {
        for (int n : {0, 1, 5, 12}) {
            CauchyResult r = cauchy_oracle({0.4}, {0.5}, n);
            long double want = 0;
            for (int k = 0; k <= n; ++k)
                want += std::pow(0.2L, k);
            CHECK_THAT(static_cast<double>(r.lhs), WithinRel(static_cast<double>(want), 1e-15));
            CHECK_THAT(static_cast<double>(r.rhs), WithinRel(1 / 0.8, 1e-15));
        }
    }
    SECTION("empty alphabet")
    {
        CauchyResult r = cauchy_oracle({0.3}, {}, 10);
        CHECK(r.lhs == 1);
        CHECK(r.rhs == 1);
        CHECK(r.error == 0);
    }
    SECTION("two variables, cutoff 20")
    {
        auto t0 = std::chrono::steady_clock::now();
        CauchyResult r = cauchy_oracle({0.3, 0.2}, {0.3, 0.2}, 20);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(r.error < 1e-9);
        /* C(24,3) 0.09^21 / (1 - 0.09 * 25/22), worked out by hand */
        CHECK_THAT(static_cast<double>(r.tail_bound), WithinRel(2.467e-19, 1e-3));
        CHECK(secs < 1);
        long double prev = INFINITY;
        for (int n : {5, 10, 15, 20}) {
            CauchyResult e = cauchy_oracle({0.3, 0.2}, {0.3, 0.2}, n);
            CHECK(e.error <= prev);
            CHECK(e.error <= e.tail_bound + 1e-17L);
            prev = e.error;
        }
    }
    SECTION("Schur polynomials against the bialternant")
    {
        std::vector<long double> x{0.7L, 0.3L};
        auto h = detail::complete_homogeneous(x, 6);
        auto bialt = [&](int a, int b) {
            return (std::pow(x[0], a + 1) * std::pow(x[1], b) - std::pow(x[1], a + 1) * std::pow(x[0], b)) / (x[0] - x[1]);
        };
        CHECK_THAT(static_cast<double>(detail::schur({3, 1}, h)), WithinRel(static_cast<double>(bialt(3, 1)), 1e-14));
        CHECK_THAT(static_cast<double>(detail::schur({2, 2}, h)), WithinRel(static_cast<double>(bialt(2, 2)), 1e-14));
    }
    CHECK_THROWS_AS(cauchy_oracle({1.5}, {0.9}, 5), Error);
}

#include <catch_amalgamated.hpp>

#include <stq/stq.hpp>

using namespace stq;

namespace {

const Corpus &shipped()
{
    static const Corpus c = load_corpus(default_corpus_dir());
    return c;
}

} // namespace

TEST_CASE("shipped corpus has every table")
{
    const Corpus &c = shipped();
    CHECK(c.entries.size() == 75);
    std::map<std::string, int> rows;
    for (const auto &e : c.entries)
        ++rows[e.table];
    CHECK(rows == std::map<std::string, int>{
                      {"red1", 26}, {"red2", 9}, {"nonred1", 9}, {"nonred1x", 13}, {"nonred2", 5}, {"nonred2x", 13}});
    CHECK(c.excluded.size() == 4);
    for (const auto &x : c.excluded)
        CHECK_FALSE(x.reason.empty());
    for (const auto &e : c.entries)
        if (!reductive_table(e.table)) {
            INFO(e.id());
            CHECK_FALSE(e.reduces_to.empty());
        }
}

TEST_CASE("shipped tables round trip")
{
    for (const auto &t : table_ids()) {
        Corpus once;
        load_table_text(once, read_file(default_corpus_dir() / (t + ".json")), t);
        Corpus twice;
        load_table_text(twice, table_json(once, t).dump(2), t);
        INFO(t);
        CHECK(twice.entries == once.entries);
    }
}

TEST_CASE("structural checks pass on the shipped corpus")
{
    Report r = verify_corpus(shipped(), {"integrality", "containment", "symplectic", "anomaly", "type-duality", "grading", "fs"});
    for (const auto &e : r.entries)
        for (const auto &ch : e.checks) {
            INFO(e.id << " " << ch.name << ": " << ch.detail);
            CHECK(ch.ok);
        }
    CHECK(r.passed() == 75);
}

TEST_CASE("reductions of the shipped corpus")
{
    Report r = verify_corpus(shipped(), {"delta-red"});
    for (const auto &e : r.entries) {
        INFO(e.id << ": " << e.checks.at(0).detail);
        CHECK(e.ok());
    }
}

TEST_CASE("a mutated nilpotent is caught")
{
    Corpus c = shipped();
    for (auto &e : c.entries)
        if (e.id() == "nonred1x:3")
            e.iota = "G1:1..3";
    const CorpusEntry *e = c.find("nonred1x:3");
    REQUIRE(e);
    EntryReport r = verify_entry(c, *e, {"delta-red"});
    CHECK_FALSE(r.ok());
}

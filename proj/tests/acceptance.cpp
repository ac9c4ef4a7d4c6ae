/* One line per acceptance criterion.
   usage: acceptance <path to stq> [--known-failures 3,...]
   Exit status is 0 when the failing criteria are exactly the known ones. */

#include <stq/stq.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace stq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/* stdout and exit status of a command */
std::pair<std::string, int> run(const std::string &cmd)
{
    std::string out;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p)
        throw Error("cannot run " + cmd);
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p))
        out.append(buf, n);
    int st = pclose(p);
    return {out, WIFEXITED(st) ? WEXITSTATUS(st) : -1};
}

std::string quote(const std::string &s) { return "'" + s + "'"; }

bool is_reductive(const CorpusEntry &e) { return reductive_table(e.table); }

Outcome corpus_check(const Corpus &c, const std::string &check)
{
    std::vector<const CorpusEntry *> sel;
    for (const auto &e : c.entries)
        if (!is_reductive(e))
            sel.push_back(&e);
    Report r = verify_corpus(c, sel, {check});
    std::string bad;
    for (const auto &e : r.entries)
        if (!e.ok())
            bad += " " + e.id;
    return {r.failed() == 0, std::to_string(r.passed()) + "/" + std::to_string(r.entries.size()) +
                                 (bad.empty() ? "" : "; failing:" + bad)};
}

Outcome c1(const std::string &cli)
{
    auto t0 = std::chrono::steady_clock::now();
    auto [out, rc] = run(quote(cli) + " verify --all --check symplectic,anomaly,type-duality,containment --json");
    double t = seconds_since(t0);
    auto j = nlohmann::json::parse(out);
    std::size_t passed = j["passed"], total = j["total"];
    bool ok = rc == 0 && passed == 75 && total == 75 && t < 10;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu/%zu passed, exit %d, %.2f s", passed, total, rc, t);
    return {ok, buf};
}

Outcome c4()
{
    struct D {
        const char *rep, *group;
        long long want;
    };
    const D dims[] = {{"std(#1)", "E7", 56},  {"std(#1)", "E6", 27},   {"std(#1)", "G2", 7},
                      {"Spin(#1)", "Spin7", 8}, {"HSpin(#1)", "Spin12", 32}, {"Spin(#1)", "Spin11", 32},
                      {"wedge0_3(#1)", "Sp6", 14}};
    std::string detail;
    bool ok = true;
    for (const auto &d : dims) {
        long long got = parse_rep(make_datum(d.group), d.rep).dim();
        detail += (detail.empty() ? "" : ", ") + std::string(d.group) + " " + d.rep + "=" + std::to_string(got);
        ok = ok && got == d.want;
    }
    return {ok, detail};
}

Outcome c5(const Corpus &c)
{
    std::set<std::pair<std::string, Vec>> seen;
    int checked = 0;
    std::string bad;
    auto visit = [&](const RepSum &r) {
        if (!r.d)
            return;
        for (const auto &[hw, m] : r.parts) {
            if (weyl_dim(r.d, hw) > 100 || !seen.insert({r.d->label, hw}).second)
                continue;
            ++checked;
            if (fs_indicator(r.d, hw) != fs_oracle(r.d, hw))
                bad += " " + str(hw) + "@" + r.d->label;
        }
    };
    for (const auto &e : c.entries)
        for (const auto &in : instantiate_all(e)) {
            visit(in.rho_hat);
            visit(in.q.rho_H);
            visit(validate(in.q, &in.rho_hat).rho_H_iota);
        }
    return {bad.empty(), std::to_string(checked) + " irreps" + (bad.empty() ? "" : "; disagree:" + bad)};
}

Outcome c6(const Corpus &c)
{
    Report r = verify_corpus(c, {"grading"});
    std::string bad;
    for (const auto &e : r.entries)
        if (!e.ok())
            bad += " " + e.id;
    return {r.failed() == 0, std::to_string(r.passed()) + "/" + std::to_string(r.entries.size()) +
                                 (bad.empty() ? "" : "; failing:" + bad)};
}

Outcome c7(const Corpus &c)
{
    auto S = parse_table_s;
    std::vector<std::pair<GlueModel, std::string>> cases{{glue(S("S.3:n=4"), S("S.3:n=4")), "red1:22"},
                                                          {glue(S("S.11:m=2"), S("S.3:n=4")), "red1:23"},
                                                          {glue(S("S.3:n=4"), S("S.10")), "red1:24"},
                                                          {glue(S("S.11:m=2"), S("S.11:m=2")), "red1:25"},
                                                          {glue(S("S.10"), S("S.10")), "red1:26"}};
    int good = 0;
    std::string bad;
    for (const auto &[m, id] : cases) {
        const CorpusEntry *e = c.find(id);
        Instance want = instantiate(*e, e->instances.at(0));
        Glued got = instantiate(m);
        if (same_up_to_isogeny(got.q, got.rho_hat, want.q, want.rho_hat))
            ++good;
        else
            bad += " " + id;
    }
    GlueModel t = glue(S("S.9"), S("S.9")), ref = torus_model();
    bool torus = t.G == ref.G && t.H == ref.H && t.embedding == ref.embedding && t.rho_hat == ref.rho_hat;
    return {good == 5 && torus, std::to_string(good) + "/5 glued rows" + (bad.empty() ? "" : " (failing:" + bad + ")") +
                                    ", S.9+S.9 " + (torus ? "= S.10" : "!= S.10")};
}

Outcome c8(const Corpus &c)
{
    std::mt19937_64 rng(20261016);
    double worst_mult = 0, worst_weyl = 0;
    int reps = 0;
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (const auto &e : c.entries)
        for (const auto &in : instantiate_all(e)) {
            const RepSum &r = in.rho_hat;
            if (r.dim() > 100)
                continue;
            ++reps;
            const Datum &D = r.d;
            Weights whole = r.weights();
            std::vector<std::pair<Weights, long long>> parts;
            for (const auto &[hw, m] : r.parts)
                parts.push_back({weight_multiplicities(D, hw), m});
            Weights twice = merge(whole, whole);
            for (int k = 0; k < 100; ++k) {
                SatakeParameter sp = random_tempered(D, 3, rng);
                cplx v = lfactor_weights(whole, sp, 0.5).value;
                cplx prod = 1;
                for (const auto &[w, m] : parts)
                    prod *= std::pow(lfactor_weights(w, sp, 0.5).value, static_cast<double>(m));
                worst_mult = std::max({worst_mult, rel(v, prod), rel(lfactor_weights(twice, sp, 0.5).value, v * v)});
            }
            if (D->rank() == 0)
                continue;
            std::uniform_int_distribution<int> letter(0, D->rank() - 1), len(1, 30);
            for (int k = 0; k < 20; ++k) {
                SatakeParameter sp = random_tempered(D, 3, rng);
                WeylElement w;
                for (int i = len(rng); i > 0; --i)
                    w.word.push_back(letter(rng));
                worst_weyl = std::max(worst_weyl, rel(lfactor_weights(whole, weyl_act(sp, w), 0.5).value,
                                                      lfactor_weights(whole, sp, 0.5).value));
            }
        }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d reps; worst relative error: sum %.1e, Weyl %.1e", reps, worst_mult, worst_weyl);
    return {worst_mult < 1e-12 && worst_weyl < 1e-12, buf};
}

Outcome c9()
{
    auto t0 = std::chrono::steady_clock::now();
    std::vector<long double> err;
    for (int n : {5, 10, 15, 20})
        err.push_back(cauchy_oracle({0.3, 0.2}, {0.3, 0.2}, n).error);
    double t = seconds_since(t0);
    bool mono = std::is_sorted(err.rbegin(), err.rend());
    char buf[200];
    std::snprintf(buf, sizeof buf, "errors %.1Le %.1Le %.1Le %.1Le, %s, %.3f s", err[0], err[1], err[2], err[3],
                  mono ? "non-increasing" : "NOT monotone", t);
    return {err[3] < 1e-9 && mono && t < 1, buf};
}

Outcome c10(const std::string &cli)
{
    fs::path dir = fs::temp_directory_path() / ("stq-mutated-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::copy(default_corpus_dir(), dir, fs::copy_options::recursive);
    auto edit = [&](const std::string &table, int row, auto fn) {
        fs::path p = dir / (table + ".json");
        auto j = nlohmann::json::parse(read_file(p));
        for (auto &r : j["rows"])
            if (r["row"] == row)
                fn(r);
        std::ofstream(p) << j.dump(2);
    };
    edit("nonred1", 1, [](nlohmann::json &r) { r["iota"] = "G1:{n}..{m}"; });
    edit("red1", 12, [](nlohmann::json &r) { r["rho_H"] = "std(#1) (x) std(#2) (+) std(#1)"; });
    edit("red1", 1, [](nlohmann::json &r) { r["knop"]["W_V"] = "B{m}"; });
    auto [out, rc] = run(quote(cli) + " verify --all --json --corpus " + quote(dir.string()));
    fs::remove_all(dir);
    auto j = nlohmann::json::parse(out);
    std::set<std::string> failed, want{"nonred1:1", "red1:12", "red1:1"};
    for (const auto &e : j["entries"])
        if (!e["ok"].get<bool>())
            failed.insert(e["entry"].get<std::string>());
    std::string list;
    for (const auto &f : failed)
        list += (list.empty() ? "" : " ") + f;
    return {failed == want && rc == 1, std::to_string(failed.size()) + " failures (" + list + "), exit " + std::to_string(rc)};
}

} // namespace

int main(int argc, char **argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to stq> [--known-failures N,...]\n";
        return 2;
    }
    std::string cli = argv[1];
    std::set<int> known;
    for (int i = 2; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--known-failures") {
            std::stringstream in(argv[i + 1]);
            for (std::string t; std::getline(in, t, ',');)
                known.insert(std::stoi(t));
        }

    Corpus c = load_corpus(default_corpus_dir());
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"corpus verification, structural checks", [&] { return c1(cli); }},
        {"delta-red recovers the listed reductive row", [&] { return corpus_check(c, "delta-red"); }},
        {"Whittaker induction gives the listed dual rep", [&] { return corpus_check(c, "whittaker"); }},
        {"dimension regression", [] { return c4(); }},
        {"Frobenius-Schur parity against the tensor-square oracle", [&] { return c5(c); }},
        {"grading conservation", [&] { return c6(c); }},
        {"gluing regression", [&] { return c7(c); }},
        {"L-factor multiplicativity and Weyl invariance", [&] { return c8(c); }},
        {"Cauchy identity oracle", [] { return c9(); }},
        {"negative controls", [&] { return c10(cli); }},
    };
    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int n = static_cast<int>(i + 1);
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.ok)
            failed.insert(n);
        std::cout << "criterion " << n << ": " << (o.ok ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ("
                  << o.detail << ")" << (!o.ok && known.count(n) ? "  [known]" : "") << "\n";
    }
    std::cout << criteria.size() - failed.size() << "/" << criteria.size() << " criteria pass\n";
    for (int k : known)
        if (!failed.count(k))
            std::cout << "criterion " << k << " was listed as a known failure but passes\n";
    return failed == known ? 0 : 1;
}

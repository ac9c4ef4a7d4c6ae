#include <stq/stq.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace stq;

namespace {

constexpr int kUsage = 2;
/* default check set for verify; "--check all" runs every check */
constexpr const char *kStructural = "integrality,containment,symplectic,anomaly,type-duality";

struct Opts {
    std::string corpus;
    bool json = false;
};

Corpus open_corpus(const Opts &o) { return load_corpus(o.corpus.empty() ? default_corpus_dir() : std::filesystem::path(o.corpus)); }

std::string rep_str(const RepSum &r)
{
    if (r.parts.empty())
        return "0";
    std::string s;
    for (const auto &[hw, m] : r.parts) {
        if (!s.empty())
            s += " + ";
        if (m > 1)
            s += std::to_string(m) + "*";
        s += "V" + str(int_labels(r.d, hw)) + "{" + std::to_string(weyl_dim(r.d, hw)) + "}";
    }
    return s;
}

nlohmann::json rep_json(const RepSum &r)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto &[hw, m] : r.parts)
        a.push_back({{"labels", int_labels(r.d, hw)}, {"dim", weyl_dim(r.d, hw)}, {"mult", m}});
    return a;
}

/* "red1:3", "red1 3" */
const CorpusEntry &lookup(const Corpus &c, std::string id)
{
    const CorpusEntry *e = c.find(id);
    if (!e)
        throw SchemaError("no entry '" + id + "'");
    return *e;
}

/* Group for a bare rep expression: the factor labels it mentions, in order. */
Datum group_of(const std::string &rep, const std::string &given)
{
    if (!given.empty())
        return make_datum(given);
    static const std::regex ref(R"(\(([A-Za-z]+[0-9]+)(#[0-9]+)?\))");
    std::vector<std::string> labels;
    for (auto it = std::sregex_iterator(rep.begin(), rep.end(), ref); it != std::sregex_iterator(); ++it) {
        std::string lab = (*it)[1];
        int occ = (*it)[2].length() ? std::stoi((*it)[2].str().substr(1)) : 1;
        int have = static_cast<int>(std::count(labels.begin(), labels.end(), lab));
        for (; have < occ; ++have)
            labels.push_back(lab);
    }
    if (labels.empty())
        throw SchemaError("cannot infer the group of '" + rep + "'; pass --group");
    std::string spec;
    for (const auto &l : labels)
        spec += (spec.empty() ? "" : " x ") + l;
    return make_datum(spec);
}

int cmd_verify(const Opts &o, bool all, const std::vector<std::string> &tables, const std::string &checks,
               const std::vector<std::string> &ids)
{
    Corpus c = open_corpus(o);
    std::vector<const CorpusEntry *> sel;
    for (const auto &e : c.entries) {
        bool take = all || (tables.empty() && ids.empty());
        take = take || std::find(tables.begin(), tables.end(), e.table) != tables.end();
        take = take || std::find(ids.begin(), ids.end(), e.id()) != ids.end();
        if (take)
            sel.push_back(&e);
    }
    for (const auto &t : tables)
        if (std::find(table_ids().begin(), table_ids().end(), t) == table_ids().end())
            throw SchemaError("unknown table '" + t + "'");
    for (const auto &id : ids)
        lookup(c, id);
    std::set<std::string> cs;
    std::stringstream in(checks.empty() ? std::string(kStructural) : checks);
    for (std::string tok; std::getline(in, tok, ',');)
        if (tok == "all")
            cs.clear();
        else if (!tok.empty())
            cs.insert(tok);
    Report r;
    try {
        r = verify_corpus(c, sel, cs);
    } catch (const Error &e) {
        throw SchemaError(e.what());
    }
    std::vector<std::string> ran;
    for (const auto &n : check_names())
        if (cs.empty() || cs.count(n))
            ran.push_back(n);
    if (o.json) {
        nlohmann::json j = report_json(r);
        j["checks"] = ran;
        std::cout << j.dump(2) << "\n";
    } else {
        std::string list;
        for (const auto &n : ran)
            list += (list.empty() ? "" : ",") + n;
        std::cout << "checks: " << list << "\n";
        for (const auto &e : r.entries) {
            std::cout << e.id << (e.ok() ? "  ok" : "  FAIL") << "\n";
            for (const auto &ch : e.checks)
                if (!ch.ok)
                    std::cout << "    " << ch.name << ": " << ch.detail << "\n";
        }
        std::cout << r.passed() << "/" << r.entries.size() << " passed\n";
    }
    return r.failed() ? 1 : 0;
}

int cmd_entry(const Opts &o, const std::vector<std::string> &args)
{
    Corpus c = open_corpus(o);
    std::string id = args.size() == 2 ? args[0] + ":" + args[1] : args.at(0);
    const CorpusEntry &e = lookup(c, id);
    nlohmann::json j = detail::entry_json(e);
    j["id"] = e.id();
    if (!o.json) {
        std::cout << e.id() << ": G = " << e.G << ", H = " << e.H << ", rho_H = " << e.rho_H << ", iota = " << e.iota
                  << "\n  Ghat = " << e.Ghat << ", rho_hat = " << e.rho_hat << "\n";
        if (e.knop.present())
            std::cout << "  Knop " << e.knop.number << ": W_V = " << e.knop.W_V << ", l = " << e.knop.l_hat << "\n";
    }
    nlohmann::json derived = nlohmann::json::array();
    for (const auto &in : instantiate_all(e)) {
        Validation v = validate(in.q, &in.rho_hat);
        nlohmann::json d{{"instance", in.label()},
                         {"dim_G", in.q.G->group_dim()},
                         {"dim_H", in.q.H->group_dim()},
                         {"H_types", str(ss_types(in.q.H))},
                         {"iota_levi", str(levi_types(in.q.G, in.q.iota))},
                         {"period", in.q.iota.empty() ? "none" : fourier_jacobi(v.rho_k) ? "Fourier-Jacobi" : "Bessel"},
                         {"dim_rho_H_iota", v.rho_H_iota.d ? v.rho_H_iota.dim() : 0},
                         {"dim_rho_hat", in.rho_hat.dim()}};
        if (!o.json) {
            std::cout << "# " << in.label() << "\n";
            for (const auto &[k, val] : d.items())
                if (k != "instance")
                    std::cout << "  " << k << ": " << (val.is_string() ? val.get<std::string>() : val.dump()) << "\n";
            std::cout << "  rho_hat: " << rep_str(in.rho_hat) << "\n";
        }
        derived.push_back(d);
    }
    j["derived"] = derived;
    if (o.json)
        std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_reduce(const Opts &o, const std::string &id, bool induce)
{
    Corpus c = open_corpus(o);
    const CorpusEntry &e = lookup(c, id);
    nlohmann::json out = nlohmann::json::array();
    bool ok = true;
    for (const auto &in : instantiate_all(e)) {
        Reduction r = delta_red_full(in.q);
        NormalForm nf = normal_form(r.red);
        nlohmann::json j{{"instance", in.label()},
                         {"M", str(ss_types(r.red.G))},
                         {"normal_form", str(nf)},
                         {"rho_H_iota", rep_str(r.red.rho_H)},
                         {"central_rank_dropped", r.central_rank_dropped}};
        if (!in.q.iota.empty() || !reductive_table(e.table)) {
            auto [tgt, tp] = reduction_target(c, in);
            Instance ti = instantiate(*tgt, tp);
            j["target"] = ti.label();
            j["matches"] = normal_form(ti.q) == nf;
            ok = ok && j["matches"].get<bool>();
            if (induce) {
                WhittakerResult w = check_whittaker_compatibility(in.rho_hat, r.J, ti.rho_hat);
                j["placed"] = w.ok ? rep_str(w.placed) : "";
                j["induced"] = w.ok ? rep_str(w.induced) : "";
                j["listed"] = rep_str(in.rho_hat);
                j["compatible"] = w.ok;
                if (!w.ok)
                    j["detail"] = w.detail;
                ok = ok && w.ok;
            }
        }
        out.push_back(j);
    }
    if (o.json)
        std::cout << out.dump(2) << "\n";
    else
        for (const auto &j : out) {
            std::cout << j["instance"].get<std::string>() << "\n";
            for (const auto &[k, v] : j.items())
                if (k != "instance")
                    std::cout << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    return ok ? 0 : 1;
}

int cmd_dim(const Opts &o, const std::string &rep, const std::string &group, bool decompose)
{
    Datum d = group_of(rep, group);
    RepSum r = parse_rep(d, rep);
    if (!decompose) {
        if (o.json)
            std::cout << nlohmann::json{{"group", d->label}, {"dim", r.dim()}}.dump() << "\n";
        else
            std::cout << r.dim() << "\n";
        return 0;
    }
    if (o.json)
        std::cout << nlohmann::json{{"group", d->label}, {"dim", r.dim()}, {"parts", rep_json(r)}}.dump(2) << "\n";
    else {
        std::cout << rep_str(r) << "\n";
        for (const auto &[hw, m] : r.parts)
            std::cout << "  " << str(int_labels(d, hw)) << " x" << m << "  dim " << weyl_dim(d, hw) << "  FS "
                      << fs_indicator(d, hw) << "\n";
    }
    return 0;
}


/* "S.3:n=4", "red1:22@G5", "nonred2:1@G2,G3" (first instance, or --param) */
GlueModel glue_operand(const Corpus *c, const std::string &tok, const Params &p)
{
    if (tok.rfind("S.", 0) == 0)
        return parse_table_s(tok);
    auto at = tok.find('@');
    std::string id = tok.substr(0, at);
    std::vector<int> marks;
    if (at != std::string::npos) {
        std::stringstream in(tok.substr(at + 1));
        for (std::string m; std::getline(in, m, ',');) {
            if (m.size() < 2 || m[0] != 'G')
                throw SchemaError("bad mark '" + m + "' in '" + tok + "'; expected G<k>");
            marks.push_back(std::stoi(m.substr(1)));
        }
    }
    const CorpusEntry &e = lookup(*c, id);
    Params use = p.empty() ? e.instances.at(0) : p;
    return gluable_from_entry(e, use, marks);
}

nlohmann::json model_json(const GlueModel &m)
{
    nlohmann::json marks = nlohmann::json::array();
    for (const auto &k : m.marks)
        marks.push_back({{"G", k.g}, {"H", k.h}, {"Ghat", k.ghat}});
    return {{"name", m.name},           {"G", m.G},         {"H", m.H},
            {"H_relations", m.relations}, {"embedding", m.embedding}, {"rho_H", m.rho_H},
            {"iota", m.iota},           {"Ghat", m.Ghat},   {"rho_hat", m.rho_hat},
            {"marks", marks}};
}

int cmd_glue(const Opts &o, const std::vector<std::string> &models, const std::vector<std::string> &params)
{
    Params p;
    for (const auto &kv : params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw SchemaError("bad --param '" + kv + "'; expected name=value");
        p[kv.substr(0, eq)] = std::stoll(kv.substr(eq + 1));
    }
    std::optional<Corpus> c;
    bool need = std::any_of(models.begin(), models.end(), [](const std::string &m) { return m.rfind("S.", 0) != 0; });
    if (need)
        c = open_corpus(o);
    std::vector<GlueModel> chain;
    for (const auto &m : models)
        chain.push_back(glue_operand(c ? &*c : nullptr, m, p));
    GlueModel g;
    try {
        g = chain_glue(chain);
    } catch (const Error &e) {
        if (o.json)
            std::cout << nlohmann::json{{"glued", false}, {"reason", e.what()}}.dump(2) << "\n";
        else
            std::cout << "not glued: " << e.what() << "\n";
        return 1;
    }
    nlohmann::json j = model_json(g);
    j["glued"] = true;
    Glued gi = instantiate(g);
    j["dim_rho_hat"] = gi.rho_hat.dim();
    j["symplectic"] = symplectic(gi.rho_hat);
    j["normal_form"] = str(normal_form(gi.q));
    if (!c)
        c = open_corpus(o);
    for (const auto &e : c->entries)
        if (reductive_table(e.table))
            for (const auto &in : instantiate_all(e))
                if (same_up_to_isogeny(gi.q, gi.rho_hat, in.q, in.rho_hat))
                    j["matches"].push_back(in.label());
    if (o.json)
        std::cout << j.dump(2) << "\n";
    else {
        std::cout << g.name << "\n";
        for (const char *k : {"G", "H", "H_relations", "embedding", "rho_H", "iota", "Ghat", "rho_hat", "dim_rho_hat",
                              "symplectic", "normal_form", "matches"})
            if (j.contains(k))
                std::cout << "  " << k << ": " << (j[k].is_string() ? j[k].get<std::string>() : j[k].dump()) << "\n";
    }
    return 0;
}

/* "0.5", "-1", "0.3+0.4i", "i", "2-i" */
cplx parse_complex(std::string t)
{
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    static const std::regex re(R"(^([-+]?[0-9.]+(?:[eE][-+]?\d+)?)?(?:([-+])([0-9.]+(?:[eE][-+]?\d+)?)?i)?$)");
    static const std::regex im_only(R"(^([-+]?)([0-9.]+(?:[eE][-+]?\d+)?)?i$)");
    std::smatch m;
    if (std::regex_match(t, m, im_only))
        return {0, (m[1] == "-" ? -1.0 : 1.0) * (m[2].length() ? std::stod(m[2]) : 1.0)};
    if (!t.empty() && std::regex_match(t, m, re) && m[1].length()) {
        double re_part = std::stod(m[1]);
        double im = 0;
        if (m[2].length())
            im = (m[2] == "-" ? -1.0 : 1.0) * (m[3].length() ? std::stod(m[3]) : 1.0);
        return {re_part, im};
    }
    throw SchemaError("bad complex number '" + t + "'");
}

std::vector<std::string> split_list(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string t; std::getline(in, t, sep);)
        if (!t.empty())
            out.push_back(t);
    return out;
}

int cmd_lfactor(const Opts &o, const std::string &rep, const std::string &group, const std::string &satake,
                const std::string &angles, double q, const std::string &s_text)
{
    Datum d = group_of(rep, group);
    RepSum r = parse_rep(d, rep);
    if (satake.empty() == angles.empty())
        throw SchemaError("give exactly one of --satake and --angles");
    SatakeParameter c;
    if (!satake.empty()) {
        std::vector<cplx> z;
        for (const auto &t : split_list(satake, ';'))
            z.push_back(parse_complex(t));
        c = SatakeParameter::from_coordinates(d, z, q);
    } else {
        c = SatakeParameter{d, {}, q, true};
        for (const auto &t : split_list(angles, ','))
            c.t.emplace_back(0, std::stod(t));
        c.check();
    }
    cplx s = parse_complex(s_text);
    LFactorValue v;
    try {
        v = lfactor(r, c, s);
    } catch (const Error &e) {
        std::cerr << "stq: " << e.what() << "\n";
        return 1;
    }
    if (o.json) {
        nlohmann::json f = nlohmann::json::array();
        for (const auto &[ev, m] : v.factors)
            f.push_back({{"eigenvalue", {ev.real(), ev.imag()}}, {"exponent", m}});
        std::cout << nlohmann::json{{"group", d->label}, {"dim", r.dim()}, {"q", q}, {"s", {s.real(), s.imag()}},
                                    {"value", {v.value.real(), v.value.imag()}}, {"factors", f}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout.precision(17);
        std::cout << "L = " << v.value.real() << (v.value.imag() < 0 ? " - " : " + ") << std::abs(v.value.imag())
                  << "i\n";
        for (const auto &[ev, m] : v.factors)
            std::cout << "  (1 - (" << ev.real() << (ev.imag() < 0 ? " - " : " + ") << std::abs(ev.imag())
                      << "i) q^-s)^-" << m << "\n";
        std::cout << "local factor only; ramified and archimedean places are not modelled\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"stq: strongly tempered quadruples"};
    app.require_subcommand(1);
    Opts o;
    app.add_option("--corpus", o.corpus, "corpus directory (default: $STQ_CORPUS or the shipped data)");
    app.add_flag("--json", o.json, "machine-readable output");

    bool all = false;
    std::vector<std::string> tables, ids, args;
    std::string checks, group, rep, id;

    auto *verify = app.add_subcommand("verify", "verify corpus entries");
    verify->add_flag("--all", all, "every entry");
    verify->add_option("--table", tables, "restrict to a table")->take_all();
    verify->add_option("--check", checks,
                       "comma-separated checks, or 'all' (default: integrality,containment,symplectic,anomaly,type-duality)");
    verify->add_option("entries", ids, "entries like red1:3");

    auto *entry = app.add_subcommand("entry", "show one row with derived fields");
    entry->add_option("id", args, "table:row, or table row")->required()->expected(1, 2);

    auto *reduce = app.add_subcommand("reduce", "compute the reductive quadruple of an entry");
    reduce->add_option("id", id)->required();
    auto *induce = app.add_subcommand("induce", "Whittaker induction check of an entry");
    induce->add_option("id", id)->required();

    auto *dim = app.add_subcommand("dim", "dimension of a representation");
    auto *dec = app.add_subcommand("decompose", "irreducible decomposition of a representation");
    for (auto *s : {dim, dec}) {
        s->add_option("rep", rep, "e.g. \"wedge0_3(Sp6)\"")->required();
        s->add_option("--group", group, "group, when the rep does not name its factors");
    }

    std::vector<std::string> models, params;
    auto *gl = app.add_subcommand("glue", "glue Table S models or marked corpus rows, left to right");
    gl->add_option("models", models, "e.g. S.3:n=4 S.10, or red1:22@G5 S.10")->required()->expected(1, -1);
    gl->add_option("--param", params, "instance parameters for corpus rows, name=value")->take_all();

    std::string satake, angles, s_text = "0.5";
    double q = 2;
    auto *lf = app.add_subcommand("lfactor", "local unramified L-factor of a representation");
    lf->add_option("rep", rep)->required();
    lf->add_option("--group", group, "group, when the rep does not name its factors");
    lf->add_option("--satake", satake, "torus coordinates, ';'-separated complex numbers like 0.6+0.8i");
    lf->add_option("--angles", angles, "tempered parameter exp(i theta), ','-separated angles");
    lf->add_option("--q", q, "residue field size")->check(CLI::PositiveNumber);
    lf->add_option("--s", s_text, "complex s (default 0.5)");

    for (auto *s : {verify, entry, reduce, induce, dim, dec, gl, lf}) {
        s->add_option("--corpus", o.corpus);
        s->add_flag("--json", o.json);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }
    try {
        if (*verify)
            return cmd_verify(o, all, tables, checks, ids);
        if (*entry)
            return cmd_entry(o, args);
        if (*reduce)
            return cmd_reduce(o, id, false);
        if (*induce)
            return cmd_reduce(o, id, true);
        if (*dim)
            return cmd_dim(o, rep, group, false);
        if (*dec)
            return cmd_dim(o, rep, group, true);
        if (*gl)
            return cmd_glue(o, models, params);
        if (*lf)
            return cmd_lfactor(o, rep, group, satake, angles, q, s_text);
    } catch (const SchemaError &e) {
        std::cerr << "stq: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "stq: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include <vcoarse/errors.hpp>

namespace vcoarse::cli
{

namespace
{

constexpr const char *kVersion = "0.1.0";

struct Scenario {
    Json document = Json::object();
    // Resolved parameters actually used; hashed into the report.
    Json effective = Json::object();
};

Json load_document(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw SchemaError({"--config: cannot read '" + path + "'"});
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Json doc = Json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) {
        throw SchemaError({"config: '" + path + "' is not valid JSON"});
    }
    if (!doc.is_object()) {
        throw SchemaError({"config: top level must be an object"});
    }
    SchemaCheck check;
    check.only(doc, "", {"description", "group", "field", "extension", "formula", "formulas", "bindings", "depth",
                         "seed", "samples", "budget", "p", "rank", "select", "char"});
    check.optional(doc, "", "description", Json::value_t::string);
    for (const char *key : {"depth", "seed", "samples", "budget", "p", "rank"}) {
        if (const Json *v = check.optional(doc, "", key, Json::value_t::number_integer); v && v->get<long>() < 0) {
            check.fail(key, "must be nonnegative");
        }
    }
    check.optional(doc, "", "group", Json::value_t::object);
    check.optional(doc, "", "field", Json::value_t::object);
    check.optional(doc, "", "extension", Json::value_t::object);
    check.optional(doc, "", "formula", Json::value_t::string);
    check.optional(doc, "", "formulas", Json::value_t::array);
    check.optional(doc, "", "bindings", Json::value_t::object);
    check.optional(doc, "", "select", Json::value_t::array);
    check.optional(doc, "", "char", Json::value_t::string);
    check.throw_if_failed();
    return doc;
}

template <typename T>
T resolve(const std::optional<T> &flag, const Json &doc, const char *key, T fallback)
{
    if (flag) {
        return *flag;
    }
    if (doc.contains(key)) {
        return doc.at(key).get<T>();
    }
    return fallback;
}

Json require_block(const Json &doc, const char *key)
{
    if (!doc.contains(key)) {
        throw SchemaError({std::string(key) + ": is required for this command"});
    }
    return doc.at(key);
}

Json schedule_check(const std::vector<GroupElement> &schedule, const std::function<GroupElement(long)> &expected,
                    bool &all_exact)
{
    Json out = Json::array();
    all_exact = true;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const GroupElement want = expected(static_cast<long>(k));
        const bool exact = schedule[k] == want;
        all_exact = all_exact && exact;
        out.push_back(Json{{"k", k}, {"value", to_json(schedule[k])}, {"expected", to_json(want)}, {"exact", exact}});
    }
    return out;
}

bool all_checks(const Json &checks)
{
    for (const auto &[name, ok] : checks.items()) {
        if (!ok.get<bool>()) {
            return false;
        }
    }
    return true;
}

// Classification, presentation and annihilator of one defect extension.
Json defect_bundle(const ExtensionDatum &e, const DefectClassification &c)
{
    const OmegaPresentation omega = present(e, c);
    const Annihilator ann = annihilate(omega, e, c);
    return Json{{"classification", to_json(c, e)}, {"omega", to_json(omega)}, {"annihilator", to_json(ann)}};
}

Outcome finish(const std::string &command, Scenario &s, long depth, std::uint64_t seed, Json checks, Json result,
               bool computed_only = false)
{
    s.effective["command"] = command;
    s.effective["depth"] = depth;
    s.effective["seed"] = seed;
    Outcome out;
    const bool pass = all_checks(checks);
    out.report = Json{{"tool", "vcoarse"},
                      {"version", kVersion},
                      {"command", command},
                      {"config", s.effective},
                      {"config_hash", sha256_hex(s.effective.dump())},
                      {"depth", depth},
                      {"seed", seed},
                      {"checks", checks},
                      {"status", pass ? (computed_only ? "COMPUTED" : "PASS") : "FAIL"},
                      {"result", std::move(result)}};
    out.exit_code = pass ? kExitOk : kExitFailed;
    return out;
}

long prime_flag(long p)
{
    if (!is_prime(p)) {
        throw SchemaError({"p: " + std::to_string(p) + " is not a prime"});
    }
    return p;
}

// ---------------------------------------------------------------------------

Outcome run_abhyankar(const Options &o, Scenario &s)
{
    const long p = prime_flag(resolve(o.p, s.document, "p", 2L));
    const long depth = resolve(o.depth, s.document, "depth", 15L);
    s.effective["p"] = p;
    const GroupDescriptor g = GroupDescriptor::uniform(1, ComponentKind::PDiv, p);
    const FieldModel k("F_" + std::to_string(p) + "((t))^(1/p^inf)", FiniteField(static_cast<unsigned>(p), 1), g);
    const PatternSeries theta = artin_schreier_root(k, g.element({-1}));
    const ExtensionDatum e = artin_schreier_defect("theta^p - theta = 1/t", k, theta, depth);

    const DefectClassification c = classify(e);
    const OmegaPresentation omega = present(e, c);
    const Annihilator ann = annihilate(omega, e, c);
    Json bundle{{"classification", to_json(c, e)}, {"omega", to_json(omega)}, {"annihilator", to_json(ann)}};

    bool exact = false;
    Json schedule = schedule_check(e.schedule, [&](long j) { return g.element({-1 / Rational(integer_pow(p, j + 1))}); },
                                   exact);
    Json checks{{"schedule_exact", exact},
                {"approach_is_negative_cone", *e.approach == Segment::element_cut(g, Direction::Initial, g.zero(), false)},
                {"h_e_trivial", c.h_e.is_trivial()},
                {"independent", c.kind == DefectKind::Independent},
                {"omega_zero", omega.is_zero},
                {"annihilator_full_ring", ann.ideal.values == ring_values(g, g.rank())}};
    Json result{{"theta", to_json(theta)}, {"schedule", schedule}};
    result.update(bundle);
    return finish("abhyankar", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}), checks, result);
}

Outcome run_example_e1(const Options &o, Scenario &s)
{
    const long p = prime_flag(resolve(o.p, s.document, "p", 2L));
    const long depth = resolve(o.depth, s.document, "depth", 12L);
    s.effective["p"] = p;
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, p);
    const FieldModel k("F_" + std::to_string(p) + "((t))^(1/p^inf)((x))^(1/p^inf)",
                       FiniteField(static_cast<unsigned>(p), 1), g);
    Json extensions = Json::array();
    Json checks = Json::object();
    // Coordinate 0 is v_x, coordinate 1 is v_t.
    const std::pair<const char *, GroupElement> roots[] = {{"theta_x", g.element({-1, 0})}, {"theta_t", g.element({0, -1})}};
    const std::size_t expected_level[] = {1, 2};
    for (std::size_t i = 0; i < 2; ++i) {
        const PatternSeries theta = artin_schreier_root(k, roots[i].second);
        const ExtensionDatum e = artin_schreier_defect(roots[i].first, k, theta, depth);
        const DefectClassification c = classify(e);
        Json bundle = defect_bundle(e, c);
        bundle["name"] = roots[i].first;
        bundle["theta"] = to_json(theta);
        extensions.push_back(bundle);
        checks[std::string(roots[i].first) + "_level"] = c.h_e.level() == expected_level[i];
        checks[std::string(roots[i].first) + "_independent"] = c.kind == DefectKind::Independent;
    }
    const VerificationReport composed = verify(build(2, {1, 2}, p, CharCase::Equal), depth);
    checks["composed_models_agree"] = composed.pass;
    Json result{{"value_group", to_json(g)}, {"extensions", extensions}, {"composed_verification", to_json(composed)},
                {"realized_levels", Json::array({1, 2})}};
    return finish("example-e1", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}), checks, result);
}

Outcome run_example_e2(const Options &o, Scenario &s)
{
    const long p = prime_flag(resolve(o.p, s.document, "p", 2L));
    const long depth = resolve(o.depth, s.document, "depth", 12L);
    s.effective["p"] = p;
    struct Variant {
        const char *name;
        const char *description;
        std::size_t level;
    };
    const Variant variants[] = {
        {"defectless_residue_field", "K replaced by a defectless field: only v_tK is realized", 1},
        {"tame_outer_field", "L a maximal purely wild extension of L_0: only {0} is realized", 2},
    };
    Json out = Json::array();
    Json checks = Json::object();
    for (const Variant &v : variants) {
        const ConstructionPlan plan = build(2, {v.level}, p, CharCase::Equal);
        const VerificationReport r = verify(plan, depth);
        out.push_back(Json{{"name", v.name}, {"description", v.description}, {"plan", to_json(plan)}, {"verification", to_json(r)}});
        checks[std::string(v.name) + "_verified"] = r.pass;
        checks[std::string(v.name) + "_single_level"] = r.checks.size() == 1 && r.checks.front().realized_level == v.level
                                                        && plan.exclusions.size() == 1;
    }
    return finish("example-e2", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}), checks,
                  Json{{"variants", out}});
}

Outcome run_prescribe(const Options &o, Scenario &s)
{
    const long p = prime_flag(resolve(o.p, s.document, "p", 2L));
    const long depth = resolve(o.depth, s.document, "depth", 12L);
    const std::size_t n = resolve(o.rank, s.document, "rank", std::size_t{2});
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) {
        all[i] = i + 1;
    }
    const std::vector<std::size_t> selected = resolve(o.select, s.document, "select", all);
    const std::string ch = resolve(o.char_case, s.document, "char", std::string("equal"));
    if (ch != "equal" && ch != "mixed") {
        throw SchemaError({"char: must be equal or mixed (got '" + ch + "')"});
    }
    s.effective["p"] = p;
    s.effective["rank"] = n;
    s.effective["select"] = selected;
    s.effective["char"] = ch;
    const ConstructionPlan plan = build(n, selected, p, ch == "equal" ? CharCase::Equal : CharCase::Mixed);
    Json result{{"plan", to_json(plan)}};
    Json checks = Json::object();
    try {
        const VerificationReport r = verify(plan, depth);
        result["verification"] = to_json(r);
        checks["witnesses_verified"] = r.pass;
        checks["chain_isomorphic"] = r.chain_isomorphic;
    } catch (const VerificationFailure &e) {
        result["verification_failure"] = e.what();
        checks["witnesses_verified"] = false;
    }
    return finish("prescribe", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}), checks, result);
}

Outcome run_kummer_mixed(const Options &o, Scenario &s)
{
    const long p = prime_flag(resolve(o.p, s.document, "p", 2L));
    const long depth = resolve(o.depth, s.document, "depth", 20L);
    s.effective["p"] = p;
    const GroupDescriptor g = GroupDescriptor::uniform(1, ComponentKind::PDiv, p);
    const ExtensionDatum e = mixed_characteristic_defect(g, depth);
    const DefectClassification c = classify(e);
    Json bundle = defect_bundle(e, c);
    const GroupElement vp = g.basis(0);
    bool exact = false;
    Json schedule = schedule_check(
        e.schedule, [&](long i) { return Rational(-1, 1) / Rational(integer_pow(p, i + 1)) * vp; }, exact);
    Json checks{{"schedule_exact", exact},
                {"independent", c.kind == DefectKind::Independent},
                {"h_e_trivial", c.h_e.is_trivial()}};
    Json result{{"vp", to_json(vp)}, {"schedule", schedule}};
    result.update(bundle);
    return finish("kummer-mixed", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}), checks, result);
}

struct Loaded {
    GroupDescriptor group;
    FieldModel field;
    Json extension;
};

Loaded load_structures(const Scenario &s)
{
    const GroupDescriptor g = group_from_json(require_block(s.document, "group"));
    const FieldModel k = field_from_json(s.document.value("field", Json::object()), g);
    return Loaded{g, k, s.document.value("extension", Json())};
}

Outcome run_classify(const Options &o, Scenario &s, bool with_kaehler)
{
    const long depth = resolve(o.depth, s.document, "depth", 12L);
    const Loaded l = load_structures(s);
    const ExtensionDatum e = extension_from_json(require_block(s.document, "extension"), l.field, depth);
    Json result{{"extension", e.name}, {"extension_kind", to_string(e.kind)}};
    if (e.kind == ExtensionKind::Defectless) {
        const DefectlessAnalysis a = defectless_analyze(e);
        result["analysis"] = to_json(a);
        if (with_kaehler) {
            const OmegaPresentation omega = present(e, a);
            result["omega"] = to_json(omega);
            result["annihilator"] = to_json(annihilate(omega, e, a));
        }
    } else {
        const DefectClassification c = classify(e);
        result["classification"] = to_json(c, e);
        if (with_kaehler) {
            const OmegaPresentation omega = present(e, c);
            result["omega"] = to_json(omega);
            result["annihilator"] = to_json(annihilate(omega, e, c));
        }
    }
    return finish(with_kaehler ? "kaehler" : "classify", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}),
                  Json::object(), result, true);
}

Bindings bindings_from_json(const Json &j, const EvalModel &m)
{
    Bindings out;
    SchemaCheck check;
    for (const auto &[name, value] : j.items()) {
        const std::string path = "bindings." + name;
        try {
            if (value.is_string()) {
                if (!m.field) {
                    check.fail(path, "series text needs an equal-characteristic model; use {\"value\": ...}");
                    continue;
                }
                out[name] = series_element(lift(*m.field, parse_series(value.get<std::string>(), *m.field)));
            } else if (value.is_object() && value.contains("value")) {
                out[name] = value_element(ExtValue::finite(element_from_json(value.at("value"), m.group)));
            } else {
                check.fail(path, "must be series text or {\"value\": element}");
            }
        } catch (const ParseError &e) {
            check.fail(path, e.what());
        } catch (const StructuralError &e) {
            check.fail(path, e.what());
        }
    }
    check.throw_if_failed();
    return out;
}

EvalModel model_for(const Loaded &l, long depth)
{
    if (l.extension.is_null()) {
        return equal_char_model(l.field, {});
    }
    return eval_model_from_json(l.extension, l.field, depth);
}

Outcome run_eval(const Options &o, Scenario &s)
{
    const long depth = resolve(o.depth, s.document, "depth", 12L);
    const std::size_t budget = resolve(o.budget, s.document, "budget", std::size_t{64});
    const std::string text = resolve(o.formula, s.document, "formula", std::string());
    if (text.empty()) {
        throw SchemaError({"formula: is required (config field or --formula)"});
    }
    s.effective["formula"] = text;
    s.effective["budget"] = budget;
    const Loaded l = load_structures(s);
    const EvalModel m = model_for(l, depth);
    const FormulaPtr phi = parse_formula(text);
    const Bindings env = bindings_from_json(s.document.value("bindings", Json::object()), m);
    EvalOptions opts;
    opts.budget = budget;
    const EvalResult r = evaluate(*phi, m, env, opts);
    Json checks{{"round_trip", same(*parse_formula(print(*phi)), *phi)}};
    Json result{{"formula", print(*phi)}, {"evaluation", to_json(r)}};
    return finish("eval", s, depth, resolve(o.seed, s.document, "seed", std::uint64_t{1}), checks, result, true);
}

Outcome run_check_def(const Options &o, Scenario &s)
{
    const long depth = resolve(o.depth, s.document, "depth", 12L);
    const std::uint64_t seed = resolve(o.seed, s.document, "seed", std::uint64_t{1});
    const std::size_t samples = resolve(o.samples, s.document, "samples", std::size_t{50});
    const std::size_t budget = resolve(o.budget, s.document, "budget", std::size_t{64});
    s.effective["samples"] = samples;
    s.effective["budget"] = budget;
    const Loaded l = load_structures(s);
    const Json ext = require_block(s.document, "extension");
    const ExtensionDatum e = extension_from_json(ext, l.field, depth);
    if (e.kind == ExtensionKind::Defectless) {
        throw SchemaError({"extension.kind: check-def needs a defect extension"});
    }
    const DefectClassification c = classify(e);
    const EvalModel m = eval_model_from_json(ext, l.field, depth);
    const Json formulas = require_block(s.document, "formulas");

    Json reports = Json::array();
    Json checks = Json::object();
    SchemaCheck check;
    for (std::size_t i = 0; i < formulas.size(); ++i) {
        const Json &f = formulas[i];
        const std::string path = "formulas[" + std::to_string(i) + "]";
        check.only(f, path, {"name", "text", "direct", "var"});
        const Json *name = check.require(f, path, "name", Json::value_t::string);
        const Json *text = check.require(f, path, "text", Json::value_t::string);
        const Json *direct = check.require(f, path, "direct", Json::value_t::discarded);
        const Json *var = check.optional(f, path, "var", Json::value_t::string);
        if (!name || !text || !direct) {
            continue;
        }
        std::optional<Segment> set;
        if (direct->is_string()) {
            const std::string d = direct->get<std::string>();
            if (d == "I_E") {
                set = c.i_e.values;
            } else if (d == "M_E") {
                set = c.m_e.values;
            } else if (d == "O_E") {
                set = ring_values(l.group, c.h_e.level());
            } else if (d == "Sigma_E") {
                set = c.sigma;
            } else {
                check.fail(path + ".direct", "must be I_E, M_E, O_E, Sigma_E or a segment object");
                continue;
            }
        } else {
            set = segment_from_json(*direct, l.group);
        }
        const FormulaPtr phi = parse_formula(text->get<std::string>());
        EvalOptions opts;
        opts.budget = budget;
        const std::uint64_t sample_seed = seed + i;
        AgreementReport r = check_definition(*phi, var ? var->get<std::string>() : "b", *set, m,
                                             definability_samples(*set, samples, sample_seed), opts, false);
        r.seed = sample_seed;
        Json rj = to_json(r);
        rj["name"] = *name;
        rj["formula"] = print(*phi);
        rj["direct"] = to_json(*set);
        reports.push_back(rj);
        checks[name->get<std::string>() + "_no_disagreement"] = r.disagreements == 0;
    }
    check.throw_if_failed();
    return finish("check-def", s, depth, seed, checks, Json{{"definitions", reports}});
}

} // namespace

const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names{"abhyankar", "example-e1", "example-e2", "prescribe", "kummer-mixed",
                                                "classify",  "kaehler",    "eval",       "check-def"};
    return names;
}

std::string sha256_hex(const std::string &text)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

Outcome run(const Options &o)
{
    if (o.format != "json") {
        throw SchemaError({"--format: only json is supported (got '" + o.format + "')"});
    }
    Scenario s;
    if (o.config_path) {
        s.document = load_document(*o.config_path);
        s.effective = s.document;
    }
    const std::string &c = o.command;
    if (c == "abhyankar") {
        return run_abhyankar(o, s);
    }
    if (c == "example-e1") {
        return run_example_e1(o, s);
    }
    if (c == "example-e2") {
        return run_example_e2(o, s);
    }
    if (c == "prescribe") {
        return run_prescribe(o, s);
    }
    if (c == "kummer-mixed") {
        return run_kummer_mixed(o, s);
    }
    if (c == "classify" || c == "kaehler") {
        return run_classify(o, s, c == "kaehler");
    }
    if (c == "eval") {
        return run_eval(o, s);
    }
    if (c == "check-def") {
        return run_check_def(o, s);
    }
    throw SchemaError({"command: unknown subcommand '" + c + "'"});
}

int main_entry(int argc, char **argv)
{
    CLI::App app{"Valuation-theoretic defect extension toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option_function<std::string>("--config", [&](const std::string &v) { o.config_path = v; },
                                              "Scenario config (JSON)");
        sub->add_option_function<std::string>("--out", [&](const std::string &v) { o.out = v; },
                                              "Write the report here instead of stdout");
        sub->add_option("--format", o.format, "Report format (json)");
        sub->add_option_function<long>("--depth", [&](const long &v) { o.depth = v; }, "Truncation depth");
        sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t &v) { o.seed = v; }, "Sample seed");
        sub->add_option_function<long>("--p", [&](const long &v) { o.p = v; }, "Residue characteristic");
        sub->add_option_function<std::size_t>("--rank", [&](const std::size_t &v) { o.rank = v; }, "Group rank");
        sub->add_option_function<std::vector<std::size_t>>(
               "--select", [&](const std::vector<std::size_t> &v) { o.select = v; }, "Selected levels, e.g. 1,3")
            ->delimiter(',');
        sub->add_option_function<std::string>("--char", [&](const std::string &v) { o.char_case = v; },
                                              "equal or mixed");
        sub->add_option_function<std::string>("--formula", [&](const std::string &v) { o.formula = v; },
                                              "Formula text for eval");
        sub->add_option_function<std::size_t>("--samples", [&](const std::size_t &v) { o.samples = v; },
                                              "Samples per definition");
        sub->add_option_function<std::size_t>("--budget", [&](const std::size_t &v) { o.budget = v; },
                                              "Bounded evaluation budget");
    };
    const std::map<std::string, std::string> help{
        {"abhyankar", "Artin-Schreier root of X^p - X = 1/t: schedule and classification"},
        {"example-e1", "Rank-2 field with generators at both levels"},
        {"example-e2", "Rank-2 variants with a defect at one level only"},
        {"prescribe", "Build and verify a field with the selected defect levels"},
        {"kummer-mixed", "Mixed characteristic root of a^p - a = 1/p"},
        {"classify", "Classify the extension given by --config"},
        {"kaehler", "Classification plus differential module and annihilator"},
        {"eval", "Evaluate a formula in the model given by --config"},
        {"check-def", "Compare formula definitions against computed value sets"},
    };
    for (const std::string &name : command_names()) {
        CLI::App *sub = app.add_subcommand(name, help.at(name));
        add_common(sub);
        sub->callback([&o, name]() { o.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        const Outcome out = run(o);
        const std::string text = dump(out.report);
        if (o.out) {
            std::ofstream f(*o.out, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot write '" << *o.out << "'\n";
                return kExitError;
            }
            f << text;
        } else {
            std::cout << text;
        }
        if (out.exit_code != kExitOk) {
            std::cerr << o.command << ": verification failed\n";
        }
        return out.exit_code;
    } catch (const SchemaError &e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}

} // namespace vcoarse::cli

#include <gtest/gtest.h>

#include <functional>

#include <vcoarse/errors.hpp>
#include <vcoarse/formlang.hpp>
#include <vcoarse/io.hpp>

#include "generators.hpp"

namespace vcoarse
{
namespace
{

struct Scenario {
    GroupDescriptor group;
    FieldModel field;
    ExtensionDatum datum;
    EvalModel model;
};

Scenario scenario(const Json &group, const Json &extension, long depth = 12)
{
    GroupDescriptor g = group_from_json(group);
    FieldModel k = field_from_json(Json::object(), g);
    ExtensionDatum e = extension_from_json(extension, k, depth);
    EvalModel m = eval_model_from_json(extension, k, depth);
    return Scenario{g, k, e, m};
}

Scenario artin_schreier(long p)
{
    return scenario({{"rank", 1}, {"components", {"pdiv"}}, {"p", p}},
                    {{"kind", "artin_schreier"}, {"name", "as"}, {"rhs", "t^-1"}});
}

Scenario kummer()
{
    Json schedule = Json::array();
    for (int i = 1; i <= 10; ++i) {
        schedule.push_back(std::to_string((1 << i) - 1) + "/" + std::to_string(1 << i));
    }
    return scenario({{"rank", 1}, {"components", {"pdiv"}}, {"p", 2}},
                    {{"kind", "kummer"},
                     {"name", "k"},
                     {"vp", 1},
                     {"approach", {{"direction", "initial"}, {"kind", "element"}, {"gamma", 1}, {"closed", false}}},
                     {"schedule", schedule}});
}

Bindings bind_b(const GroupElement &v)
{
    return {{"b", value_element(ExtValue::finite(v))}};
}

bool contradicts(Truth a, Truth b)
{
    return a != Truth::Unknown && b != Truth::Unknown && a != b;
}

TEST(Parse, ErrorsCarryPositions)
{
    const std::vector<std::pair<std::string, std::size_t>> cases{
        {"v(b) ? 1", 5},
        {"v(b) >= ", 8},
        {"exists c K : true", 9},
        {"forall c in M : true", 12},
        {"v(b) >= 1 and )", 14},
    };
    for (const auto &[text, pos] : cases) {
        try {
            parse_formula(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ParseError &e) {
            EXPECT_EQ(e.position(), pos) << text << ": " << e.what();
        }
    }
}

TEST(Parse, PrintsCanonically)
{
    const FormulaPtr f = parse_formula("exists c in K : v(theta - c) > -1/2 and v(b) >= 0");
    EXPECT_EQ(f->kind, Formula::Kind::Quant);
    EXPECT_EQ(f->domain, Domain::K);
    EXPECT_EQ(free_variables(*f), std::vector<std::string>{"b"});
    EXPECT_TRUE(same(*parse_formula(print(*f)), *f));
}

// Random well-scoped formula text over the free variable b.
class FormulaProperties : public ::testing::Test
{
protected:
    static constexpr int kIterations = 400;
    testing::Gen gen{0xf0e1a};

    std::string rel()
    {
        return gen.pick(std::vector<std::string>{"<", "<=", "=", ">=", ">"});
    }

    std::string rational()
    {
        const long num = gen.integer(-4, 4);
        const long den = gen.pick(std::vector<long>{1, 2, 4});
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    std::string atom(bool has_c, bool has_x)
    {
        std::vector<std::function<std::string()>> options{
            [&] { return "v(b) " + rel() + " " + rational(); },
            [&] { return "v(theta) " + rel() + " " + rational() + "*v(t)"; },
        };
        if (has_c) {
            options.push_back([&] { return "v(theta - c) " + rel() + " " + rational(); });
            options.push_back([&] { return "v(b) " + rel() + " -v(theta - c)"; });
        }
        if (has_x) {
            options.push_back([&] { return std::string("inK(x^p - x)"); });
        }
        if (has_c && has_x) {
            options.push_back([&] { return "v(b) " + rel() + " -v(x - c)"; });
        }
        return gen.pick(options)();
    }

    std::string formula(int depth, bool has_c, bool has_x, bool allow_x = true)
    {
        const long choice = depth == 0 ? 0 : gen.integer(0, 5);
        switch (choice) {
            case 1:
                return "(" + formula(depth - 1, has_c, has_x, allow_x) + " and " + formula(depth - 1, has_c, has_x, allow_x) + ")";
            case 2:
                return "(" + formula(depth - 1, has_c, has_x, allow_x) + " or " + formula(depth - 1, has_c, has_x, allow_x) + ")";
            case 3:
                return "not (" + formula(depth - 1, has_c, has_x, allow_x) + ")";
            case 4:
                if (!has_c) {
                    return std::string(gen.coin() ? "exists" : "forall") + " c in K : " + formula(depth - 1, true, has_x, allow_x);
                }
                [[fallthrough]];
            case 5:
                if (!has_x && allow_x) {
                    return "exists x in L\\K : " + formula(depth - 1, has_c, true, allow_x);
                }
                [[fallthrough]];
            default:
                return atom(has_c, has_x);
        }
    }
};

TEST_F(FormulaProperties, PrintParseRoundTrip)
{
    for (int i = 0; i < kIterations; ++i) {
        const std::string text = formula(4, false, false);
        const FormulaPtr f = parse_formula(text);
        const std::string printed = print(*f);
        const FormulaPtr g = parse_formula(printed);
        ASSERT_TRUE(same(*f, *g)) << text << " printed as " << printed;
        ASSERT_EQ(print(*g), printed);
    }
}

// Larger budgets never retract a decided bounded answer.
TEST_F(FormulaProperties, BoundedIsMonotoneInBudget)
{
    const Scenario s = artin_schreier(2);
    int decided = 0;
    for (int i = 0; i < kIterations / 4; ++i) {
        const FormulaPtr f = parse_formula(formula(3, false, false));
        const Bindings b = bind_b(gen.element(s.group, 2, 3));
        Truth previous = Truth::Unknown;
        for (std::size_t budget : {4u, 12u, 32u}) {
            EvalOptions opts;
            opts.budget = budget;
            opts.oracle = false;
            const EvalResult r = evaluate(*f, s.model, b, opts);
            if (previous != Truth::Unknown) {
                ASSERT_EQ(r.value, previous) << print(*f) << " budget " << budget;
            }
            previous = r.value;
        }
        decided += previous != Truth::Unknown;
    }
    EXPECT_GT(decided, kIterations / 20);
}

TEST_F(FormulaProperties, OracleNeverContradictsBounded)
{
    const std::vector<Scenario> scenarios{artin_schreier(2), artin_schreier(3)};
    int both = 0;
    for (int i = 0; i < kIterations / 4; ++i) {
        const Scenario &s = gen.pick(scenarios);
        const FormulaPtr f = parse_formula(formula(3, false, false));
        const Bindings b = bind_b(gen.element(s.group, 2, 3));
        EvalOptions bounded;
        bounded.budget = 24;
        bounded.oracle = false;
        EvalOptions oracle;
        oracle.budget = 24;
        const Truth a = evaluate(*f, s.model, b, bounded).value;
        const Truth o = evaluate(*f, s.model, b, oracle).value;
        ASSERT_FALSE(contradicts(a, o)) << print(*f) << " b=" << b.at("b").str();
        both += a != Truth::Unknown && o != Truth::Unknown;
    }
    EXPECT_GT(both, kIterations / 20);
}

TEST(Evaluate, DirectAndOracleModes)
{
    const Scenario s = artin_schreier(2);
    const FormulaPtr direct = parse_formula("v(b) >= 0");
    const EvalResult r = evaluate(*direct, s.model, bind_b(s.group.element({1})));
    EXPECT_EQ(r.value, Truth::True);
    EXPECT_EQ(r.mode, EvalMode::Direct);

    // theta is approximated from K to within every negative value but never to 0.
    const FormulaPtr close = parse_formula("exists c in K : v(theta - c) > -1/8");
    EXPECT_EQ(evaluate(*close, s.model, {}).value, Truth::True);
    const FormulaPtr past = parse_formula("exists c in K : v(theta - c) >= 0");
    const EvalResult o = evaluate(*past, s.model, {});
    EXPECT_EQ(o.value, Truth::False);
    EXPECT_EQ(o.mode, EvalMode::Oracle);
}

TEST(Evaluate, Errors)
{
    const Scenario s = artin_schreier(2);
    EXPECT_THROW(evaluate(*parse_formula("v(b) >= 0"), s.model, {}), EvalError);
    EXPECT_THROW(evaluate(*parse_formula("v(b)*v(b) >= 0"), s.model, bind_b(s.group.zero())), EvalError);
    EXPECT_THROW(evaluate(*parse_formula("v(b)/v(b) >= 0"), s.model, bind_b(s.group.zero())), EvalError);
    EvalModel bare = s.model;
    bare.generators.clear();
    EXPECT_THROW(evaluate(*parse_formula("exists x in L\\K : inK(x^p - x)"), bare, {}), EvalError);
    EXPECT_THROW(check_definition(*parse_formula("v(b) >= v(c)"), "b", ring_values(s.group, 1), s.model,
                                  {s.group.zero()}),
                 EvalError);
}

TEST(Definability, ArtinSchreierDefinitions)
{
    const Scenario s = artin_schreier(2);
    const DefectClassification c = classify(s.datum);
    const std::vector<std::pair<std::string, Segment>> defs{
        {"exists x in L\\K : exists c in K : inK(x^p - x) and v(b) >= -v(x - c)", c.i_e.values},
        {"exists x in L\\K : exists c in K : inK(x^p - x) and v(b) > -v(x - c)", c.m_e.values},
        {"forall c in K : v(theta^p - theta - c^p + c) < v(b)", ring_values(s.group, c.h_e.level())},
    };
    for (std::size_t i = 0; i < defs.size(); ++i) {
        const auto &[text, direct] = defs[i];
        const AgreementReport r = check_definition(*parse_formula(text), "b", direct, s.model,
                                                   definability_samples(direct, 50, 7 + i));
        EXPECT_EQ(r.samples, 50u);
        EXPECT_EQ(r.disagreements, 0u) << text;
        EXPECT_LE(r.unknown_rate(), 0.2) << text;
    }
}

TEST(Definability, KummerDefinitions)
{
    const Scenario s = kummer();
    const DefectClassification c = classify(s.datum);
    const std::vector<std::pair<std::string, Segment>> defs{
        {"exists x in L\\K : exists c in K : inK(x^p) and v(b) >= 1/(p-1)*v(p) - v(x - c)", c.i_e.values},
        {"forall c in K : v(theta^p - c^p) - p/(p-1)*v(p) < v(b)", ring_values(s.group, c.h_e.level())},
    };
    for (std::size_t i = 0; i < defs.size(); ++i) {
        const auto &[text, direct] = defs[i];
        const AgreementReport r = check_definition(*parse_formula(text), "b", direct, s.model,
                                                   definability_samples(direct, 50, 11 + i));
        EXPECT_EQ(r.disagreements, 0u) << text;
        EXPECT_LE(r.unknown_rate(), 0.2) << text;
    }
}

TEST(Definability, WrongDefinitionIsCaught)
{
    const Scenario s = artin_schreier(2);
    const FormulaPtr wrong = parse_formula("v(b) > 0");
    const Segment ring = ring_values(s.group, 1);
    EXPECT_THROW(check_definition(*wrong, "b", ring, s.model, definability_samples(ring, 40, 3)),
                 DefinabilityCheckFailure);
    const AgreementReport r =
        check_definition(*wrong, "b", ring, s.model, definability_samples(ring, 40, 3), {}, false);
    EXPECT_GT(r.disagreements, 0u);
}

} // namespace
} // namespace vcoarse

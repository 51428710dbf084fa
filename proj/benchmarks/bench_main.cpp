#include <benchmark/benchmark.h>

#include <vcoarse/extension.hpp>
#include <vcoarse/formlang.hpp>
#include <vcoarse/kaehler.hpp>
#include <vcoarse/prescribe.hpp>

using namespace vcoarse;

namespace
{

FieldModel model(std::size_t rank, long p)
{
    return FieldModel("K", FiniteField(static_cast<unsigned>(p), 1), GroupDescriptor::uniform(rank, ComponentKind::PDiv, p));
}

void BM_SegmentSum(benchmark::State &state)
{
    const GroupDescriptor g = GroupDescriptor::uniform(3, ComponentKind::PDiv, 2);
    const Segment a = Segment::subgroup_cut(g, Direction::Final, 1, g.element({Rational(1, 2), 0, 0}));
    const Segment b = Segment::element_cut(g, Direction::Final, g.element({0, Rational(-3, 4), 1}), false);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sum(a, b));
    }
}
BENCHMARK(BM_SegmentSum);

void BM_Residual(benchmark::State &state)
{
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, 2);
    const Segment p = max_ideal_values(g, 1);
    const Segment n = Segment::element_cut(g, Direction::Final, g.element({Rational(1, 2), 3}), true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(residual(p, n));
    }
}
BENCHMARK(BM_Residual);

// Arg: schedule index.
void BM_ValDiff(benchmark::State &state)
{
    const FieldModel k = model(1, 2);
    const PatternSeries theta = artin_schreier_root(k, k.value_group.element({-1}));
    const SeriesElement c = schedule_element(theta, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(val_diff(k, theta, c));
    }
}
BENCHMARK(BM_ValDiff)->Arg(1)->Arg(10)->Arg(20);

// Arg: schedule depth.
void BM_Classify(benchmark::State &state)
{
    const FieldModel k = model(2, 3);
    const PatternSeries theta = artin_schreier_root(k, k.value_group.element({-1, 0}));
    for (auto _ : state) {
        const ExtensionDatum e = artin_schreier_defect("x", k, theta, state.range(0));
        benchmark::DoNotOptimize(classify(e));
    }
}
BENCHMARK(BM_Classify)->Arg(4)->Arg(12)->Arg(20);

void BM_Annihilator(benchmark::State &state)
{
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, 2);
    const ExtensionDatum d =
        synthetic_defect("dep", g, 2, Segment::subgroup_cut(g, Direction::Final, 1, g.element({Rational(1, 2), 0})));
    const DefectClassification c = classify(d);
    for (auto _ : state) {
        const OmegaPresentation omega = present(d, c);
        benchmark::DoNotOptimize(annihilate(omega, d, c));
    }
}
BENCHMARK(BM_Annihilator);

// Arg: rank n; every level selected.
void BM_PrescribeVerify(benchmark::State &state)
{
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<std::size_t> all;
    for (std::size_t i = 1; i <= n; ++i) {
        all.push_back(i);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify(build(n, all, 2, CharCase::Equal), 10));
    }
}
BENCHMARK(BM_PrescribeVerify)->DenseRange(1, 4);

// Arg: bounded budget; oracle off so every quantifier enumerates.
void BM_EvaluateBounded(benchmark::State &state)
{
    const FieldModel k = model(1, 2);
    const PatternSeries theta = artin_schreier_root(k, k.value_group.element({-1}));
    const ExtensionDatum e = artin_schreier_defect("as", k, theta, 12);
    ImmediateElement gen{"theta", ImmediateElement::Relation::ArtinSchreier, theta, *e.approach, e.schedule,
                         *theta.valuation()};
    const EvalModel m = equal_char_model(k, {gen});
    const FormulaPtr f = parse_formula("exists c in K : v(theta - c) > -1/8 and v(b) >= 0");
    const Bindings b{{"b", value_element(ExtValue::finite(k.value_group.element({1})))}};
    EvalOptions opts;
    opts.budget = static_cast<std::size_t>(state.range(0));
    opts.oracle = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(*f, m, b, opts));
    }
}
BENCHMARK(BM_EvaluateBounded)->Arg(16)->Arg(64);

void BM_CheckDefinition(benchmark::State &state)
{
    const FieldModel k = model(1, 2);
    const PatternSeries theta = artin_schreier_root(k, k.value_group.element({-1}));
    const ExtensionDatum e = artin_schreier_defect("as", k, theta, 12);
    const DefectClassification c = classify(e);
    ImmediateElement gen{"theta", ImmediateElement::Relation::ArtinSchreier, theta, *e.approach, e.schedule,
                         *theta.valuation()};
    const EvalModel m = equal_char_model(k, {gen});
    const FormulaPtr f = parse_formula("exists x in L\\K : exists c in K : inK(x^p - x) and v(b) >= -v(x - c)");
    const auto samples = definability_samples(c.i_e.values, 50, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_definition(*f, "b", c.i_e.values, m, samples));
    }
}
BENCHMARK(BM_CheckDefinition);

} // namespace

BENCHMARK_MAIN();

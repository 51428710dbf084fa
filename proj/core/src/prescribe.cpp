#include <algorithm>

#include <vcoarse/errors.hpp>
#include <vcoarse/prescribe.hpp>

namespace vcoarse
{

std::string to_string(CharCase c)
{
    return c == CharCase::Equal ? "equal" : "mixed";
}

namespace
{

GroupDescriptor suffix_group(const GroupDescriptor &g, std::size_t from)
{
    return GroupDescriptor(std::vector<Component>(g.components().begin() + static_cast<long>(from),
                                                  g.components().end()),
                           g.prime());
}

GroupDescriptor prefix_group(const GroupDescriptor &g, std::size_t count)
{
    return GroupDescriptor(std::vector<Component>(g.components().begin(),
                                                  g.components().begin() + static_cast<long>(count)),
                           g.prime());
}

} // namespace

ConstructionPlan build(std::size_t n, std::vector<std::size_t> selected, long p, CharCase char_case)
{
    if (n < 1) {
        throw StructuralError("the index chain must be nonempty");
    }
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    for (const std::size_t j : selected) {
        if (j < 1 || j > n) {
            throw InvalidSelectionError("level " + std::to_string(j) + " is not a subprincipal convex subgroup of a rank "
                                        + std::to_string(n) + " group (levels 1.." + std::to_string(n) + ")");
        }
    }
    const GroupDescriptor group = GroupDescriptor::uniform(n, ComponentKind::PDiv, p);
    FieldModel model("F_" + std::to_string(p) + "((t^G))", FiniteField(static_cast<unsigned>(p), 1), group);

    ConstructionPlan plan{n, selected, p, char_case, model, {}, {}, {}, {}};
    for (const std::size_t j : selected) {
        Witness w{j, "", std::nullopt, false};
        if (char_case == CharCase::Mixed && j == 1) {
            w.name = "a";
            w.mixed = true;
        } else {
            w.name = "theta_" + std::to_string(j);
            w.theta = artin_schreier_root(model, -group.basis(j - 1));
        }
        plan.witnesses.push_back(std::move(w));
        plan.decompositions.push_back(Decomposition{j, j - 1, n - j});
    }
    for (std::size_t i = 1; i <= n; ++i) {
        if (!std::binary_search(selected.begin(), selected.end(), i)) {
            plan.exclusions.push_back(Exclusion{
                i, "DECLARED",
                "passing to a tame closure at this level leaves no defect extension with associated subgroup H_"
                    + std::to_string(i)});
        }
    }
    if (char_case == CharCase::Mixed) {
        plan.declared_flags.push_back("adjoin a primitive p-th root of unity (degree dividing (p-1)!)");
        plan.declared_flags.push_back("residue field of the v(p) coarsening is perfect of characteristic p");
    }
    return plan;
}

VerificationReport verify(const ConstructionPlan &plan, long depth)
{
    const GroupDescriptor &g = plan.model.value_group;
    VerificationReport report;
    report.depth = depth;
    report.exclusions = plan.exclusions;
    report.drvg = g.satisfies_drvg();

    std::string failures;
    for (const Witness &w : plan.witnesses) {
        ExtensionDatum datum = w.mixed ? mixed_characteristic_defect(g, depth)
                                       : artin_schreier_defect(w.name, plan.model, *w.theta, depth);
        const DefectClassification c = classify(datum);
        WitnessCheck check{w.level, w.name, c.h_e.level(), c.kind, *datum.approach, datum.schedule};

        if (w.theta) {
            const FieldModel &k = plan.model;
            const PatternSeries lhs = sub(k, frobenius(k, *w.theta), *w.theta);
            check.identity_exact = lhs == lift(k, SeriesElement::monomial(-g.basis(w.level - 1)));

            // Same witness built in the residue model of the coarsening at H_(level-1) and
            // lifted back through the composite valuation.
            const FieldModel inner(k.name + "|res", k.residue, suffix_group(g, w.level - 1));
            std::optional<Segment> lifted;
            const PatternSeries inner_theta = artin_schreier_root(inner, -inner.value_group.basis(0));
            const Segment inner_approach = approach_segment(inner, inner_theta, depth).segment;
            if (w.level > 1) {
                const FieldModel outer(k.name + "|outer", k.residue, prefix_group(g, w.level - 1));
                lifted = ComposedModel(outer, inner).lift_inner(inner_approach);
            } else {
                lifted = inner_approach;
            }
            check.lift_agrees = *lifted == check.approach;
        }
        check.pass = check.identity_exact && check.lift_agrees && check.kind == DefectKind::Independent
                     && check.realized_level == w.level;
        if (!check.pass) {
            failures += " " + w.name + " realized H_" + std::to_string(check.realized_level) + " with schedule";
            for (std::size_t i = 0; i < std::min<std::size_t>(check.schedule.size(), 4); ++i) {
                failures += " " + check.schedule[i].str();
            }
            failures += ";";
        }
        report.checks.push_back(std::move(check));
    }

    // Index i <-> principal subgroup generated by t_i.
    bool bijective = true;
    std::vector<bool> hit(plan.rank, false);
    for (std::size_t i = 0; i < plan.rank; ++i) {
        const ConvexSubgroup h = g.archimedean_class_subgroups(g.basis(i)).first;
        if (!h.principal() || hit[h.level()]) {
            bijective = false;
            continue;
        }
        hit[h.level()] = true;
        report.principal_bijection.emplace_back(i, h.level());
    }
    bijective = bijective && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    bool reversing = true;
    for (std::size_t a = 0; a + 1 < report.principal_bijection.size(); ++a) {
        const ConvexSubgroup ha = g.subgroup(report.principal_bijection[a].second);
        const ConvexSubgroup hb = g.subgroup(report.principal_bijection[a + 1].second);
        reversing = reversing && hb.is_subset_of(ha) && !(ha == hb);
    }
    report.chain_isomorphic = bijective && reversing;

    report.pass = failures.empty() && report.chain_isomorphic && report.drvg;
    if (!failures.empty()) {
        throw VerificationFailure("positive witness checks failed:" + failures);
    }
    return report;
}

} // namespace vcoarse

#include <gtest/gtest.h>

#include <set>

#include <vcoarse/errors.hpp>
#include <vcoarse/prescribe.hpp>

namespace vcoarse
{
namespace
{

std::vector<std::vector<std::size_t>> all_selections(std::size_t n)
{
    std::vector<std::vector<std::size_t>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> j;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                j.push_back(i + 1);
            }
        }
        out.push_back(j);
    }
    return out;
}

TEST(Prescribe, EverySelectionRealizesExactlyItsLevels)
{
    for (long p : {2L, 3L}) {
        for (std::size_t n = 1; n <= 4; ++n) {
            for (const auto &selected : all_selections(n)) {
                const ConstructionPlan plan = build(n, selected, p, CharCase::Equal);
                const VerificationReport r = verify(plan, 10);
                ASSERT_TRUE(r.pass);
                ASSERT_TRUE(r.chain_isomorphic);
                ASSERT_TRUE(r.drvg);
                std::set<std::size_t> realized;
                for (const WitnessCheck &w : r.checks) {
                    ASSERT_TRUE(w.pass);
                    ASSERT_TRUE(w.identity_exact);
                    ASSERT_TRUE(w.lift_agrees);
                    ASSERT_EQ(w.kind, DefectKind::Independent);
                    realized.insert(w.realized_level);
                }
                ASSERT_EQ(realized, std::set<std::size_t>(selected.begin(), selected.end()));
                ASSERT_EQ(r.exclusions.size(), n - selected.size());
                for (const Exclusion &x : r.exclusions) {
                    ASSERT_EQ(x.status, "DECLARED");
                    ASSERT_FALSE(realized.count(x.level));
                }
            }
        }
    }
}

TEST(Prescribe, MixedCharacteristicTopStep)
{
    const ConstructionPlan plan = build(3, {1, 3}, 2, CharCase::Mixed);
    const VerificationReport r = verify(plan, 10);
    EXPECT_TRUE(r.pass);
    bool saw_mixed = false;
    for (const Witness &w : plan.witnesses) {
        saw_mixed = saw_mixed || w.mixed;
    }
    EXPECT_TRUE(saw_mixed);
    EXPECT_FALSE(plan.declared_flags.empty());
}

TEST(Prescribe, PrincipalBijectionReversesLevels)
{
    const VerificationReport r = verify(build(3, {1, 2, 3}, 2, CharCase::Equal), 8);
    ASSERT_EQ(r.principal_bijection.size(), 3u);
    for (std::size_t i = 0; i + 1 < r.principal_bijection.size(); ++i) {
        EXPECT_LT(r.principal_bijection[i].first, r.principal_bijection[i + 1].first);
    }
}

TEST(Prescribe, ExampleVariants)
{
    const VerificationReport residue = verify(build(2, {1}, 2, CharCase::Equal), 12);
    ASSERT_EQ(residue.checks.size(), 1u);
    EXPECT_EQ(residue.checks.front().realized_level, 1u);
    const VerificationReport tame = verify(build(2, {2}, 2, CharCase::Equal), 12);
    ASSERT_EQ(tame.checks.size(), 1u);
    EXPECT_EQ(tame.checks.front().realized_level, 2u);
}

TEST(Prescribe, RejectsInvalidSelections)
{
    EXPECT_THROW(build(2, {0}, 2, CharCase::Equal), InvalidSelectionError);
    EXPECT_THROW(build(2, {3}, 2, CharCase::Equal), InvalidSelectionError);
    EXPECT_THROW(build(2, {1}, 4, CharCase::Equal), Error);
}

} // namespace
} // namespace vcoarse

#include <gtest/gtest.h>

#include <vcoarse/errors.hpp>
#include <vcoarse/segment.hpp>

#include "generators.hpp"
#include "oracles.hpp"

namespace vcoarse
{
namespace
{

const GroupDescriptor kRank1 = GroupDescriptor::uniform(1, ComponentKind::PDiv, 2);
const GroupDescriptor kRank2 = GroupDescriptor::uniform(2, ComponentKind::PDiv, 2);

TEST(Segment, ElementCutMembership)
{
    const Segment s = Segment::element_cut(kRank1, Direction::Final, kRank1.element({Rational(1, 2)}), true);
    EXPECT_TRUE(s.contains(kRank1.element({Rational(1, 2)})));
    EXPECT_FALSE(s.contains(kRank1.element({Rational(1, 4)})));
    EXPECT_TRUE(s.has_extremum());
    const Segment open = Segment::element_cut(kRank1, Direction::Initial, kRank1.zero(), false);
    EXPECT_TRUE(open.contains(kRank1.element({Rational(-1, 1024)})));
    EXPECT_FALSE(open.contains(kRank1.zero()));
}

TEST(Segment, SubgroupCutShiftIsCanonical)
{
    const Segment a = Segment::subgroup_cut(kRank2, Direction::Final, 1, kRank2.element({0, 7}));
    const Segment b = Segment::subgroup_cut(kRank2, Direction::Final, 1, kRank2.zero());
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.shift().is_zero());
    EXPECT_TRUE(a.contains(kRank2.element({Rational(1, 8), -100})));
    EXPECT_FALSE(a.contains(kRank2.element({0, 100})));
}

TEST(Segment, OpenCutOnDiscreteClassBecomesClosed)
{
    const GroupDescriptor z = GroupDescriptor::uniform(1, ComponentKind::Int, 2);
    const Segment open = Segment::element_cut(z, Direction::Final, z.zero(), false);
    const Segment closed = Segment::element_cut(z, Direction::Final, z.element({1}), true);
    EXPECT_EQ(open, closed);
}

TEST(Segment, NormalizeGeometricCuts)
{
    // Rank 1: the schedule -1/p^k collapses to {alpha < 0}.
    const Segment a = normalize(kRank1, SeqCut{Direction::Initial, kRank1.zero(), kRank1.basis(0), 1});
    EXPECT_EQ(a, Segment::element_cut(kRank1, Direction::Initial, kRank1.zero(), false));
    // Rank 2 with the scale in the dominant class: {alpha < H_1}.
    const Segment b = normalize(kRank2, SeqCut{Direction::Initial, kRank2.zero(), kRank2.basis(0), 0});
    EXPECT_EQ(b, Segment::subgroup_cut(kRank2, Direction::Initial, 1, kRank2.zero()));
    EXPECT_THROW(normalize(kRank1, SeqCut{Direction::Initial, kRank1.zero(), kRank1.zero(), 0}), DegenerateInputError);
}

TEST(Segment, InvarianceGroups)
{
    EXPECT_TRUE(invariance_group(Segment::element_cut(kRank2, Direction::Final, kRank2.basis(1), true)).is_trivial());
    EXPECT_EQ(invariance_group(max_ideal_values(kRank2, 1)).level(), 1u);
    EXPECT_TRUE(invariance_group(Segment::whole(kRank2)).is_whole());
}

TEST(Segment, SumExamples)
{
    const GroupElement g1 = kRank2.element({Rational(1, 2), 3});
    const GroupElement g2 = kRank2.element({-1, Rational(1, 4)});
    const Segment a = Segment::element_cut(kRank2, Direction::Final, g1, true);
    const Segment b = Segment::element_cut(kRank2, Direction::Final, g2, true);
    EXPECT_EQ(sum(a, b), Segment::element_cut(kRank2, Direction::Final, g1 + g2, true));
    const Segment m = max_ideal_values(kRank2, 1);
    EXPECT_EQ(sum(m, a), shift(m, g1));
    EXPECT_EQ(scale_int(m, 5), m);
}

// Open cuts on a discrete class are stored closed, so sums there stay exact.
TEST(Segment, SumOnDiscreteClass)
{
    const GroupDescriptor g({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}}, 2);
    const Segment h = Segment::subgroup_cut(g, Direction::Final, 1, g.zero());
    EXPECT_EQ(sum(h, h), Segment::subgroup_cut(g, Direction::Final, 1, g.element({2, 0}), true));
}

TEST(Segment, IdealsAndInvarianceRing)
{
    const IdealDescriptor o = make_ideal(ring_values(kRank2, 2), "O_L");
    EXPECT_TRUE(o.principal());
    const IdealDescriptor m = make_ideal(max_ideal_values(kRank2, 2), "M_L");
    EXPECT_FALSE(m.principal());
    const InvarianceRing r = invariance_ring(o);
    EXPECT_TRUE(r.h.is_trivial());
    const IdealDescriptor h1 = make_ideal(max_ideal_values(kRank2, 1));
    const InvarianceRing r1 = invariance_ring(h1);
    EXPECT_EQ(r1.h.level(), 1u);
    EXPECT_EQ(r1.m, h1);
    EXPECT_TRUE(principal_over(ring_values(kRank2, 1), 1));
    EXPECT_FALSE(principal_over(max_ideal_values(kRank2, 1), 1));
}

TEST(Segment, ResidualOfElementCuts)
{
    const Segment p = Segment::element_cut(kRank1, Direction::Final, kRank1.element({1}), false);
    const Segment n = Segment::element_cut(kRank1, Direction::Final, kRank1.element({Rational(1, 4)}), false);
    EXPECT_EQ(residual(p, n), Segment::element_cut(kRank1, Direction::Final, kRank1.element({Rational(3, 4)}), true));
}

// ---------------------------------------------------------------------------
// Randomized laws

class SegmentProperties : public ::testing::Test
{
protected:
    static constexpr int kIterations = 10000;
    testing::Gen gen{0x5e6};
    const std::vector<GroupDescriptor> groups{
        kRank1,
        kRank2,
        GroupDescriptor::uniform(3, ComponentKind::PDiv, 3),
        GroupDescriptor({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}}, 2),
    };

    Direction direction()
    {
        return gen.coin() ? Direction::Final : Direction::Initial;
    }
};

TEST_F(SegmentProperties, InvarianceUnderShiftAndNegation)
{
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const Segment s = gen.segment(g, direction(), 2, 2);
        const GroupElement gamma = gen.element(g, 2, 3);
        const ConvexSubgroup h = invariance_group(s);
        ASSERT_EQ(invariance_group(shift(s, gamma)), h) << s.str();
        ASSERT_EQ(invariance_group(negate(s)), h) << s.str();
    }
}

TEST_F(SegmentProperties, NormalizeIsIdempotentAndPreservesMembership)
{
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const Segment s = gen.segment(g, direction(), 2, 2);
        const Segment n = normalize(s);
        ASSERT_EQ(normalize(n), n);
        for (int j = 0; j < 4; ++j) {
            const GroupElement x = gen.element(g, 3, 3);
            ASSERT_EQ(s.contains(x), n.contains(x));
        }
    }
}

TEST_F(SegmentProperties, InvarianceRingIgnoresShifts)
{
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const Segment s = gen.segment(g, Direction::Final, 2, 2);
        const IdealDescriptor ideal = make_ideal(s);
        const IdealDescriptor shifted = make_ideal(shift(s, gen.element(g, 2, 3)));
        const InvarianceRing a = invariance_ring(ideal);
        const InvarianceRing b = invariance_ring(shifted);
        ASSERT_EQ(a.h, b.h);
        ASSERT_EQ(a.m, b.m);
        ASSERT_EQ(ideal.principal(), ideal.min_attained());
    }
}

TEST_F(SegmentProperties, SumIsCommutativeAndAssociative)
{
    const std::vector<GroupDescriptor> dense{kRank1, kRank2, GroupDescriptor::uniform(3, ComponentKind::Rat, 3)};
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(dense);
        const Segment a = gen.segment(g, Direction::Final, 2, 2);
        const Segment b = gen.segment(g, Direction::Final, 2, 2);
        const Segment c = gen.segment(g, Direction::Final, 2, 2);
        ASSERT_EQ(sum(a, b), sum(b, a));
        ASSERT_EQ(sum(sum(a, b), c), sum(a, sum(b, c)));
    }
}

TEST_F(SegmentProperties, NonprincipalMaximalIdealOverDenseQuotient)
{
    for (int i = 0; i < kIterations / 10; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const std::size_t k = static_cast<std::size_t>(gen.integer(1, static_cast<long>(g.rank())));
        const IdealDescriptor m = make_ideal(max_ideal_values(g, k));
        if (!g.quotient_has_smallest_positive(g.subgroup(k))) {
            ASSERT_FALSE(m.principal());
        } else {
            // Principal exactly when nothing lies below the discrete class.
            ASSERT_EQ(m.principal(), k == g.rank());
        }
    }
}

// ---------------------------------------------------------------------------
// Agreement with set computations on the grid (1/p^3)Z^2 cut to [-4,4]^2.
//
// Shifts live on the (1/p)Z lattice inside [-1,1]; probe points use the (1/p^2) lattice in
// [-2,2], so every boundary effect is resolved by the finer search grid.

class SegmentGridOracle : public ::testing::Test
{
protected:
    static constexpr int kIterations = 12;
    testing::Gen gen{0x0a11ce};
    const GroupDescriptor g = kRank2;
    const std::vector<GroupElement> search = testing::grid(g, 3, 4);
    const std::vector<GroupElement> probes = testing::grid(g, 2, 2);
};

TEST_F(SegmentGridOracle, SumMatchesSearch)
{
    for (int i = 0; i < kIterations; ++i) {
        const Segment a = gen.segment(g, Direction::Final);
        const Segment b = gen.segment(g, Direction::Final);
        const Segment s = sum(a, b);
        const auto a_members = testing::members(a, search);
        for (const GroupElement &x : probes) {
            ASSERT_EQ(s.contains(x), testing::sum_contains(a_members, b, x))
                << a.str() << " + " << b.str() << " = " << s.str() << " at " << x.str();
        }
    }
}

TEST_F(SegmentGridOracle, InitialSumMatchesSearch)
{
    for (int i = 0; i < kIterations; ++i) {
        const Segment a = gen.segment(g, Direction::Initial);
        const Segment b = gen.segment(g, Direction::Initial);
        const Segment s = sum(a, b);
        const auto a_members = testing::members(a, search);
        for (const GroupElement &x : probes) {
            ASSERT_EQ(s.contains(x), testing::sum_contains(a_members, b, x))
                << a.str() << " + " << b.str() << " = " << s.str() << " at " << x.str();
        }
    }
}

TEST_F(SegmentGridOracle, DiscreteClassSumMatchesSearch)
{
    const GroupDescriptor zg({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}}, 2);
    const auto zsearch = testing::grid(zg, 3, 4);
    const auto zprobes = testing::grid(zg, 2, 2);
    for (int i = 0; i < kIterations; ++i) {
        const Segment a = gen.segment(zg, Direction::Final);
        const Segment b = gen.segment(zg, Direction::Final);
        const Segment s = sum(a, b);
        const auto a_members = testing::members(a, zsearch);
        for (const GroupElement &x : zprobes) {
            ASSERT_EQ(s.contains(x), testing::sum_contains(a_members, b, x))
                << a.str() << " + " << b.str() << " = " << s.str() << " at " << x.str();
        }
    }
}

TEST_F(SegmentGridOracle, ResidualMatchesSearch)
{
    for (int i = 0; i < kIterations; ++i) {
        const Segment p = gen.segment(g, Direction::Final);
        const Segment n = gen.segment(g, Direction::Final);
        const Segment r = residual(p, n);
        const auto n_members = testing::members(n, search);
        for (const GroupElement &x : probes) {
            ASSERT_EQ(r.contains(x), testing::residual_contains(p, n_members, x))
                << "(" << p.str() << " : " << n.str() << ") = " << r.str() << " at " << x.str();
        }
    }
}

TEST_F(SegmentGridOracle, SubsetMatchesPointwise)
{
    for (int i = 0; i < 10 * kIterations; ++i) {
        const Direction d = gen.coin() ? Direction::Final : Direction::Initial;
        const Segment a = gen.segment(g, d);
        const Segment b = gen.segment(g, d);
        ASSERT_EQ(subset_of(a, b), testing::subset_on(a, b, search)) << a.str() << " vs " << b.str();
    }
}

TEST_F(SegmentGridOracle, ShiftAndNegateMatchPointwise)
{
    for (int i = 0; i < 10 * kIterations; ++i) {
        const Direction d = gen.coin() ? Direction::Final : Direction::Initial;
        const Segment s = gen.segment(g, d);
        const GroupElement gamma = gen.element(g, 1, 1);
        const Segment t = shift(s, gamma);
        const Segment n = negate(s);
        for (const GroupElement &x : probes) {
            ASSERT_EQ(t.contains(x), s.contains(x - gamma));
            ASSERT_EQ(n.contains(x), s.contains(-x));
        }
    }
}

TEST_F(SegmentGridOracle, InvarianceGroupMatchesPreservingShifts)
{
    const std::vector<GroupElement> steps{g.element({0, Rational(1, 4)}), g.element({Rational(1, 4), 0})};
    for (int i = 0; i < 10 * kIterations; ++i) {
        const Segment s = gen.segment(g, gen.coin() ? Direction::Final : Direction::Initial);
        const ConvexSubgroup h = invariance_group(s);
        for (const GroupElement &step : steps) {
            ASSERT_EQ(h.contains(step), testing::preserves(s, step, probes)) << s.str() << " step " << step.str();
        }
    }
}

TEST_F(SegmentGridOracle, NormalizedSequenceCutMatchesUnion)
{
    for (int i = 0; i < kIterations; ++i) {
        const Direction d = gen.coin() ? Direction::Final : Direction::Initial;
        const GroupElement limit = gen.element(g, 1, 1);
        GroupElement scale = gen.nonzero_element(g, 0, 1);
        if (scale.sign() < 0) {
            scale = -scale;
        }
        const SeqCut cut{d, limit, scale, gen.integer(0, 2)};
        const Segment s = normalize(g, cut);
        for (const GroupElement &x : probes) {
            ASSERT_EQ(s.contains(x), testing::seq_cut_contains(cut, g.prime(), 16, x))
                << s.str() << " at " << x.str();
        }
    }
}

} // namespace
} // namespace vcoarse

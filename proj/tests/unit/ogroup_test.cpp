#include <gtest/gtest.h>

#include <vcoarse/errors.hpp>
#include <vcoarse/ogroup.hpp>

#include "generators.hpp"

namespace vcoarse
{
namespace
{

TEST(Rational, ParseAndPrint)
{
    EXPECT_EQ(parse_rational("-7/4"), Rational(-7, 4));
    EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
    EXPECT_EQ(to_string(Rational(3, 1)), "3");
    EXPECT_EQ(to_string(Rational(-1, 8)), "-1/8");
    EXPECT_THROW(parse_rational("1/0"), StructuralError);
    EXPECT_THROW(parse_rational("x"), StructuralError);
}

TEST(Rational, PrimeAndValuationHelpers)
{
    EXPECT_TRUE(is_prime(2));
    EXPECT_TRUE(is_prime(97));
    EXPECT_FALSE(is_prime(1));
    EXPECT_FALSE(is_prime(91));
    EXPECT_EQ(p_adic_valuation(Rational(12, 5), 2), 2);
    EXPECT_EQ(p_adic_valuation(Rational(1, 27), 3), -3);
    EXPECT_TRUE(denominator_is_p_power(Rational(5, 8), 2));
    EXPECT_FALSE(denominator_is_p_power(Rational(1, 6), 2));
}

TEST(GroupDescriptor, Membership)
{
    const GroupDescriptor g({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}}, 3);
    EXPECT_TRUE(g.contains(g.element({2, Rational(1, 9)})));
    EXPECT_FALSE(g.contains(GroupElement({Rational(1, 3), 0})));
    EXPECT_FALSE(g.contains(GroupElement({0, Rational(1, 2)})));
    EXPECT_THROW(g.require(GroupElement({Rational(1, 2), 0})), StructuralError);
    EXPECT_THROW(g.require(GroupElement({0})), StructuralError);
}

TEST(GroupDescriptor, LexicographicOrder)
{
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::Rat, 2);
    EXPECT_LT(g.element({0, 100}), g.element({Rational(1, 1000), -100}));
    EXPECT_LT(g.element({-1, 5}), g.zero());
    EXPECT_EQ(g.element({0, -3}).sign(), -1);
}

TEST(GroupDescriptor, QuotientSmallestPositive)
{
    const GroupDescriptor pdiv = GroupDescriptor::uniform(1, ComponentKind::PDiv, 2);
    EXPECT_FALSE(pdiv.quotient_has_smallest_positive(pdiv.trivial_subgroup()));
    const GroupDescriptor z = GroupDescriptor::uniform(1, ComponentKind::Int, 2);
    EXPECT_TRUE(z.quotient_has_smallest_positive(z.trivial_subgroup()));
    const GroupDescriptor mixed({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}}, 2);
    EXPECT_TRUE(mixed.quotient_has_smallest_positive(mixed.subgroup(1)));
    EXPECT_FALSE(mixed.quotient_has_smallest_positive(mixed.subgroup(0)));
}

// Brute force: the smallest positive coset of G/H_1 for G = Z x Z[1/2] is found by searching
// bounded coordinates.
TEST(GroupDescriptor, SmallestPositiveCosetByEnumeration)
{
    const GroupDescriptor g({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}}, 2);
    std::optional<Rational> least;
    for (long a = -3; a <= 3; ++a) {
        for (long b = -16; b <= 16; ++b) {
            const GroupElement x = g.element({a, Rational(b, 4)});
            const GroupElement coset = x.truncated(1);
            if (coset.sign() > 0 && (!least || coset[0] < *least)) {
                least = coset[0];
            }
        }
    }
    ASSERT_TRUE(least.has_value());
    EXPECT_EQ(*least, Rational(1));
    EXPECT_TRUE(g.quotient_has_smallest_positive(g.subgroup(1)));
}

TEST(GroupDescriptor, ArchimedeanClassSubgroups)
{
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, 3);
    auto [p0, s0] = g.archimedean_class_subgroups(g.basis(0));
    EXPECT_EQ(p0.level(), 0u);
    EXPECT_EQ(s0.level(), 1u);
    auto [p1, s1] = g.archimedean_class_subgroups(g.basis(1));
    EXPECT_EQ(p1.level(), 1u);
    EXPECT_TRUE(s1.is_trivial());
    auto [p2, s2] = g.archimedean_class_subgroups(g.element({0, Rational(-3, 9)}));
    EXPECT_EQ(p2.level(), 1u);
    EXPECT_EQ(s2.level(), 2u);
    EXPECT_THROW(g.archimedean_class_subgroups(g.zero()), DegenerateInputError);
}

TEST(GroupDescriptor, ConvexChainAndFlags)
{
    const GroupDescriptor g = GroupDescriptor::uniform(3, ComponentKind::PDiv, 2);
    const auto chain = g.convex_subgroups();
    ASSERT_EQ(chain.size(), 4u);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        EXPECT_TRUE(chain[i + 1].is_subset_of(chain[i]));
        EXPECT_FALSE(chain[i].is_subset_of(chain[i + 1]));
    }
    EXPECT_TRUE(chain.front().is_whole());
    EXPECT_TRUE(chain.back().is_trivial());
    EXPECT_FALSE(chain.back().principal());
    EXPECT_FALSE(chain.front().subprincipal());
    EXPECT_TRUE(g.is_p_divisible());
    EXPECT_TRUE(g.satisfies_drvg());
    const GroupDescriptor z({{ComponentKind::PDiv, 1}, {ComponentKind::Int, 1}}, 2);
    EXPECT_FALSE(z.is_p_divisible());
    EXPECT_FALSE(z.satisfies_drvg());
    EXPECT_EQ(g.concat(z).rank(), 5u);
}

class OrderedGroupProperties : public ::testing::Test
{
protected:
    static constexpr int kIterations = 2000;
    testing::Gen gen{0x5eed01};
    const std::vector<GroupDescriptor> groups{
        GroupDescriptor::uniform(1, ComponentKind::PDiv, 2),
        GroupDescriptor::uniform(2, ComponentKind::PDiv, 3),
        GroupDescriptor({{ComponentKind::Int, 1}, {ComponentKind::PDiv, 1}, {ComponentKind::Rat, 1}}, 5),
    };
};

TEST_F(OrderedGroupProperties, TotalOrderAndTranslationInvariance)
{
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const GroupElement a = gen.element(g, 2, 3);
        const GroupElement b = gen.element(g, 2, 3);
        const GroupElement c = gen.element(g, 2, 3);
        const int trichotomy = (a < b) + (a == b) + (b < a);
        ASSERT_EQ(trichotomy, 1);
        if (a < b) {
            ASSERT_LT(a + c, b + c);
            if (b < c) {
                ASSERT_LT(a, c);
            }
        }
        ASSERT_EQ((a - b) + b, a);
        ASSERT_TRUE(g.contains(a + b));
        ASSERT_TRUE(g.contains(-a));
    }
}

TEST_F(OrderedGroupProperties, ConvexSubgroupsClosedAndConvex)
{
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const std::size_t k = static_cast<std::size_t>(gen.integer(0, static_cast<long>(g.rank())));
        const ConvexSubgroup h = g.subgroup(k);
        const GroupElement a = gen.element(g, 2, 3).truncated(g.rank());
        GroupElement a_in = a;
        {
            std::vector<Rational> c = a.coords();
            for (std::size_t j = 0; j < k; ++j) {
                c[j] = 0;
            }
            a_in = GroupElement(c);
        }
        const GroupElement b = gen.element(g, 2, 3);
        ASSERT_TRUE(h.contains(a_in));
        ASSERT_TRUE(h.contains(-a_in));
        if (h.contains(b)) {
            ASSERT_TRUE(h.contains(a_in + b));
        }
        // |b| <= |a_in| forces b into H.
        const GroupElement abs_a = a_in.sign() < 0 ? -a_in : a_in;
        const GroupElement abs_b = b.sign() < 0 ? -b : b;
        if (abs_b <= abs_a) {
            ASSERT_TRUE(h.contains(b));
        }
    }
}

TEST_F(OrderedGroupProperties, ArchimedeanClassIgnoresIntegerMultiples)
{
    for (int i = 0; i < kIterations; ++i) {
        const GroupDescriptor &g = gen.pick(groups);
        const GroupElement x = gen.nonzero_element(g, 2, 3);
        long n = gen.integer(-9, 9);
        if (n == 0) {
            n = 1;
        }
        const auto a = g.archimedean_class_subgroups(x);
        const auto b = g.archimedean_class_subgroups(Rational(n) * x);
        ASSERT_EQ(a.first, b.first);
        ASSERT_EQ(a.second, b.second);
    }
}

// H_k agrees with the convex closure of its basis vectors on a small grid: an element lies
// in the closure iff it is bounded by a multiple of some element of H_k.
TEST_F(OrderedGroupProperties, SubgroupMembershipMatchesConvexClosureOnGrid)
{
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, 2);
    std::vector<GroupElement> points;
    for (long a = -8; a <= 8; ++a) {
        for (long b = -8; b <= 8; ++b) {
            points.push_back(g.element({Rational(a, 4), Rational(b, 4)}));
        }
    }
    for (std::size_t k = 0; k <= g.rank(); ++k) {
        const ConvexSubgroup h = g.subgroup(k);
        std::vector<GroupElement> generators;
        for (std::size_t j = k; j < g.rank(); ++j) {
            generators.push_back(g.basis(j, 8));
        }
        for (const GroupElement &x : points) {
            bool in_closure = x.is_zero();
            for (const GroupElement &e : generators) {
                in_closure = in_closure || (-e <= x && x <= e);
            }
            ASSERT_EQ(h.contains(x), in_closure) << x.str() << " level " << k;
        }
    }
}

} // namespace
} // namespace vcoarse

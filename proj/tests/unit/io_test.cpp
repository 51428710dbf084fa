#include <gtest/gtest.h>

#include <algorithm>

#include <vcoarse/errors.hpp>
#include <vcoarse/io.hpp>

#include "generators.hpp"

namespace vcoarse
{
namespace
{

bool lists_field(const SchemaError &e, const std::string &prefix)
{
    return std::any_of(e.fields().begin(), e.fields().end(),
                       [&](const std::string &f) { return f.rfind(prefix, 0) == 0; });
}

TEST(Io, GroupElements)
{
    EXPECT_EQ(parse_group_element("(1/2, 0)", 2), GroupElement({Rational(1, 2), 0}));
    EXPECT_EQ(parse_group_element(" -1/3 ", 1), GroupElement({Rational(-1, 3)}));
    EXPECT_THROW(parse_group_element("(1,2", 2), StructuralError);
    EXPECT_THROW(parse_group_element("(1,2,3)", 2), StructuralError);
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, 3);
    EXPECT_EQ(element_from_json(Json::array({"1/3", 2}), g), g.element({Rational(1, 3), 2}));
    EXPECT_THROW(element_from_json(Json::array({"1/2", 0}), g), StructuralError);
    EXPECT_THROW(element_from_json(Json(true), g), StructuralError);
}

TEST(Io, GroupSchemaErrorsListEveryField)
{
    try {
        group_from_json({{"rank", 3}, {"components", {"int", "real"}}, {"p", 4}, {"colour", 1}});
        FAIL() << "accepted a bad group";
    } catch (const SchemaError &e) {
        EXPECT_TRUE(lists_field(e, "group.components[1]"));
        EXPECT_TRUE(lists_field(e, "group.rank"));
        EXPECT_TRUE(lists_field(e, "group.p"));
        EXPECT_TRUE(lists_field(e, "group.colour"));
    }
    EXPECT_THROW(group_from_json({{"components", {"int"}}, {"p", 2}}), SchemaError);
}

TEST(Io, GroupRoundTrip)
{
    const GroupDescriptor g({{ComponentKind::Int, Rational(1, 3)}, {ComponentKind::PDiv, 1}, {ComponentKind::Rat, 2}}, 5);
    const GroupDescriptor back = group_from_json(to_json(g));
    EXPECT_EQ(to_json(back), to_json(g));
    EXPECT_TRUE(back.contains(GroupElement({Rational(2, 3), Rational(1, 25), Rational(1, 7)})));
}

TEST(Io, SegmentSchema)
{
    const GroupDescriptor g = GroupDescriptor::uniform(2, ComponentKind::PDiv, 2);
    EXPECT_THROW(segment_from_json({{"direction", "up"}, {"kind", "whole"}}, g), SchemaError);
    EXPECT_THROW(segment_from_json({{"direction", "final"}, {"kind", "ray"}}, g), SchemaError);
    EXPECT_THROW(segment_from_json({{"direction", "final"}, {"kind", "subgroup"}, {"level", 3}}, g), SchemaError);
    EXPECT_THROW(segment_from_json({{"direction", "final"}, {"kind", "element"}, {"gamma", "(1/3,0)"}}, g), SchemaError);
}

class IoProperties : public ::testing::Test
{
protected:
    static constexpr int kIterations = 2000;
    testing::Gen gen{0x10};
};

TEST_F(IoProperties, SegmentsRoundTrip)
{
    for (int i = 0; i < kIterations; ++i) {
        const std::size_t rank = static_cast<std::size_t>(gen.integer(1, 3));
        std::vector<Component> comps;
        for (std::size_t c = 0; c < rank; ++c) {
            comps.push_back({gen.pick(std::vector<ComponentKind>{ComponentKind::Int, ComponentKind::PDiv, ComponentKind::Rat}), 1});
        }
        const GroupDescriptor g(comps, gen.coin() ? 2 : 3);
        const Segment s = gen.segment(g, gen.coin() ? Direction::Final : Direction::Initial, 2, 2);
        const Json j = to_json(s);
        ASSERT_EQ(segment_from_json(j, g), s) << j.dump();
        ASSERT_EQ(to_json(segment_from_json(j, g)), j);
    }
}

TEST_F(IoProperties, SeriesRoundTrip)
{
    const std::vector<FieldModel> models{
        FieldModel("a", FiniteField(2, 1), GroupDescriptor::uniform(1, ComponentKind::PDiv, 2)),
        FieldModel("b", FiniteField(3, 1), GroupDescriptor::uniform(2, ComponentKind::PDiv, 3)),
        FieldModel("c", FiniteField(5, 1), GroupDescriptor::uniform(2, ComponentKind::Int, 5)),
    };
    for (int i = 0; i < kIterations; ++i) {
        const FieldModel &k = gen.pick(models);
        SeriesElement::Terms terms;
        const long n = gen.integer(0, 4);
        for (long t = 0; t < n; ++t) {
            terms[gen.element(k.value_group, 2, 3)] = static_cast<Coef>(gen.integer(1, k.residue.order() - 1));
        }
        const SeriesElement s(std::move(terms));
        const std::string text = format_series(s);
        ASSERT_EQ(parse_series(text, k), s) << text;
    }
}

TEST(Io, SeriesSyntax)
{
    const FieldModel k("K", FiniteField(3, 1), GroupDescriptor::uniform(2, ComponentKind::PDiv, 3));
    const GroupDescriptor &g = k.value_group;
    EXPECT_EQ(parse_series("t^(1,-1) - 2", k),
              add(k, SeriesElement::monomial(g.element({1, -1})), SeriesElement::monomial(g.zero(), 1)));
    EXPECT_EQ(parse_series("t", k), SeriesElement::monomial(g.basis(0)));
    try {
        parse_series("t^(1/2,0)", k);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.position(), 2u);
    }
    try {
        parse_series("t t", k);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.position(), 2u);
    }
    EXPECT_THROW(parse_series("  ", k), ParseError);
}

TEST(Io, ExtensionSchemaErrors)
{
    const GroupDescriptor g = GroupDescriptor::uniform(1, ComponentKind::PDiv, 2);
    const FieldModel k = field_from_json(Json::object(), g);
    EXPECT_THROW(extension_from_json({{"kind", "galois"}}, k, 4), SchemaError);
    EXPECT_THROW(extension_from_json({{"kind", "artin_schreier"}}, k, 4), SchemaError);
    EXPECT_NO_THROW(extension_from_json({{"kind", "artin_schreier"}, {"rhs", "t^-1"}}, k, 4));
}

TEST(Io, DumpIsSortedWithTrailingNewline)
{
    const std::string text = dump(Json{{"b", 1}, {"a", Json::array({1, 2})}});
    EXPECT_EQ(text.back(), '\n');
    EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
    EXPECT_EQ(Json::parse(text), (Json{{"a", Json::array({1, 2})}, {"b", 1}}));
}

} // namespace
} // namespace vcoarse

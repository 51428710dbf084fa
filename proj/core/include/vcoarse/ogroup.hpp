#ifndef VCOARSE_OGROUP_HPP
#define VCOARSE_OGROUP_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <vcoarse/rational.hpp>

namespace vcoarse
{

// Finite-rank Hahn sums with lexicographic order.
//
// Index 0 is the dominant archimedean class: an element is positive iff its first
// nonzero coordinate is positive. Convex subgroups are H_k = {x : x_j = 0 for j < k},
// k = 0..n, so a LARGER level is a SMALLER subgroup (H_0 = whole group, H_n = {0}).

enum class ComponentKind { Int, PDiv, Rat };

std::string to_string(ComponentKind kind);

// One archimedean component: unit * Z, unit * Z[1/p] or unit * Q.
struct Component {
    ComponentKind kind = ComponentKind::Int;
    Rational unit{1};

    bool dense() const
    {
        return kind != ComponentKind::Int;
    }
    bool contains(const Rational &x, long p) const;

    friend bool operator==(const Component &, const Component &) = default;
};

class GroupElement
{
public:
    GroupElement() = default;
    explicit GroupElement(std::vector<Rational> coords) : coords_(std::move(coords)) {}

    std::size_t rank() const
    {
        return coords_.size();
    }
    const Rational &operator[](std::size_t i) const
    {
        return coords_[i];
    }
    const std::vector<Rational> &coords() const
    {
        return coords_;
    }

    bool is_zero() const;
    // Index of the first nonzero coordinate; nullopt for 0.
    std::optional<std::size_t> leading_index() const;
    int sign() const;

    GroupElement operator-() const;
    friend GroupElement operator+(const GroupElement &a, const GroupElement &b);
    friend GroupElement operator-(const GroupElement &a, const GroupElement &b);
    friend GroupElement operator*(const Rational &s, const GroupElement &a);

    // Coordinates at index >= level replaced by zero (canonical representative modulo H_level).
    GroupElement truncated(std::size_t level) const;

    // Lexicographic order; ranks must agree (StructuralError otherwise).
    friend std::strong_ordering operator<=>(const GroupElement &a, const GroupElement &b);
    friend bool operator==(const GroupElement &a, const GroupElement &b);

    std::string str() const;

private:
    std::vector<Rational> coords_;
};

class ConvexSubgroup
{
public:
    ConvexSubgroup(std::size_t level, std::size_t rank);

    std::size_t level() const
    {
        return level_;
    }
    std::size_t rank() const
    {
        return rank_;
    }
    // Smallest convex subgroup containing some element: every level except {0}.
    bool principal() const
    {
        return level_ + 1 <= rank_;
    }
    // Largest convex subgroup missing some element: every level except the whole group.
    bool subprincipal() const
    {
        return level_ >= 1;
    }
    bool is_whole() const
    {
        return level_ == 0;
    }
    bool is_trivial() const
    {
        return level_ == rank_;
    }
    bool contains(const GroupElement &x) const;
    // Inclusion of subgroups: H_k is a subset of H_m iff k >= m.
    bool is_subset_of(const ConvexSubgroup &other) const
    {
        return level_ >= other.level_;
    }

    friend bool operator==(const ConvexSubgroup &, const ConvexSubgroup &) = default;

private:
    std::size_t level_;
    std::size_t rank_;
};

class GroupDescriptor
{
public:
    GroupDescriptor(std::vector<Component> components, long p);

    static GroupDescriptor uniform(std::size_t rank, ComponentKind kind, long p);

    std::size_t rank() const
    {
        return components_.size();
    }
    long prime() const
    {
        return p_;
    }
    const Component &component(std::size_t i) const
    {
        return components_.at(i);
    }
    const std::vector<Component> &components() const
    {
        return components_;
    }

    bool contains(const GroupElement &x) const;
    // Throws StructuralError naming the offending coordinate.
    void require(const GroupElement &x) const;
    GroupElement element(std::vector<Rational> coords) const;
    GroupElement zero() const;
    // unit * 1_i, the generator of component i.
    GroupElement basis(std::size_t i) const;
    GroupElement basis(std::size_t i, const Rational &scale) const;

    std::strong_ordering compare(const GroupElement &a, const GroupElement &b) const;

    ConvexSubgroup subgroup(std::size_t level) const;
    ConvexSubgroup trivial_subgroup() const
    {
        return subgroup(rank());
    }
    // H_0 supset H_1 supset ... supset H_n.
    std::vector<ConvexSubgroup> convex_subgroups() const;

    bool quotient_has_smallest_positive(const ConvexSubgroup &h) const;

    // (principal, subprincipal) convex subgroups of the archimedean class of gamma.
    // gamma = 0 is rejected with DegenerateInputError.
    std::pair<ConvexSubgroup, ConvexSubgroup> archimedean_class_subgroups(const GroupElement &gamma) const;

    bool is_p_divisible() const;
    // No archimedean component is discrete.
    bool satisfies_drvg() const;

    // Hahn sum with this group dominant and `inner` below it.
    GroupDescriptor concat(const GroupDescriptor &inner) const;

    friend bool operator==(const GroupDescriptor &, const GroupDescriptor &) = default;

private:
    std::vector<Component> components_;
    long p_;
};

} // namespace vcoarse

#endif

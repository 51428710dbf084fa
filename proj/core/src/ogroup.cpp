#include <vcoarse/errors.hpp>
#include <vcoarse/ogroup.hpp>

namespace vcoarse
{

std::string to_string(ComponentKind kind)
{
    switch (kind) {
        case ComponentKind::Int:
            return "int";
        case ComponentKind::PDiv:
            return "pdiv";
        case ComponentKind::Rat:
            return "rat";
    }
    return "?";
}

bool Component::contains(const Rational &x, long p) const
{
    const Rational scaled = x / unit;
    switch (kind) {
        case ComponentKind::Int:
            return is_integer(scaled);
        case ComponentKind::PDiv:
            return denominator_is_p_power(scaled, p);
        case ComponentKind::Rat:
            return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// GroupElement

bool GroupElement::is_zero() const
{
    for (const auto &c : coords_) {
        if (c != 0) {
            return false;
        }
    }
    return true;
}

std::optional<std::size_t> GroupElement::leading_index() const
{
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] != 0) {
            return i;
        }
    }
    return std::nullopt;
}

int GroupElement::sign() const
{
    const auto lead = leading_index();
    if (!lead) {
        return 0;
    }
    return sgn(coords_[*lead]);
}

namespace
{

void require_same_rank(const GroupElement &a, const GroupElement &b)
{
    if (a.rank() != b.rank()) {
        throw StructuralError("group elements of rank " + std::to_string(a.rank()) + " and "
                              + std::to_string(b.rank()) + " are not comparable");
    }
}

} // namespace

GroupElement GroupElement::operator-() const
{
    std::vector<Rational> out(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        out[i] = -coords_[i];
    }
    return GroupElement(std::move(out));
}

GroupElement operator+(const GroupElement &a, const GroupElement &b)
{
    require_same_rank(a, b);
    std::vector<Rational> out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) {
        out[i] = a.coords_[i] + b.coords_[i];
    }
    return GroupElement(std::move(out));
}

GroupElement operator-(const GroupElement &a, const GroupElement &b)
{
    require_same_rank(a, b);
    std::vector<Rational> out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) {
        out[i] = a.coords_[i] - b.coords_[i];
    }
    return GroupElement(std::move(out));
}

GroupElement operator*(const Rational &s, const GroupElement &a)
{
    std::vector<Rational> out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) {
        out[i] = s * a.coords_[i];
    }
    return GroupElement(std::move(out));
}

GroupElement GroupElement::truncated(std::size_t level) const
{
    auto out = coords_;
    for (std::size_t i = level; i < out.size(); ++i) {
        out[i] = 0;
    }
    return GroupElement(std::move(out));
}

std::strong_ordering operator<=>(const GroupElement &a, const GroupElement &b)
{
    require_same_rank(a, b);
    for (std::size_t i = 0; i < a.rank(); ++i) {
        const int c = cmp(a.coords_[i], b.coords_[i]);
        if (c < 0) {
            return std::strong_ordering::less;
        }
        if (c > 0) {
            return std::strong_ordering::greater;
        }
    }
    return std::strong_ordering::equal;
}

bool operator==(const GroupElement &a, const GroupElement &b)
{
    return (a <=> b) == std::strong_ordering::equal;
}

std::string GroupElement::str() const
{
    if (coords_.size() == 1) {
        return to_string(coords_[0]);
    }
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += to_string(coords_[i]);
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// ConvexSubgroup

ConvexSubgroup::ConvexSubgroup(std::size_t level, std::size_t rank) : level_(level), rank_(rank)
{
    if (level > rank) {
        throw StructuralError("convex subgroup level " + std::to_string(level) + " exceeds rank "
                              + std::to_string(rank));
    }
}

bool ConvexSubgroup::contains(const GroupElement &x) const
{
    if (x.rank() != rank_) {
        throw StructuralError("element rank does not match subgroup rank");
    }
    for (std::size_t j = 0; j < level_; ++j) {
        if (x[j] != 0) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// GroupDescriptor

GroupDescriptor::GroupDescriptor(std::vector<Component> components, long p)
    : components_(std::move(components)), p_(p)
{
    if (components_.empty()) {
        throw StructuralError("group rank must be at least 1");
    }
    if (!is_prime(p_)) {
        throw StructuralError("p = " + std::to_string(p_) + " is not prime");
    }
    for (const auto &c : components_) {
        if (c.unit <= 0) {
            throw StructuralError("component unit must be positive");
        }
    }
}

GroupDescriptor GroupDescriptor::uniform(std::size_t rank, ComponentKind kind, long p)
{
    return GroupDescriptor(std::vector<Component>(rank, Component{kind, 1}), p);
}

bool GroupDescriptor::contains(const GroupElement &x) const
{
    if (x.rank() != rank()) {
        return false;
    }
    for (std::size_t i = 0; i < rank(); ++i) {
        if (!components_[i].contains(x[i], p_)) {
            return false;
        }
    }
    return true;
}

void GroupDescriptor::require(const GroupElement &x) const
{
    if (x.rank() != rank()) {
        throw StructuralError("element " + x.str() + " has rank " + std::to_string(x.rank())
                              + ", group has rank " + std::to_string(rank()));
    }
    for (std::size_t i = 0; i < rank(); ++i) {
        if (!components_[i].contains(x[i], p_)) {
            throw StructuralError("coordinate " + std::to_string(i) + " of " + x.str()
                                  + " is not in component " + to_string(components_[i].kind));
        }
    }
}

GroupElement GroupDescriptor::element(std::vector<Rational> coords) const
{
    GroupElement x(std::move(coords));
    require(x);
    return x;
}

GroupElement GroupDescriptor::zero() const
{
    return GroupElement(std::vector<Rational>(rank()));
}

GroupElement GroupDescriptor::basis(std::size_t i) const
{
    return basis(i, 1);
}

GroupElement GroupDescriptor::basis(std::size_t i, const Rational &scale) const
{
    std::vector<Rational> c(rank());
    c.at(i) = scale * components_[i].unit;
    return GroupElement(std::move(c));
}

std::strong_ordering GroupDescriptor::compare(const GroupElement &a, const GroupElement &b) const
{
    require(a);
    require(b);
    return a <=> b;
}

ConvexSubgroup GroupDescriptor::subgroup(std::size_t level) const
{
    return ConvexSubgroup(level, rank());
}

std::vector<ConvexSubgroup> GroupDescriptor::convex_subgroups() const
{
    std::vector<ConvexSubgroup> out;
    for (std::size_t k = 0; k <= rank(); ++k) {
        out.emplace_back(k, rank());
    }
    return out;
}

bool GroupDescriptor::quotient_has_smallest_positive(const ConvexSubgroup &h) const
{
    if (h.rank() != rank()) {
        throw StructuralError("subgroup does not belong to this group");
    }
    if (h.is_whole()) {
        return false;
    }
    // The smallest archimedean class surviving in G/H_k is component k-1.
    return !components_[h.level() - 1].dense();
}

std::pair<ConvexSubgroup, ConvexSubgroup>
GroupDescriptor::archimedean_class_subgroups(const GroupElement &gamma) const
{
    require(gamma);
    const auto lead = gamma.leading_index();
    if (!lead) {
        throw DegenerateInputError("the zero element has no archimedean class");
    }
    return {subgroup(*lead), subgroup(*lead + 1)};
}

bool GroupDescriptor::is_p_divisible() const
{
    return satisfies_drvg();
}

bool GroupDescriptor::satisfies_drvg() const
{
    for (const auto &c : components_) {
        if (!c.dense()) {
            return false;
        }
    }
    return true;
}

GroupDescriptor GroupDescriptor::concat(const GroupDescriptor &inner) const
{
    if (inner.prime() != p_) {
        throw StructuralError("cannot concatenate groups over different primes");
    }
    auto comps = components_;
    comps.insert(comps.end(), inner.components_.begin(), inner.components_.end());
    return GroupDescriptor(std::move(comps), p_);
}

} // namespace vcoarse

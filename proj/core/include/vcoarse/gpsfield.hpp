#ifndef VCOARSE_GPSFIELD_HPP
#define VCOARSE_GPSFIELD_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <vcoarse/finite_field.hpp>
#include <vcoarse/ogroup.hpp>
#include <vcoarse/segment.hpp>

namespace vcoarse
{

// Generalized power series field F_q((t^G)) truncated to finite support, plus pattern
// series with geometric exponent tails for the immediate elements.
struct FieldModel {
    std::string name;
    FiniteField residue;
    GroupDescriptor value_group;
    bool perfect_hull = true;
    // Declared, never computed.
    bool henselian = true;

    FieldModel(std::string name, FiniteField residue, GroupDescriptor value_group, bool perfect_hull = true,
               bool henselian = true);

    unsigned characteristic() const
    {
        return residue.characteristic();
    }
};

// Finite sum of c * t^e with nonzero coefficients.
class SeriesElement
{
public:
    using Terms = std::map<GroupElement, Coef>;

    SeriesElement() = default;
    explicit SeriesElement(Terms terms);

    static SeriesElement monomial(const GroupElement &e, Coef c = 1);

    const Terms &terms() const
    {
        return terms_;
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    // nullopt stands for v(0) = infinity.
    std::optional<GroupElement> valuation() const;
    Coef coefficient(const GroupElement &e) const;

    friend bool operator==(const SeriesElement &, const SeriesElement &) = default;

private:
    Terms terms_;
};

SeriesElement add(const FieldModel &k, const SeriesElement &a, const SeriesElement &b);
SeriesElement sub(const FieldModel &k, const SeriesElement &a, const SeriesElement &b);
SeriesElement neg(const FieldModel &k, const SeriesElement &a);
SeriesElement mul(const FieldModel &k, const SeriesElement &a, const SeriesElement &b);
SeriesElement scale(const FieldModel &k, Coef c, const SeriesElement &a);
SeriesElement frobenius(const FieldModel &k, const SeriesElement &a);
// Throws StructuralError when an exponent is outside the value group.
void require_element(const FieldModel &k, const SeriesElement &a);

// Geometric tail sum_{i >= 0} c * t^(ray * p^(start - i)).
//
// `ray` is normalized so that its leading coordinate has p-adic valuation 0; every
// exponent on the tail is then ray * p^j for an integer j. Rays are negative so the
// exponents increase toward 0.
struct Tail {
    Coef coef = 0;
    GroupElement ray;
    long start = 0;
    long p = 2;

    GroupElement exponent(long j) const;
    GroupElement first_exponent() const
    {
        return exponent(start);
    }

    friend bool operator==(const Tail &, const Tail &) = default;
};

// Ray key and index of an exponent: e = ray * p^index.
std::pair<GroupElement, long> ray_of(const GroupElement &e, long p);

// finite_part + sum of tails, kept canonical: at most one tail per ray, no finite term on
// a ray at or beyond the tail start, no finite term that just extends the tail, no zeros.
class PatternSeries
{
public:
    PatternSeries() = default;
    PatternSeries(const FieldModel &k, SeriesElement finite, std::vector<Tail> tails);

    // sum_{i>=0} c * t^(e * p^-i): the tail whose first exponent is e.
    static PatternSeries geometric(const FieldModel &k, const GroupElement &first, Coef c = 1);

    const SeriesElement &finite_part() const
    {
        return finite_;
    }
    const std::vector<Tail> &tails() const
    {
        return tails_;
    }
    bool is_finite() const
    {
        return tails_.empty();
    }

    std::optional<GroupElement> valuation() const;
    // finite part plus the first `depth` terms of every tail.
    SeriesElement truncate(long depth) const;

    friend bool operator==(const PatternSeries &, const PatternSeries &) = default;

private:
    void canonicalize(const FieldModel &k);

    SeriesElement finite_;
    std::vector<Tail> tails_;
};

PatternSeries add(const FieldModel &k, const PatternSeries &a, const PatternSeries &b);
PatternSeries sub(const FieldModel &k, const PatternSeries &a, const PatternSeries &b);
PatternSeries neg(const FieldModel &k, const PatternSeries &a);
PatternSeries scale(const FieldModel &k, Coef c, const PatternSeries &a);
PatternSeries frobenius(const FieldModel &k, const PatternSeries &a);
PatternSeries lift(const FieldModel &k, const SeriesElement &a);

// Root of X^p - X = c * t^e for e < 0: sum_{i>=1} c^(1/p^i) t^(e/p^i).
PatternSeries artin_schreier_root(const FieldModel &k, const GroupElement &e, Coef c = 1);

// Exact v(theta - c); nullopt when theta == c.
std::optional<GroupElement> val_diff(const FieldModel &k, const PatternSeries &theta, const SeriesElement &c);

// b_j = finite part + first j terms of every tail.
SeriesElement schedule_element(const PatternSeries &theta, long j);

struct ApproachResult {
    Segment segment;
    // v(theta - b_j) for j = 0..depth-1.
    std::vector<GroupElement> schedule;
    long depth = 0;
    // Several tails: the segment is a certified lower bound for v(theta - K).
    bool partial = false;
};

// v(theta - K) from the approximation schedule. NotImmediateError when theta has no tail
// or the schedule values fail to increase strictly.
ApproachResult approach_segment(const FieldModel &k, const PatternSeries &theta, long depth);

// Composite v = w o wbar: value group outer (dominant) followed by inner.
class ComposedModel
{
public:
    // StructuralError when the coefficient fields or primes disagree.
    ComposedModel(const FieldModel &outer, const FieldModel &inner);
    // Composition with the trivial valuation on the residue field: nothing changes.
    explicit ComposedModel(const FieldModel &outer);

    const FieldModel &model() const
    {
        return model_;
    }
    std::size_t outer_rank() const
    {
        return outer_rank_;
    }
    // Convex subgroup of the composite group that defines w.
    ConvexSubgroup coarsening_subgroup() const
    {
        return model_.value_group.subgroup(outer_rank_);
    }
    // wa = va / H: the outer coordinates.
    GroupElement project_outer(const GroupElement &alpha) const;
    GroupElement embed_outer(const GroupElement &gamma) const;
    GroupElement embed_inner(const GroupElement &gamma) const;

    // Preimage {alpha : w alpha in s}.
    Segment lift_outer(const Segment &s) const;
    // Value set inside the inner class, extended by everything below (INITIAL) or above
    // (FINAL) the coarsening.
    Segment lift_inner(const Segment &s) const;

private:
    FieldModel model_;
    std::size_t outer_rank_;
};

} // namespace vcoarse

#endif

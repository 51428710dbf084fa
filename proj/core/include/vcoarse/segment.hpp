#ifndef VCOARSE_SEGMENT_HPP
#define VCOARSE_SEGMENT_HPP

#include <string>
#include <utility>

#include <vcoarse/ogroup.hpp>

namespace vcoarse
{

enum class Direction { Final, Initial };

std::string to_string(Direction d);

// Initial or final segment (cut) of a Hahn-sum group, in canonical form.
//
// A segment is stored as (direction, level k, shift d, closed). With
// x = (alpha - d) truncated to its first k coordinates:
//
//   FINAL   open:  x > 0      closed: x >= 0
//   INITIAL open:  x < 0      closed: x <= 0
//
// Level n (the rank) is an element cut {alpha > d}, {alpha >= d}, ...; lower levels are
// cuts around the coset d + H_k. Level 0 is the empty set (open) or the whole group (closed).
//
// Canonical form: d has coordinates >= k zeroed, and an open cut whose class (component
// k-1) is discrete is rewritten as the equivalent closed cut one unit further in. Two
// canonical segments over the same group are equal as sets iff their fields are equal.
class Segment
{
public:
    Segment(GroupDescriptor group, Direction direction, std::size_t level, GroupElement shift, bool closed);

    static Segment element_cut(const GroupDescriptor &g, Direction d, const GroupElement &gamma, bool closed);
    // {alpha : alpha - shift > H} (FINAL) or < H (INITIAL); closed variant allows equality mod H.
    static Segment subgroup_cut(const GroupDescriptor &g, Direction d, std::size_t level,
                                const GroupElement &shift, bool closed = false);
    static Segment whole(const GroupDescriptor &g, Direction d = Direction::Final);
    static Segment empty(const GroupDescriptor &g, Direction d = Direction::Final);

    const GroupDescriptor &group() const
    {
        return group_;
    }
    Direction direction() const
    {
        return direction_;
    }
    std::size_t level() const
    {
        return level_;
    }
    const GroupElement &shift() const
    {
        return shift_;
    }
    bool closed() const
    {
        return closed_;
    }

    bool is_element_cut() const
    {
        return level_ == group_.rank();
    }
    bool is_empty() const
    {
        return level_ == 0 && !closed_;
    }
    bool is_whole() const
    {
        return level_ == 0 && closed_;
    }
    // Minimum (FINAL) or maximum (INITIAL) when attained.
    bool has_extremum() const
    {
        return closed_ && is_element_cut();
    }

    bool contains(const GroupElement &alpha) const;

    friend bool operator==(const Segment &a, const Segment &b);

    std::string str() const;

private:
    void canonicalize();

    GroupDescriptor group_;
    Direction direction_;
    std::size_t level_;
    GroupElement shift_;
    bool closed_;
};

// Geometric sequence cut: union over k >= start of {alpha <= limit - scale/p^k} (INITIAL),
// or of {alpha >= limit + scale/p^k} (FINAL). Constructor-only; see normalize().
struct SeqCut {
    Direction direction = Direction::Initial;
    GroupElement limit;
    GroupElement scale;
    long start = 0;
};

// Collapses a sequence cut to canonical form. scale = 0 is a DegenerateInputError.
Segment normalize(const GroupDescriptor &g, const SeqCut &cut);
// Canonical forms are already normal; returns a copy (idempotence is structural).
Segment normalize(const Segment &s);

ConvexSubgroup invariance_group(const Segment &s);

Segment shift(const Segment &s, const GroupElement &gamma);
Segment negate(const Segment &s);
// Minkowski sum of two segments of the same direction.
Segment sum(const Segment &a, const Segment &b);
// m-fold Minkowski sum, m >= 1.
Segment scale_int(const Segment &s, long m);

// Containment of two segments of the same direction.
bool subset_of(const Segment &a, const Segment &b);

// {gamma : gamma + n is a subset of p} for FINAL segments. This is the value set of the
// colon ideal (P : N).
Segment residual(const Segment &p, const Segment &n);

// O_L-ideal (or fractional ideal) described by its value set.
struct IdealDescriptor {
    Segment values;
    std::string label;

    // Principal iff the value set has a minimum.
    bool min_attained() const
    {
        return values.has_extremum();
    }
    bool principal() const
    {
        return min_attained();
    }

    friend bool operator==(const IdealDescriptor &a, const IdealDescriptor &b)
    {
        return a.values == b.values;
    }
};

IdealDescriptor make_ideal(Segment values, std::string label = {});

// Value set of the coarsening O(H_k): closed cut at level k, shift 0.
Segment ring_values(const GroupDescriptor &g, std::size_t level);
// Value set of the maximal ideal of O(H_k): {alpha > H_k}.
Segment max_ideal_values(const GroupDescriptor &g, std::size_t level);

// Invariance ring O(I) = coarsening at H = G(vI), and its maximal ideal M(I).
struct InvarianceRing {
    ConvexSubgroup h;
    IdealDescriptor m;
};
InvarianceRing invariance_ring(const IdealDescriptor &ideal);

// True iff the value set is that of a principal O(H_level)-ideal, i.e. gamma + O(H_level).
bool principal_over(const Segment &values, std::size_t level);

} // namespace vcoarse

#endif

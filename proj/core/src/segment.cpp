#include <vcoarse/errors.hpp>
#include <vcoarse/segment.hpp>

namespace vcoarse
{

std::string to_string(Direction d)
{
    return d == Direction::Final ? "final" : "initial";
}

Segment::Segment(GroupDescriptor group, Direction direction, std::size_t level, GroupElement shift, bool closed)
    : group_(std::move(group)), direction_(direction), level_(level), shift_(std::move(shift)), closed_(closed)
{
    if (level_ > group_.rank()) {
        throw StructuralError("segment level " + std::to_string(level_) + " exceeds rank "
                              + std::to_string(group_.rank()));
    }
    shift_ = shift_.truncated(level_);
    group_.require(shift_);
    canonicalize();
}

void Segment::canonicalize()
{
    if (level_ == 0 || closed_) {
        return;
    }
    const Component &cls = group_.component(level_ - 1);
    if (cls.dense()) {
        return;
    }
    // Open cut at a discrete class: step one unit inward and close it.
    const GroupElement step = group_.basis(level_ - 1);
    shift_ = direction_ == Direction::Final ? shift_ + step : shift_ - step;
    closed_ = true;
}

Segment Segment::element_cut(const GroupDescriptor &g, Direction d, const GroupElement &gamma, bool closed)
{
    return Segment(g, d, g.rank(), gamma, closed);
}

Segment Segment::subgroup_cut(const GroupDescriptor &g, Direction d, std::size_t level, const GroupElement &shift,
                              bool closed)
{
    return Segment(g, d, level, shift, closed);
}

Segment Segment::whole(const GroupDescriptor &g, Direction d)
{
    return Segment(g, d, 0, g.zero(), true);
}

Segment Segment::empty(const GroupDescriptor &g, Direction d)
{
    return Segment(g, d, 0, g.zero(), false);
}

bool Segment::contains(const GroupElement &alpha) const
{
    group_.require(alpha);
    const int s = (alpha - shift_).truncated(level_).sign();
    if (direction_ == Direction::Final) {
        return closed_ ? s >= 0 : s > 0;
    }
    return closed_ ? s <= 0 : s < 0;
}

bool operator==(const Segment &a, const Segment &b)
{
    return a.group_ == b.group_ && a.direction_ == b.direction_ && a.level_ == b.level_ && a.closed_ == b.closed_
           && a.shift_ == b.shift_;
}

std::string Segment::str() const
{
    if (is_empty()) {
        return "{}";
    }
    if (is_whole()) {
        return "G";
    }
    const bool fin = direction_ == Direction::Final;
    std::string rel = fin ? (closed_ ? ">=" : ">") : (closed_ ? "<=" : "<");
    std::string rhs = shift_.str();
    if (!is_element_cut()) {
        rhs =(shift_.is_zero() ? "" : shift_.str() + " + ") + "H_" + std::to_string(level_);
    }
    return "{a " + rel + " " + rhs + "}";
}

// ---------------------------------------------------------------------------

Segment normalize(const GroupDescriptor &g, const SeqCut &cut)
{
    g.require(cut.limit);
    if (cut.scale.rank() != g.rank()) {
        throw StructuralError("sequence cut scale has the wrong rank");
    }
    const auto lead = cut.scale.leading_index();
    if (!lead) {
        throw DegenerateInputError("sequence cut with zero scale");
    }
    if (cut.scale.sign() > 0) {
        // The points limit -+ scale/p^k close in on limit inside the class of scale.
        return Segment(g, cut.direction, *lead + 1, cut.limit, false);
    }
    // Negative scale: the points move away from limit, so the first one is extremal.
    const Rational factor = rational_pow(Rational(g.prime()), -cut.start);
    const GroupElement step = factor * cut.scale;
    const GroupElement edge = cut.direction == Direction::Initial ? cut.limit - step : cut.limit + step;
    return Segment::element_cut(g, cut.direction, edge, true);
}

Segment normalize(const Segment &s)
{
    return s;
}

ConvexSubgroup invariance_group(const Segment &s)
{
    return s.group().subgroup(s.level());
}

Segment shift(const Segment &s, const GroupElement &gamma)
{
    s.group().require(gamma);
    return Segment(s.group(), s.direction(), s.level(), s.shift() + gamma, s.closed());
}

Segment negate(const Segment &s)
{
    const Direction d = s.direction() == Direction::Final ? Direction::Initial : Direction::Final;
    return Segment(s.group(), d, s.level(), -s.shift(), s.closed());
}

namespace
{

void require_compatible(const Segment &a, const Segment &b)
{
    if (!(a.group() == b.group())) {
        throw StructuralError("segments over different groups");
    }
    if (a.direction() != b.direction()) {
        throw PreconditionError("segments of opposite direction");
    }
}

Segment sum_final(const Segment &a, const Segment &b)
{
    if (a.is_empty() || b.is_empty()) {
        return Segment::empty(a.group(), a.direction());
    }
    bool closed = false;
    std::size_t level = 0;
    if (a.level() != b.level()) {
        const Segment &coarse = a.level() < b.level() ? a : b;
        level = coarse.level();
        closed = coarse.closed();
    } else {
        // Canonical open cuts only occur at dense classes, where positive + positive
        // covers every positive coset.
        level = a.level();
        closed = a.closed() && b.closed();
    }
    return Segment(a.group(), a.direction(), level, a.shift() + b.shift(), closed);
}

// Position of a FINAL segment in the completion of the group, as a lexicographic key:
// the shift prefix, then -inf (closed) or +inf (open) at index `level`.
int compare_positions(const Segment &a, const Segment &b)
{
    const std::size_t n = a.group().rank();
    for (std::size_t i = 0; i <= n; ++i) {
        const bool a_inf = i == a.level();
        const bool b_inf = i == b.level();
        if (a_inf || b_inf) {
            const int sa = a_inf ? (a.closed() ? -1 : 1) : 0;
            const int sb = b_inf ? (b.closed() ? -1 : 1) : 0;
            if (a_inf && b_inf) {
                return sa < sb ? -1 : (sa > sb ? 1 : 0);
            }
            // A finite coordinate sits strictly between -inf and +inf.
            return a_inf ? sa : -sb;
        }
        const int c = cmp(a.shift()[i], b.shift()[i]);
        if (c != 0) {
            return c;
        }
    }
    return 0;
}

} // namespace

Segment sum(const Segment &a, const Segment &b)
{
    require_compatible(a, b);
    if (a.direction() == Direction::Initial) {
        return negate(sum_final(negate(a), negate(b)));
    }
    return sum_final(a, b);
}

Segment scale_int(const Segment &s, long m)
{
    if (m < 1) {
        throw PreconditionError("scale_int needs m >= 1");
    }
    Segment out = s;
    for (long i = 1; i < m; ++i) {
        out = sum(out, s);
    }
    return out;
}

bool subset_of(const Segment &a, const Segment &b)
{
    require_compatible(a, b);
    if (a.direction() == Direction::Initial) {
        return subset_of(negate(a), negate(b));
    }
    // Final segments shrink as their position moves up.
    return compare_positions(a, b) >= 0;
}

Segment residual(const Segment &p, const Segment &n)
{
    require_compatible(p, n);
    if (p.direction() != Direction::Final) {
        throw PreconditionError("residual is defined for final segments");
    }
    const GroupElement d = p.shift() - n.shift();
    const std::size_t k = p.level();
    const std::size_t m = n.level();
    if (m < k) {
        // n is coarser: gamma + n must clear p's whole coset; only an open n can touch it.
        return Segment(p.group(), Direction::Final, m, d, !n.closed());
    }
    const bool closed = p.closed() || (m == k && !n.closed());
    return Segment(p.group(), Direction::Final, k, d, closed);
}

IdealDescriptor make_ideal(Segment values, std::string label)
{
    if (values.direction() != Direction::Final) {
        throw PreconditionError("ideal value sets are final segments");
    }
    return IdealDescriptor{std::move(values), std::move(label)};
}

Segment ring_values(const GroupDescriptor &g, std::size_t level)
{
    return Segment(g, Direction::Final, level, g.zero(), true);
}

Segment max_ideal_values(const GroupDescriptor &g, std::size_t level)
{
    return Segment(g, Direction::Final, level, g.zero(), false);
}

InvarianceRing invariance_ring(const IdealDescriptor &ideal)
{
    const ConvexSubgroup h = invariance_group(ideal.values);
    return {h, make_ideal(max_ideal_values(ideal.values.group(), h.level()), "M(I)")};
}

bool principal_over(const Segment &values, std::size_t level)
{
    return values.direction() == Direction::Final && values.closed() && values.level() == level;
}

} // namespace vcoarse

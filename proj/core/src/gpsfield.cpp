#include <algorithm>

#include <vcoarse/errors.hpp>
#include <vcoarse/gpsfield.hpp>

namespace vcoarse
{

FieldModel::FieldModel(std::string name_, FiniteField residue_, GroupDescriptor value_group_, bool perfect_hull_,
                       bool henselian_)
    : name(std::move(name_)), residue(std::move(residue_)), value_group(std::move(value_group_)),
      perfect_hull(perfect_hull_), henselian(henselian_)
{
    if (static_cast<long>(residue.characteristic()) != value_group.prime()) {
        throw StructuralError("residue characteristic " + std::to_string(residue.characteristic())
                              + " differs from the value group prime " + std::to_string(value_group.prime()));
    }
}

// ---------------------------------------------------------------------------
// SeriesElement

SeriesElement::SeriesElement(Terms terms) : terms_(std::move(terms))
{
    std::erase_if(terms_, [](const auto &kv) { return kv.second == 0; });
}

SeriesElement SeriesElement::monomial(const GroupElement &e, Coef c)
{
    return SeriesElement(Terms{{e, c}});
}

std::optional<GroupElement> SeriesElement::valuation() const
{
    if (terms_.empty()) {
        return std::nullopt;
    }
    return terms_.begin()->first;
}

Coef SeriesElement::coefficient(const GroupElement &e) const
{
    const auto it = terms_.find(e);
    return it == terms_.end() ? Coef{0} : it->second;
}

namespace
{

void accumulate(const FieldModel &k, SeriesElement::Terms &terms, const GroupElement &e, Coef c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms.try_emplace(e, c);
    if (!inserted) {
        it->second = k.residue.add(it->second, c);
        if (it->second == 0) {
            terms.erase(it);
        }
    }
}

} // namespace

void require_element(const FieldModel &k, const SeriesElement &a)
{
    for (const auto &[e, c] : a.terms()) {
        k.value_group.require(e);
        if (c >= k.residue.order()) {
            throw StructuralError("coefficient code " + std::to_string(c) + " outside F_"
                                  + std::to_string(k.residue.order()));
        }
    }
}

SeriesElement add(const FieldModel &k, const SeriesElement &a, const SeriesElement &b)
{
    auto terms = a.terms();
    for (const auto &[e, c] : b.terms()) {
        accumulate(k, terms, e, c);
    }
    return SeriesElement(std::move(terms));
}

SeriesElement neg(const FieldModel &k, const SeriesElement &a)
{
    auto terms = a.terms();
    for (auto &kv : terms) {
        kv.second = k.residue.neg(kv.second);
    }
    return SeriesElement(std::move(terms));
}

SeriesElement sub(const FieldModel &k, const SeriesElement &a, const SeriesElement &b)
{
    return add(k, a, neg(k, b));
}

SeriesElement mul(const FieldModel &k, const SeriesElement &a, const SeriesElement &b)
{
    SeriesElement::Terms terms;
    for (const auto &[ea, ca] : a.terms()) {
        for (const auto &[eb, cb] : b.terms()) {
            accumulate(k, terms, ea + eb, k.residue.mul(ca, cb));
        }
    }
    return SeriesElement(std::move(terms));
}

SeriesElement scale(const FieldModel &k, Coef c, const SeriesElement &a)
{
    SeriesElement::Terms terms;
    for (const auto &[e, x] : a.terms()) {
        accumulate(k, terms, e, k.residue.mul(c, x));
    }
    return SeriesElement(std::move(terms));
}

SeriesElement frobenius(const FieldModel &k, const SeriesElement &a)
{
    const Rational p(static_cast<long>(k.characteristic()));
    SeriesElement::Terms terms;
    for (const auto &[e, c] : a.terms()) {
        terms.emplace(p * e, k.residue.frobenius(c));
    }
    return SeriesElement(std::move(terms));
}

// ---------------------------------------------------------------------------
// Tails

std::pair<GroupElement, long> ray_of(const GroupElement &e, long p)
{
    const auto lead = e.leading_index();
    if (!lead) {
        throw DegenerateInputError("the zero exponent lies on no ray");
    }
    const long j = p_adic_valuation(e[*lead], p);
    return {rational_pow(Rational(p), -j) * e, j};
}

GroupElement Tail::exponent(long j) const
{
    return rational_pow(Rational(p), j) * ray;
}

namespace
{

GroupElement tail_exponent(const Tail &t, long, long j)
{
    return t.exponent(j);
}

void require_tail(const FieldModel &k, const Tail &t)
{
    const long p = k.value_group.prime();
    if (t.p != p) {
        throw StructuralError("tail prime differs from the field characteristic");
    }
    if (t.ray.sign() >= 0) {
        throw StructuralError("tail exponents must be negative");
    }
    if (ray_of(t.ray, p).second != 0) {
        throw StructuralError("tail ray " + t.ray.str() + " is not normalized");
    }
    for (std::size_t i = 0; i < t.ray.rank(); ++i) {
        if (t.ray[i] != 0 && !k.value_group.component(i).dense()) {
            throw StructuralError("tail exponents leave the discrete component " + std::to_string(i));
        }
    }
    k.value_group.require(tail_exponent(t, p, t.start));
    if (t.coef >= k.residue.order()) {
        throw StructuralError("tail coefficient outside the residue field");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// PatternSeries

PatternSeries::PatternSeries(const FieldModel &k, SeriesElement finite, std::vector<Tail> tails)
    : finite_(std::move(finite)), tails_(std::move(tails))
{
    require_element(k, finite_);
    for (const auto &t : tails_) {
        require_tail(k, t);
    }
    canonicalize(k);
}

PatternSeries PatternSeries::geometric(const FieldModel &k, const GroupElement &first, Coef c)
{
    const auto [ray, j] = ray_of(first, k.value_group.prime());
    return PatternSeries(k, {}, {Tail{c, ray, j, k.value_group.prime()}});
}

void PatternSeries::canonicalize(const FieldModel &k)
{
    const long p = k.value_group.prime();
    auto terms = finite_.terms();

    // Merge tails sharing a ray.
    std::map<GroupElement, Tail> by_ray;
    for (const auto &t : tails_) {
        auto it = by_ray.find(t.ray);
        if (it == by_ray.end()) {
            by_ray.emplace(t.ray, t);
            continue;
        }
        Tail &u = it->second;
        const Tail &late = u.start >= t.start ? u : t;
        const long lo = std::min(u.start, t.start);
        for (long j = late.start; j > lo; --j) {
            accumulate(k, terms, tail_exponent(late, p, j), late.coef);
        }
        u = Tail{k.residue.add(u.coef, t.coef), u.ray, lo, p};
    }

    std::vector<Tail> out;
    for (auto &[ray, t] : by_ray) {
        if (t.coef == 0) {
            continue;
        }
        // Finite terms on the ray at or beyond the start: expand the tail past them.
        for (;;) {
            std::optional<long> lowest;
            for (const auto &[e, c] : terms) {
                if (e.sign() >= 0) {
                    continue;
                }
                const auto [r, j] = ray_of(e, p);
                if (r == ray && j <= t.start && (!lowest || j < *lowest)) {
                    lowest = j;
                }
            }
            if (!lowest) {
                break;
            }
            for (long j = t.start; j >= *lowest; --j) {
                accumulate(k, terms, tail_exponent(t, p, j), t.coef);
            }
            t.start = *lowest - 1;
        }
        // A finite term equal to the tail coefficient just before the start extends it.
        for (;;) {
            const auto it = terms.find(tail_exponent(t, p, t.start + 1));
            if (it == terms.end() || it->second != t.coef) {
                break;
            }
            terms.erase(it);
            ++t.start;
        }
        out.push_back(t);
    }
    finite_ = SeriesElement(std::move(terms));
    tails_ = std::move(out);
}


std::optional<GroupElement> PatternSeries::valuation() const
{
    std::optional<GroupElement> v = finite_.valuation();
    for (const auto &t : tails_) {
        const GroupElement e = t.first_exponent();
        if (!v || e < *v) {
            v = e;
        }
    }
    return v;
}

SeriesElement PatternSeries::truncate(long depth) const
{
    auto terms = finite_.terms();
    for (const auto &t : tails_) {
        for (long i = 0; i < depth; ++i) {
            // Canonical form keeps finite terms off the tail's own exponents.
            terms.emplace(t.exponent(t.start - i), t.coef);
        }
    }
    return SeriesElement(std::move(terms));
}

PatternSeries add(const FieldModel &k, const PatternSeries &a, const PatternSeries &b)
{
    auto tails = a.tails();
    tails.insert(tails.end(), b.tails().begin(), b.tails().end());
    return PatternSeries(k, add(k, a.finite_part(), b.finite_part()), std::move(tails));
}

PatternSeries neg(const FieldModel &k, const PatternSeries &a)
{
    auto tails = a.tails();
    for (auto &t : tails) {
        t.coef = k.residue.neg(t.coef);
    }
    return PatternSeries(k, neg(k, a.finite_part()), std::move(tails));
}

PatternSeries sub(const FieldModel &k, const PatternSeries &a, const PatternSeries &b)
{
    return add(k, a, neg(k, b));
}

PatternSeries scale(const FieldModel &k, Coef c, const PatternSeries &a)
{
    auto tails = a.tails();
    for (auto &t : tails) {
        t.coef = k.residue.mul(c, t.coef);
    }
    return PatternSeries(k, scale(k, c, a.finite_part()), std::move(tails));
}

PatternSeries frobenius(const FieldModel &k, const PatternSeries &a)
{
    auto tails = a.tails();
    for (auto &t : tails) {
        t.coef = k.residue.frobenius(t.coef);
        ++t.start;
    }
    return PatternSeries(k, frobenius(k, a.finite_part()), std::move(tails));
}

PatternSeries lift(const FieldModel &k, const SeriesElement &a)
{
    return PatternSeries(k, a, {});
}

PatternSeries artin_schreier_root(const FieldModel &k, const GroupElement &e, Coef c)
{
    if (e.sign() >= 0) {
        throw PreconditionError("Artin-Schreier pattern roots need a negative exponent");
    }
    if (k.residue.frobenius(c) != c) {
        // Coefficients c^(1/p^i) would cycle instead of staying constant along the tail.
        throw UnsupportedError("Artin-Schreier pattern roots need a coefficient in the prime field");
    }
    const auto [ray, j] = ray_of(e, k.value_group.prime());
    return PatternSeries(k, {}, {Tail{c, ray, j - 1, k.value_group.prime()}});
}

std::optional<GroupElement> val_diff(const FieldModel &k, const PatternSeries &theta, const SeriesElement &c)
{
    require_element(k, c);
    return sub(k, theta, lift(k, c)).valuation();
}

SeriesElement schedule_element(const PatternSeries &theta, long j)
{
    return theta.truncate(j);
}

ApproachResult approach_segment(const FieldModel &k, const PatternSeries &theta, long depth)
{
    if (theta.is_finite()) {
        throw NotImmediateError("element has finite support: v(z - K) attains its maximum at z itself");
    }
    if (depth < 1) {
        throw PreconditionError("approach depth must be positive");
    }
    std::vector<GroupElement> schedule;
    for (long j = 0; j < depth; ++j) {
        const auto v = val_diff(k, theta, schedule_element(theta, j));
        if (!v) {
            throw NotImmediateError("schedule reached the element after " + std::to_string(j) + " steps");
        }
        if (!schedule.empty() && !(schedule.back() < *v)) {
            throw NotImmediateError("schedule values stop increasing at step " + std::to_string(j) + ": "
                                    + schedule.back().str() + " then " + v->str());
        }
        schedule.push_back(*v);
    }
    // Every tail exponent tends to 0 inside its own class, so the values close in on 0
    // from below in the class of the first one.
    const SeqCut cut{Direction::Initial, k.value_group.zero(), -schedule.front(), 0};
    return ApproachResult{normalize(k.value_group, cut), std::move(schedule), depth, theta.tails().size() > 1};
}

// ---------------------------------------------------------------------------
// ComposedModel

namespace
{

FieldModel compose_models(const FieldModel &outer, const FieldModel &inner)
{
    if (!(outer.residue == inner.residue)) {
        throw StructuralError("outer residue field F_" + std::to_string(outer.residue.order())
                              + " is not the coefficient field F_" + std::to_string(inner.residue.order())
                              + " of the inner model");
    }
    return FieldModel(outer.name + "*" + inner.name, inner.residue, outer.value_group.concat(inner.value_group),
                      outer.perfect_hull && inner.perfect_hull, outer.henselian && inner.henselian);
}

} // namespace

ComposedModel::ComposedModel(const FieldModel &outer, const FieldModel &inner)
    : model_(compose_models(outer, inner)), outer_rank_(outer.value_group.rank())
{
}

ComposedModel::ComposedModel(const FieldModel &outer) : model_(outer), outer_rank_(outer.value_group.rank()) {}

GroupElement ComposedModel::project_outer(const GroupElement &alpha) const
{
    model_.value_group.require(alpha);
    return GroupElement(std::vector<Rational>(alpha.coords().begin(), alpha.coords().begin() + outer_rank_));
}

GroupElement ComposedModel::embed_outer(const GroupElement &gamma) const
{
    if (gamma.rank() != outer_rank_) {
        throw StructuralError("element is not in the outer value group");
    }
    auto c = gamma.coords();
    c.resize(model_.value_group.rank());
    return model_.value_group.element(std::move(c));
}

GroupElement ComposedModel::embed_inner(const GroupElement &gamma) const
{
    if (gamma.rank() + outer_rank_ != model_.value_group.rank()) {
        throw StructuralError("element is not in the inner value group");
    }
    std::vector<Rational> c(outer_rank_);
    c.insert(c.end(), gamma.coords().begin(), gamma.coords().end());
    return model_.value_group.element(std::move(c));
}

Segment ComposedModel::lift_outer(const Segment &s) const
{
    return Segment(model_.value_group, s.direction(), s.level(), embed_outer(s.shift()), s.closed());
}

Segment ComposedModel::lift_inner(const Segment &s) const
{
    if (s.level() == 0) {
        // Empty or whole inner set: nothing distinguishes the inner class.
        return Segment(model_.value_group, s.direction(), outer_rank_, model_.value_group.zero(), s.closed());
    }
    return Segment(model_.value_group, s.direction(), outer_rank_ + s.level(), embed_inner(s.shift()), s.closed());
}

} // namespace vcoarse

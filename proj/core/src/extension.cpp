#include <vcoarse/errors.hpp>
#include <vcoarse/extension.hpp>

namespace vcoarse
{

std::string to_string(ExtensionKind k)
{
    switch (k) {
        case ExtensionKind::ArtinSchreierDefect:
            return "AS_DEFECT";
        case ExtensionKind::KummerDefect:
            return "KUMMER_DEFECT";
        case ExtensionKind::Defectless:
            return "DEFECTLESS_VALUE";
    }
    return "?";
}

std::string to_string(DefectKind k)
{
    return k == DefectKind::Independent ? "INDEPENDENT" : "DEPENDENT";
}

std::string to_string(DefectlessCase c)
{
    switch (c) {
        case DefectlessCase::DL2A:
            return "DL2A";
        case DefectlessCase::DL2B:
            return "DL2B";
        case DefectlessCase::DL2C:
            return "DL2C";
    }
    return "?";
}

std::string to_string(DefectlessGenerator::Type t)
{
    switch (t) {
        case DefectlessGenerator::Type::ArtinSchreier:
            return "artin_schreier";
        case DefectlessGenerator::Type::Kummer2a:
            return "kummer_2a";
        case DefectlessGenerator::Type::Kummer2b:
            return "kummer_2b";
        case DefectlessGenerator::Type::TameKummer:
            return "tame_kummer";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Data

ExtensionDatum artin_schreier_defect(std::string name, const FieldModel &k, const PatternSeries &theta, long depth)
{
    const ApproachResult a = approach_segment(k, theta, depth);
    ExtensionDatum e{.kind = ExtensionKind::ArtinSchreierDefect,
                     .name = std::move(name),
                     .base_group = k.value_group,
                     .degree = static_cast<long>(k.characteristic()),
                     .depth = depth};
    e.approach = a.segment;
    e.schedule = a.schedule;
    e.partial = a.partial;
    e.sigma_shift = k.value_group.zero();
    e.residue_characteristic = k.characteristic();
    return e;
}

ExtensionDatum kummer_defect(std::string name, const GroupDescriptor &g, long p, const GroupElement &vp,
                             const Segment &approach, std::vector<GroupElement> schedule, long depth)
{
    if (approach.direction() != Direction::Initial || !(approach.group() == g)) {
        throw StructuralError("v(eta - K) must be an initial segment of the base value group");
    }
    if (vp.sign() <= 0) {
        throw StructuralError("v(p) must be positive in mixed characteristic");
    }
    ExtensionDatum e{.kind = ExtensionKind::KummerDefect, .name = std::move(name), .base_group = g, .degree = p,
                     .depth = depth};
    e.approach = approach;
    e.schedule = std::move(schedule);
    e.sigma_shift = g.element((Rational(1, p - 1) * vp).coords());
    e.residue_characteristic = static_cast<unsigned>(p);
    return e;
}

std::vector<GroupElement> mixed_characteristic_schedule(const GroupDescriptor &g, long depth)
{
    const long p = g.prime();
    const GroupElement vp = g.basis(0);
    std::vector<GroupElement> out;
    // a - b_0 = a; (a - b_i)^p - (a - b_i) = 1/p - (b_i^p - b_i) has value -vp/p^i by the
    // choice of b_i, and v(x^p - x) = min(p v(x), v(x)) determines v(x).
    for (long i = 0; i < depth; ++i) {
        const GroupElement target = rational_pow(Rational(p), -i) * (-vp);
        // Branch v(x) < 0: the minimum is p v(x).
        const GroupElement x_neg = Rational(1, p) * target;
        // Branch v(x) >= 0: the minimum is v(x), which would need target >= 0.
        std::optional<GroupElement> x;
        if (x_neg.sign() < 0) {
            x = x_neg;
        } else if (target.sign() >= 0) {
            x = target;
        }
        if (!x) {
            throw InternalConsistencyError("no value solves min(p x, x) = " + target.str());
        }
        const GroupElement closed_form = rational_pow(Rational(p), -(i + 1)) * (-vp);
        if (!(*x == closed_form)) {
            throw InternalConsistencyError("derived schedule value " + x->str() + " differs from "
                                           + closed_form.str());
        }
        g.require(*x);
        out.push_back(*x);
    }
    return out;
}

ExtensionDatum mixed_characteristic_defect(const GroupDescriptor &g, long depth)
{
    if (!g.component(0).dense()) {
        throw StructuralError("the v(p) class must be p-divisible for the roots b_i");
    }
    if (depth < 1) {
        throw PreconditionError("schedule depth must be positive");
    }
    auto schedule = mixed_characteristic_schedule(g, depth);
    ExtensionDatum e{.kind = ExtensionKind::ArtinSchreierDefect,
                     .name = "a^p - a = 1/p",
                     .base_group = g,
                     .degree = g.prime(),
                     .depth = depth};
    e.approach = normalize(g, SeqCut{Direction::Initial, g.zero(), -schedule.front(), 0});
    e.schedule = std::move(schedule);
    // f(X) = X^p - X - 1/p has f'(a) = p a^(p-1) - 1, a unit since v(p a^(p-1)) > 0.
    e.sigma_shift = g.zero();
    e.residue_characteristic = static_cast<unsigned>(g.prime());
    return e;
}

ExtensionDatum synthetic_defect(std::string name, const GroupDescriptor &g, long p, const Segment &sigma)
{
    if (!(sigma.group() == g)) {
        throw StructuralError("declared Sigma_E is over a different group");
    }
    ExtensionDatum e{.kind = ExtensionKind::ArtinSchreierDefect, .name = std::move(name), .base_group = g, .degree = p};
    e.declared_sigma = sigma;
    e.synthetic = true;
    e.residue_characteristic = static_cast<unsigned>(p);
    return e;
}

ExtensionDatum defectless_extension(std::string name, const GroupDescriptor &vk, long q, DefectlessGenerator gen,
                                    unsigned residue_characteristic)
{
    if (!is_prime(q)) {
        throw StructuralError("extension degree " + std::to_string(q) + " is not prime");
    }
    ExtensionDatum e{.kind = ExtensionKind::Defectless, .name = std::move(name), .base_group = vk, .degree = q};
    e.generator = std::move(gen);
    e.residue_characteristic = residue_characteristic;
    return e;
}

// ---------------------------------------------------------------------------
// Sigma and classification

Segment sigma_segment(const ExtensionDatum &e)
{
    if (e.kind == ExtensionKind::Defectless) {
        throw PreconditionError("Sigma_E is computed for defect extensions; use defectless_analyze");
    }
    const GroupDescriptor &g = e.base_group;
    Segment sigma = Segment::empty(g);
    if (e.declared_sigma) {
        sigma = *e.declared_sigma;
    } else {
        if (!e.approach || !e.sigma_shift) {
            throw PreconditionError("defect datum without v(a - K)");
        }
        if (e.approach->has_extremum()) {
            throw NotDefectError("v(a - K) has the maximum " + e.approach->shift().str());
        }
        sigma = shift(negate(*e.approach), *e.sigma_shift);
    }
    if (sigma.direction() != Direction::Final) {
        throw InconsistentDatumError("Sigma_E must be a final segment");
    }
    const Segment positives = Segment::element_cut(g, Direction::Final, g.zero(), false);
    if (sigma.is_empty() || !subset_of(sigma, positives)) {
        throw InconsistentDatumError("Sigma_E = " + sigma.str() + " is not a nonempty set of positive values");
    }
    return sigma;
}

DefectClassification classify(const ExtensionDatum &e)
{
    const Segment sigma = sigma_segment(e);
    const GroupDescriptor &g = e.base_group;
    const IdealDescriptor i_e = make_ideal(sigma, "I_E");
    const InvarianceRing ring = invariance_ring(i_e);
    const ConvexSubgroup h_e = invariance_group(sigma);
    if (!(ring.h == h_e)) {
        throw InternalConsistencyError("invariance ring and invariance group disagree");
    }

    ClassificationCertificate cert;
    cert.ideal_route_independent = i_e == ring.m && !principal_over(ring.m.values, h_e.level());
    cert.segment_route_independent =
        sigma == max_ideal_values(g, h_e.level()) && !g.quotient_has_smallest_positive(h_e);
    if (cert.ideal_route_independent != cert.segment_route_independent) {
        throw InternalConsistencyError("independence criteria disagree for " + e.name + ": Sigma_E = " + sigma.str());
    }
    cert.synthetic = e.synthetic;
    cert.partial = e.partial;
    cert.depth = e.depth;
    cert.schedule = e.schedule;
    const DefectKind kind = cert.ideal_route_independent ? DefectKind::Independent : DefectKind::Dependent;
    IdealDescriptor m_e = ring.m;
    m_e.label = "M_E";
    return DefectClassification{kind, h_e, sigma, i_e, m_e, std::move(cert)};
}

// ---------------------------------------------------------------------------
// Defectless

GroupDescriptor adjoin_value(const GroupDescriptor &vk, const GroupElement &vx0, long q, std::size_t *split_index)
{
    if (vx0.rank() != vk.rank()) {
        throw StructuralError("vx0 has the wrong rank");
    }
    if (vk.contains(vx0)) {
        throw WrongCaseError("vx0 = " + vx0.str() + " already lies in vK");
    }
    if (!vk.contains(Rational(q) * vx0)) {
        throw InconsistentDatumError(std::to_string(q) + " * vx0 = " + (Rational(q) * vx0).str()
                                     + " is not in vK");
    }
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < vk.rank(); ++i) {
        if (!vk.component(i).contains(vx0[i], vk.prime())) {
            outside.push_back(i);
        }
    }
    if (outside.size() != 1) {
        throw UnsupportedError("vx0 must leave vK in exactly one coordinate");
    }
    const std::size_t i = outside.front();
    auto comps = vk.components();
    // unit Z + Z c with q c in unit Z and c outside is (unit/q) Z; same over Z[1/p].
    comps[i].unit /= q;
    if (split_index) {
        *split_index = i;
    }
    return GroupDescriptor(std::move(comps), vk.prime());
}

DefectlessAnalysis defectless_analyze(const ExtensionDatum &e)
{
    if (e.kind != ExtensionKind::Defectless || !e.generator) {
        throw PreconditionError("defectless analysis needs a defectless datum");
    }
    const DefectlessGenerator &gen = *e.generator;
    std::size_t i_star = 0;
    const GroupDescriptor vl = adjoin_value(e.base_group, gen.vx0, e.degree, &i_star);

    // Convex subgroups of vL below component i* coincide with those of vK.
    const ConvexSubgroup h_e = vl.subgroup(i_star + 1);
    // The class just above H_E always exists in finite rank, so DL2A cannot occur.
    const DefectlessCase dl = vl.component(i_star).dense() ? DefectlessCase::DL2B : DefectlessCase::DL2C;
    const IdealDescriptor m_e = make_ideal(max_ideal_values(vl, h_e.level()), "M_E");

    DefectlessAnalysis out{vl, h_e, dl, m_e, std::nullopt, i_star, {}};
    const unsigned p = e.residue_characteristic.value_or(0);
    auto vp_over = [&]() {
        if (!gen.vp) {
            throw InconsistentDatumError("Kummer data need v(p)");
        }
        const GroupElement c = Rational(1, static_cast<long>(p) - 1) * *gen.vp;
        if (!e.base_group.contains(c)) {
            throw InconsistentDatumError("vp/(p-1) = " + c.str() + " is not in vK");
        }
        return c;
    };
    switch (gen.type) {
        case DefectlessGenerator::Type::ArtinSchreier:
            if (gen.vx0.sign() >= 0) {
                throw InconsistentDatumError("an Artin-Schreier generator outside vK has negative value");
            }
            out.i_e = make_ideal(Segment::element_cut(vl, Direction::Final, -gen.vx0, true), "I_E = (1/theta)");
            break;
        case DefectlessGenerator::Type::Kummer2a:
            out.i_e = make_ideal(Segment::element_cut(vl, Direction::Final, vp_over(), true), "I_E = (zeta_p - 1)");
            break;
        case DefectlessGenerator::Type::Kummer2b: {
            const GroupElement c = vp_over();
            if (gen.vx0 > c) {
                throw InconsistentDatumError("case 2b needs v(eta - 1) <= vp/(p-1)");
            }
            if (gen.vx0 == c) {
                out.flags.push_back("v(eta-1) = vp/(p-1)");
            }
            out.i_e = make_ideal(Segment::element_cut(vl, Direction::Final, c - gen.vx0, true),
                                 "I_E = ((zeta_p - 1)/(eta - 1))");
            break;
        }
        case DefectlessGenerator::Type::TameKummer:
            if (p != 0 && static_cast<long>(p) == e.degree) {
                throw InconsistentDatumError("tame Kummer degree equals the residue characteristic");
            }
            break;
    }
    return out;
}

} // namespace vcoarse

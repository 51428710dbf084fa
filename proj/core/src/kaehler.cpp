#include <vcoarse/errors.hpp>
#include <vcoarse/kaehler.hpp>

namespace vcoarse
{

std::string to_string(OmegaForm f)
{
    switch (f) {
        case OmegaForm::RamificationQuotient:
            return "I_E/I_E^p";
        case OmegaForm::ProductQuotient:
            return "I_E*M_E/(I_E*M_E)^n";
        case OmegaForm::MaximalIdealQuotient:
            return "M_E/M_E^q";
    }
    return "?";
}

namespace
{

OmegaPresentation quotient(OmegaForm form, IdealDescriptor numerator, long exponent, std::string provenance)
{
    Segment power = scale_int(numerator.values, exponent);
    const bool zero = power == numerator.values;
    return OmegaPresentation{form, std::move(numerator), exponent, std::move(power), zero, std::move(provenance)};
}

Segment o_l(const GroupDescriptor &g)
{
    return ring_values(g, g.rank());
}

// Annihilators are ideals of O_L: cut the colon set down to nonnegative values.
Segment inside_o_l(const Segment &s)
{
    const Segment ring = o_l(s.group());
    return subset_of(s, ring) ? s : ring;
}

void require_same(const Segment &formula, const Segment &colon, const std::string &what)
{
    if (!(formula == colon)) {
        throw InternalConsistencyError(what + ": case formula gives " + formula.str() + ", colon ideal gives "
                                       + colon.str());
    }
}

} // namespace

OmegaPresentation present(const ExtensionDatum &e, const DefectClassification &c)
{
    OmegaPresentation out =
        quotient(OmegaForm::RamificationQuotient, c.i_e, e.degree, "defect extension: I_E/I_E^p");
    if (out.is_zero != (c.kind == DefectKind::Independent)) {
        throw InternalConsistencyError("Omega zero test disagrees with the defect classification");
    }
    return out;
}

OmegaPresentation present(const ExtensionDatum &e, const DefectlessAnalysis &a)
{
    if (!e.generator) {
        throw PreconditionError("defectless presentation needs generator data");
    }
    auto product = [&]() {
        if (!a.i_e) {
            throw PreconditionError("defectless presentation needs I_E");
        }
        return make_ideal(sum(a.i_e->values, a.m_e.values), "I_E*M_E");
    };
    switch (e.generator->type) {
        case DefectlessGenerator::Type::ArtinSchreier: {
            auto out = quotient(OmegaForm::ProductQuotient, product(), e.degree,
                                "defectless Artin-Schreier: I_E M_E/(I_E M_E)^p, never zero");
            if (out.is_zero) {
                throw InternalConsistencyError("defectless Artin-Schreier module computed as zero");
            }
            return out;
        }
        case DefectlessGenerator::Type::TameKummer:
            return quotient(OmegaForm::MaximalIdealQuotient, a.m_e, e.degree, "defectless tame Kummer: M_E/M_E^q");
        case DefectlessGenerator::Type::Kummer2a: {
            auto out = quotient(OmegaForm::ProductQuotient, product(), e.degree,
                                "defectless Kummer, v(eta) outside vK: zero iff p is not in M_E and M_E is "
                                "nonprincipal over O_E");
            const bool p_in_m = !a.h_e.contains(*e.generator->vp);
            const bool rule = !p_in_m && !principal_over(a.m_e.values, a.h_e.level());
            if (rule != out.is_zero) {
                throw InternalConsistencyError("Kummer zero test disagrees with the value-set computation");
            }
            return out;
        }
        case DefectlessGenerator::Type::Kummer2b: {
            auto out = quotient(OmegaForm::ProductQuotient, product(), e.degree,
                                "defectless Kummer, v(eta - 1) outside vK: never zero");
            if (out.is_zero) {
                throw InternalConsistencyError("Kummer case with v(eta - 1) outside vK computed as zero");
            }
            return out;
        }
    }
    throw PreconditionError("unknown generator type");
}

Segment colon_annihilator(const OmegaPresentation &omega)
{
    return inside_o_l(residual(omega.power, omega.numerator.values));
}

Annihilator annihilate(const OmegaPresentation &omega, const ExtensionDatum &e, const DefectClassification &c)
{
    const GroupDescriptor &g = c.sigma.group();
    Annihilator out{make_ideal(o_l(g), "O_L")};
    if (!omega.is_zero) {
        const Segment s = scale_int(c.sigma, e.degree - 1);
        const bool unattained =
            !s.closed() && s.level() > 0 && g.component(s.level() - 1).dense();
        if (unattained) {
            // Infimum s.shift() mod H_E, realized in vK = vL: a O(I_E).
            out.ideal = make_ideal(inside_o_l(Segment(g, Direction::Final, s.level(), s.shift(), true)), "a*O(I_E)");
        } else {
            out.ideal = make_ideal(inside_o_l(s), "I_E^(p-1)");
        }
    }
    require_same(out.ideal.values, colon_annihilator(omega), "defect annihilator");
    out.is_max_ideal = out.ideal.values == max_ideal_values(g, g.rank());
    return out;
}

Annihilator annihilate(const OmegaPresentation &omega, const ExtensionDatum &, const DefectlessAnalysis &a)
{
    const GroupDescriptor &g = a.value_group_l;
    const long n = omega.exponent;
    const GroupElement va = a.i_e && omega.form == OmegaForm::ProductQuotient ? a.i_e->values.shift() : g.zero();
    const bool m_principal = principal_over(a.m_e.values, a.h_e.level());

    Annihilator out{make_ideal(o_l(g), "O_L")};
    if (m_principal) {
        out.ideal = make_ideal(inside_o_l(scale_int(omega.numerator.values, n - 1)), "(a M_E)^(n-1)");
    } else {
        const GroupElement base = Rational(n - 1) * va;
        out.ideal = make_ideal(inside_o_l(shift(ring_values(g, a.h_e.level()), base)), "a^(n-1) O_E");
    }
    require_same(out.ideal.values, colon_annihilator(omega), "defectless annihilator");

    const Segment m_l = max_ideal_values(g, g.rank());
    out.is_max_ideal = out.ideal.values == m_l;
    const bool rule = n == 2 && va.is_zero() && m_l.closed() && a.m_e.values == m_l;
    if (rule != out.is_max_ideal) {
        throw InternalConsistencyError("M_L annihilator test disagrees with the value-set computation");
    }
    return out;
}

} // namespace vcoarse

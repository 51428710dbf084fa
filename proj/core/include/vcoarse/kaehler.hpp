#ifndef VCOARSE_KAEHLER_HPP
#define VCOARSE_KAEHLER_HPP

#include <string>

#include <vcoarse/extension.hpp>

namespace vcoarse
{

enum class OmegaForm {
    // I_E / I_E^p
    RamificationQuotient,
    // I_E M_E / (I_E M_E)^n
    ProductQuotient,
    // M_E / M_E^q
    MaximalIdealQuotient,
};

std::string to_string(OmegaForm f);

// Omega_{O_L|O_K} as N / N^n for an ideal N of O_L, described by value sets.
struct OmegaPresentation {
    OmegaForm form;
    IdealDescriptor numerator;
    long exponent;
    // Value set of N^n.
    Segment power;
    bool is_zero;
    // Which result selects the form; plain description of the case.
    std::string provenance;
};

// Classified defect extension.
OmegaPresentation present(const ExtensionDatum &e, const DefectClassification &c);
// Analyzed defectless extension. PreconditionError without the needed ideals.
OmegaPresentation present(const ExtensionDatum &e, const DefectlessAnalysis &a);

struct Annihilator {
    IdealDescriptor ideal;
    // ann == M_L.
    bool is_max_ideal = false;
    // Dependent branch: the infimum lies in vL but no element of vK realizes it.
    bool infimum_outside_base = false;
};

// Annihilator from the case formulas, cross-checked against the colon ideal (N^n : N)
// inside O_L. InternalConsistencyError when they differ.
Annihilator annihilate(const OmegaPresentation &omega, const ExtensionDatum &e, const DefectClassification &c);
Annihilator annihilate(const OmegaPresentation &omega, const ExtensionDatum &e, const DefectlessAnalysis &a);

// Value set of (N^n : N) intersected with O_L.
Segment colon_annihilator(const OmegaPresentation &omega);

} // namespace vcoarse

#endif

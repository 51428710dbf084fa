#ifndef VCOARSE_EXTENSION_HPP
#define VCOARSE_EXTENSION_HPP

#include <optional>
#include <string>
#include <vector>

#include <vcoarse/gpsfield.hpp>
#include <vcoarse/segment.hpp>

namespace vcoarse
{

enum class ExtensionKind { ArtinSchreierDefect, KummerDefect, Defectless };
enum class DefectKind { Independent, Dependent };
enum class DefectlessCase { DL2A, DL2B, DL2C };

std::string to_string(ExtensionKind k);
std::string to_string(DefectKind k);
std::string to_string(DefectlessCase c);

// Generator data of a defectless extension of prime degree q, where vx0 generates vL/vK.
struct DefectlessGenerator {
    enum class Type {
        // theta^p - theta in K, v(theta) = vx0 < 0.
        ArtinSchreier,
        // eta^p in K with v(eta) = vx0 (q = p).
        Kummer2a,
        // v(eta - 1) = vx0 with v(eta - 1) <= vp/(p-1) (q = p).
        Kummer2b,
        // eta^q in K, q prime to the residue characteristic.
        TameKummer,
    };
    Type type = Type::ArtinSchreier;
    GroupElement vx0;
    // v(p), needed by the Kummer types in mixed characteristic.
    std::optional<GroupElement> vp;
};

std::string to_string(DefectlessGenerator::Type t);

struct ExtensionDatum {
    ExtensionKind kind = ExtensionKind::ArtinSchreierDefect;
    std::string name;
    GroupDescriptor base_group;
    long degree = 2;
    long depth = 0;

    // Defect kinds: v(a - K) with its schedule certificate, and v(sigma a - a).
    std::optional<Segment> approach{};
    std::vector<GroupElement> schedule{};
    bool partial = false;
    std::optional<GroupElement> sigma_shift{};
    // Declared Sigma_E for synthetic instances that no series generator realizes.
    std::optional<Segment> declared_sigma{};
    bool synthetic = false;

    std::optional<DefectlessGenerator> generator{};
    std::optional<unsigned> residue_characteristic{};
};

// Artin-Schreier defect extension generated by a pattern-series root; sigma theta = theta + 1.
ExtensionDatum artin_schreier_defect(std::string name, const FieldModel &k, const PatternSeries &theta, long depth);
// Kummer defect extension from a declared v(eta - K); shift v(zeta_p - 1) = vp/(p-1).
ExtensionDatum kummer_defect(std::string name, const GroupDescriptor &g, long p, const GroupElement &vp,
                             const Segment &approach, std::vector<GroupElement> schedule, long depth);
// Artin-Schreier extension a^p - a = 1/p in mixed characteristic, where vp = 1_0.
ExtensionDatum mixed_characteristic_defect(const GroupDescriptor &g, long depth);
// Synthetic instance with Sigma_E given directly.
ExtensionDatum synthetic_defect(std::string name, const GroupDescriptor &g, long p, const Segment &sigma);
ExtensionDatum defectless_extension(std::string name, const GroupDescriptor &vk, long q, DefectlessGenerator gen,
                                    unsigned residue_characteristic);

// v(a - b_i) for the mixed-characteristic root, i = 0..depth-1: obtained by solving
// min(p x, x) = v((a - b_i)^p - (a - b_i)) and checked against -vp/p^(i+1).
std::vector<GroupElement> mixed_characteristic_schedule(const GroupDescriptor &g, long depth);

// Sigma_E = v(sigma a - a) - v(a - K). NotDefectError when v(a - K) has a maximum;
// InconsistentDatumError when the result is not made of positive values.
Segment sigma_segment(const ExtensionDatum &e);

struct ClassificationCertificate {
    bool ideal_route_independent = false;
    bool segment_route_independent = false;
    bool synthetic = false;
    bool partial = false;
    long depth = 0;
    std::vector<GroupElement> schedule;
};

struct DefectClassification {
    DefectKind kind;
    ConvexSubgroup h_e;
    Segment sigma;
    IdealDescriptor i_e;
    // O_E is the coarsening at h_e; m_e its maximal ideal over O_L values.
    IdealDescriptor m_e;
    ClassificationCertificate certificate;
};

// InternalConsistencyError when the ideal and segment criteria disagree.
DefectClassification classify(const ExtensionDatum &e);

struct DefectlessAnalysis {
    GroupDescriptor value_group_l;
    ConvexSubgroup h_e;
    DefectlessCase dl_case;
    IdealDescriptor m_e;
    std::optional<IdealDescriptor> i_e;
    // Coordinate of vx0 that lies outside vK.
    std::size_t split_index = 0;
    std::vector<std::string> flags;
};

// WrongCaseError when vx0 is in vK, InconsistentDatumError when q vx0 is not.
DefectlessAnalysis defectless_analyze(const ExtensionDatum &e);

// vK + Z vx0 for vx0 outside vK in exactly one coordinate.
GroupDescriptor adjoin_value(const GroupDescriptor &vk, const GroupElement &vx0, long q, std::size_t *split_index);

} // namespace vcoarse

#endif

#ifndef VCOARSE_PRESCRIBE_HPP
#define VCOARSE_PRESCRIBE_HPP

#include <optional>
#include <string>
#include <vector>

#include <vcoarse/extension.hpp>
#include <vcoarse/gpsfield.hpp>

namespace vcoarse
{

enum class CharCase { Equal, Mixed };

std::string to_string(CharCase c);

// Coarsening chain around the witness for level j: coordinates < j-1 belong to the outer
// valuation, coordinate j-1 to the middle one, coordinates >= j to the residue valuation.
struct Decomposition {
    std::size_t level;
    std::size_t outer_rank;
    std::size_t inner_rank;
};

struct Witness {
    std::size_t level;
    std::string name;
    // Equal characteristic: root of X^p - X = 1/t_(level-1).
    std::optional<PatternSeries> theta;
    // Mixed characteristic top step: a^p - a = 1/p, by its schedule.
    bool mixed = false;
};

// Levels outside the selection: the tame-closure step that removes them is declared only.
struct Exclusion {
    std::size_t level;
    std::string status = "DECLARED";
    std::string reason;
};

struct ConstructionPlan {
    std::size_t rank;
    std::vector<std::size_t> selected;
    long p;
    CharCase char_case;
    FieldModel model;
    std::vector<Witness> witnesses;
    std::vector<Exclusion> exclusions;
    std::vector<Decomposition> decompositions;
    // Declared steps, e.g. the adjunction of a p-th root of unity in mixed characteristic.
    std::vector<std::string> declared_flags;
};

// n PDIV(p) components with v t_i = 1_i and one witness per selected level.
// InvalidSelectionError when a level is not subprincipal (outside 1..n).
ConstructionPlan build(std::size_t n, std::vector<std::size_t> selected, long p, CharCase char_case);

struct WitnessCheck {
    std::size_t level;
    std::string name;
    std::size_t realized_level;
    DefectKind kind;
    Segment approach;
    std::vector<GroupElement> schedule;
    // theta^p - theta equals 1/t_(level-1) exactly (equal characteristic only).
    bool identity_exact = true;
    // The approach computed in the residue model and lifted agrees with the direct one.
    bool lift_agrees = true;
    bool pass = false;
};

struct VerificationReport {
    std::vector<WitnessCheck> checks;
    std::vector<Exclusion> exclusions;
    // Index i corresponds to the principal subgroup H_i; i < j iff H_i strictly contains H_j.
    std::vector<std::pair<std::size_t, std::size_t>> principal_bijection;
    bool chain_isomorphic = false;
    bool drvg = false;
    long depth = 0;
    bool pass = false;
};

// Checks every witness at the given depth. VerificationFailure naming the schedule
// values when a positive check fails.
VerificationReport verify(const ConstructionPlan &plan, long depth);

} // namespace vcoarse

#endif

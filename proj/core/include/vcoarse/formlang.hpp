#ifndef VCOARSE_FORMLANG_HPP
#define VCOARSE_FORMLANG_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <vcoarse/gpsfield.hpp>
#include <vcoarse/segment.hpp>

namespace vcoarse
{

// ---------------------------------------------------------------------------
// Syntax

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// One expression type for field terms and value terms; check() separates them.
struct Expr {
    enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow, Val };

    Kind kind = Kind::Number;
    Rational number;
    std::string name;
    // Unary operand in lhs. Pow keeps its exponent in rhs (a Number or the Ident p).
    ExprPtr lhs;
    ExprPtr rhs;
    std::size_t pos = 0;
};

enum class Quantifier { Forall, Exists };
enum class Domain { L, K, LminusK };
enum class Rel { Lt, Le, Eq, Ge, Gt };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Quant, And, Or, Implies, Not, Compare, TermEq, InK };

    Kind kind = Kind::True;
    Quantifier quantifier = Quantifier::Exists;
    std::string var;
    Domain domain = Domain::K;
    FormulaPtr a;
    FormulaPtr b;
    Rel rel = Rel::Eq;
    ExprPtr lhs;
    ExprPtr rhs;
    std::size_t pos = 0;
};

// ParseError with the offending character position.
FormulaPtr parse_formula(std::string_view text);
std::string print(const Formula &f);
std::string print(const Expr &e);
// Structural equality, positions ignored.
bool same(const Formula &a, const Formula &b);
bool same(const Expr &a, const Expr &b);
std::vector<std::string> free_variables(const Formula &f);

// ---------------------------------------------------------------------------
// Models

// Element of vL (x) Q, or +-infinity.
struct ExtValue {
    int inf = 0;
    GroupElement g;

    static ExtValue finite(GroupElement g)
    {
        return ExtValue{0, std::move(g)};
    }
    static ExtValue infinity(std::size_t rank, int sign = 1)
    {
        return ExtValue{sign, GroupElement(std::vector<Rational>(rank))};
    }
    bool is_finite() const
    {
        return inf == 0;
    }
    std::string str() const;
};

int compare(const ExtValue &a, const ExtValue &b);

// Immediate element x in L \ K, known exactly (pattern series) or by its declared
// approximation data only.
struct ImmediateElement {
    enum class Relation { ArtinSchreier, Kummer };

    std::string name;
    Relation relation = Relation::ArtinSchreier;
    std::optional<PatternSeries> series;
    Segment approach;
    std::vector<GroupElement> schedule;
    // v(x); 0 for Kummer generators normalized to 1-units.
    GroupElement value;
};

struct EvalModel {
    GroupDescriptor group;
    bool mixed = false;
    // Exact arithmetic, equal characteristic only.
    std::optional<FieldModel> field;
    // v(p), mixed characteristic only.
    std::optional<GroupElement> vp;
    // The domain L \ K.
    std::vector<ImmediateElement> generators;

    long prime() const
    {
        return group.prime();
    }
};

EvalModel equal_char_model(const FieldModel &k, std::vector<ImmediateElement> generators);
EvalModel mixed_char_model(const GroupDescriptor &g, const GroupElement &vp, std::vector<ImmediateElement> generators);

// Value bound to a variable.
struct Element {
    enum class Kind { Series, ValueOnly, Generator, SchedulePoint };

    Kind kind = Kind::ValueOnly;
    std::optional<PatternSeries> series;
    std::optional<ExtValue> value;
    std::size_t generator = 0;
    long index = 0;

    std::string str() const;
};

Element series_element(PatternSeries s);
Element value_element(ExtValue v);

using Bindings = std::map<std::string, Element>;

enum class Truth { False, True, Unknown };
enum class EvalMode { Direct, Oracle, Bounded };

std::string to_string(Truth t);
std::string to_string(EvalMode m);

struct EvalOptions {
    // Number of K candidates tried per bounded quantifier; larger budgets extend the list.
    std::size_t budget = 64;
    bool oracle = true;
};

struct EvalResult {
    Truth value = Truth::Unknown;
    EvalMode mode = EvalMode::Direct;
    std::vector<std::string> witnesses;
    std::size_t candidates_used = 0;
};

// EvalError on unbound variables, ill-typed formulas, or an empty L \ K domain.
EvalResult evaluate(const Formula &f, const EvalModel &model, const Bindings &bindings,
                    const EvalOptions &options = {});

// First `count` K candidates: 0, then by height h = 1, 2, ...: schedule points b_h of each
// generator and monomials t^g with coordinates in (1/p^(h-1))Z of size at most h.
std::vector<Element> k_candidates(const EvalModel &model, std::size_t count);

struct AgreementReport {
    std::size_t samples = 0;
    std::size_t agreements = 0;
    std::size_t disagreements = 0;
    std::size_t unknown = 0;
    std::size_t oracle_decided = 0;
    std::size_t budget = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> disagreement_details;

    double unknown_rate() const
    {
        return samples == 0 ? 0.0 : static_cast<double>(unknown) / static_cast<double>(samples);
    }
};

// Evaluates phi with `var` bound to an element of each sample value and compares with
// membership in `direct`. DefinabilityCheckFailure on any TRUE/FALSE disagreement when
// `throw_on_disagreement` is set.
AgreementReport check_definition(const Formula &phi, const std::string &var, const Segment &direct,
                                 const EvalModel &model, const std::vector<GroupElement> &samples,
                                 const EvalOptions &options = {}, bool throw_on_disagreement = true);

// Deterministic sample values in (1/p^3)Z^n, biased toward the boundary of `direct`.
std::vector<GroupElement> definability_samples(const Segment &direct, std::size_t count, std::uint64_t seed);

} // namespace vcoarse

#endif

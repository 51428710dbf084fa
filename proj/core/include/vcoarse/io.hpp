#ifndef VCOARSE_IO_HPP
#define VCOARSE_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <vcoarse/extension.hpp>
#include <vcoarse/formlang.hpp>
#include <vcoarse/gpsfield.hpp>
#include <vcoarse/kaehler.hpp>
#include <vcoarse/prescribe.hpp>
#include <vcoarse/segment.hpp>

namespace vcoarse
{

// Keys come out sorted (std::map storage), which keeps reports byte-stable.
using Json = nlohmann::json;

// Collects offending field paths; throws one SchemaError listing all of them.
class SchemaCheck
{
public:
    void fail(const std::string &path, const std::string &what)
    {
        errors_.push_back(path + ": " + what);
    }
    bool ok() const
    {
        return errors_.empty();
    }
    void throw_if_failed() const;

    const Json *require(const Json &obj, const std::string &path, const std::string &key, Json::value_t type);
    const Json *optional(const Json &obj, const std::string &path, const std::string &key, Json::value_t type);
    // Flags keys that are not in `allowed`.
    void only(const Json &obj, const std::string &path, const std::vector<std::string> &allowed);

private:
    std::vector<std::string> errors_;
};

// "(1/2,0)", "-1/3", or an array of rationals (strings or integers).
GroupElement parse_group_element(std::string_view text, std::size_t rank);
GroupElement element_from_json(const Json &j, const GroupDescriptor &g);
Json to_json(const GroupElement &e);

// {"rank": n, "components": ["int"|"pdiv"|"rat", ...], "p": p, "units": [...]?}
GroupDescriptor group_from_json(const Json &j);
Json to_json(const GroupDescriptor &g);

// {direction, kind: element|subgroup|empty|whole, gamma?, closed?, level?, shift?}
Segment segment_from_json(const Json &j, const GroupDescriptor &g);
Json to_json(const Segment &s);
Json to_json(const IdealDescriptor &i);

// Series text: terms `c t^e` joined by + or -, e a rational or a coordinate tuple; a bare
// integer is a constant term. ParseError with position.
SeriesElement parse_series(std::string_view text, const FieldModel &k);
std::string format_series(const SeriesElement &s);
Json to_json(const PatternSeries &s);

// {"name"?, "residue_degree"?}; the characteristic is the group prime.
FieldModel field_from_json(const Json &j, const GroupDescriptor &g);

// Extension block of a scenario. `depth` is the schedule length for the defect kinds.
ExtensionDatum extension_from_json(const Json &j, const FieldModel &k, long depth);

// Evaluation model for the same extension block: the generator becomes the L\K domain,
// exact for Artin-Schreier roots, declared (schedule and approach only) otherwise.
// Synthetic and defectless blocks give a model without generators.
EvalModel eval_model_from_json(const Json &j, const FieldModel &k, long depth);

Json to_json(const DefectClassification &c, const ExtensionDatum &e);
Json to_json(const DefectlessAnalysis &a);
Json to_json(const OmegaPresentation &o);
Json to_json(const Annihilator &a);
Json to_json(const ConstructionPlan &plan);
Json to_json(const VerificationReport &r);
Json to_json(const AgreementReport &r);
Json to_json(const EvalResult &r);

// Two-space indentation and a trailing newline.
std::string dump(const Json &j);

} // namespace vcoarse

#endif

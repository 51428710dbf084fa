#include <algorithm>
#include <cctype>

#include <vcoarse/errors.hpp>
#include <vcoarse/io.hpp>

namespace vcoarse
{

// ---------------------------------------------------------------------------
// Schema checking

void SchemaCheck::throw_if_failed() const
{
    if (!errors_.empty()) {
        throw SchemaError(errors_);
    }
}

namespace
{

const char *type_name(Json::value_t t)
{
    switch (t) {
        case Json::value_t::object: return "an object";
        case Json::value_t::array: return "an array";
        case Json::value_t::string: return "a string";
        case Json::value_t::boolean: return "a boolean";
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned: return "an integer";
        default: return "a value";
    }
}

bool has_type(const Json &j, Json::value_t t)
{
    if (t == Json::value_t::number_integer || t == Json::value_t::number_unsigned) {
        return j.is_number_integer();
    }
    if (t == Json::value_t::discarded) {
        return true;
    }
    return j.type() == t;
}

std::string join_path(const std::string &path, const std::string &key)
{
    return path.empty() ? key : path + "." + key;
}

} // namespace

const Json *SchemaCheck::optional(const Json &obj, const std::string &path, const std::string &key, Json::value_t type)
{
    if (!obj.is_object()) {
        return nullptr;
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return nullptr;
    }
    if (!has_type(*it, type)) {
        fail(join_path(path, key), std::string("must be ") + type_name(type));
        return nullptr;
    }
    return &*it;
}

const Json *SchemaCheck::require(const Json &obj, const std::string &path, const std::string &key, Json::value_t type)
{
    if (!obj.is_object()) {
        fail(path.empty() ? "(document)" : path, "must be an object");
        return nullptr;
    }
    if (!obj.contains(key)) {
        fail(join_path(path, key), "is required");
        return nullptr;
    }
    return optional(obj, path, key, type);
}

void SchemaCheck::only(const Json &obj, const std::string &path, const std::vector<std::string> &allowed)
{
    if (!obj.is_object()) {
        return;
    }
    for (const auto &[key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(join_path(path, key), "unknown field");
        }
    }
}

// ---------------------------------------------------------------------------
// Group elements

namespace
{

std::vector<std::string> split_tuple(std::string_view text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

GroupElement parse_group_element(std::string_view text, std::size_t rank)
{
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    std::vector<Rational> coords;
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') {
            throw StructuralError("unterminated coordinate tuple '" + std::string(text) + "'");
        }
        for (const std::string &part : split_tuple(s.substr(1, s.size() - 2))) {
            coords.push_back(parse_rational(part));
        }
    } else {
        coords.push_back(parse_rational(s));
    }
    if (coords.size() != rank) {
        throw StructuralError("'" + std::string(text) + "' has " + std::to_string(coords.size())
                              + " coordinates, expected " + std::to_string(rank));
    }
    return GroupElement(std::move(coords));
}

GroupElement element_from_json(const Json &j, const GroupDescriptor &g)
{
    GroupElement e;
    if (j.is_string()) {
        e = parse_group_element(j.get<std::string>(), g.rank());
    } else if (j.is_number_integer()) {
        e = parse_group_element(std::to_string(j.get<long>()), g.rank());
    } else if (j.is_array()) {
        std::vector<Rational> coords;
        for (const Json &c : j) {
            if (c.is_string()) {
                coords.push_back(parse_rational(c.get<std::string>()));
            } else if (c.is_number_integer()) {
                coords.emplace_back(c.get<long>());
            } else {
                throw StructuralError("coordinates must be rationals written as strings or integers");
            }
        }
        if (coords.size() != g.rank()) {
            throw StructuralError("element has " + std::to_string(coords.size()) + " coordinates, expected "
                                  + std::to_string(g.rank()));
        }
        e = GroupElement(std::move(coords));
    } else {
        throw StructuralError("group element must be a string, an integer or an array");
    }
    g.require(e);
    return e;
}

Json to_json(const GroupElement &e)
{
    Json out = Json::array();
    for (const Rational &c : e.coords()) {
        out.push_back(to_string(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Groups

GroupDescriptor group_from_json(const Json &j)
{
    SchemaCheck check;
    check.only(j, "group", {"rank", "components", "p", "units"});
    const Json *rank = check.require(j, "group", "rank", Json::value_t::number_integer);
    const Json *components = check.require(j, "group", "components", Json::value_t::array);
    const Json *p = check.require(j, "group", "p", Json::value_t::number_integer);
    const Json *units = check.optional(j, "group", "units", Json::value_t::array);
    std::vector<Component> parts;
    if (components) {
        for (std::size_t i = 0; i < components->size(); ++i) {
            const Json &c = (*components)[i];
            const std::string path = "group.components[" + std::to_string(i) + "]";
            if (!c.is_string()) {
                check.fail(path, "must be a string");
                continue;
            }
            const std::string s = c.get<std::string>();
            if (s == "int") {
                parts.push_back({ComponentKind::Int, 1});
            } else if (s == "pdiv") {
                parts.push_back({ComponentKind::PDiv, 1});
            } else if (s == "rat") {
                parts.push_back({ComponentKind::Rat, 1});
            } else {
                check.fail(path, "must be one of int, pdiv, rat (got '" + s + "')");
            }
        }
        if (rank && rank->get<long>() != static_cast<long>(components->size())) {
            check.fail("group.rank", "is " + std::to_string(rank->get<long>()) + " but "
                                         + std::to_string(components->size()) + " components are listed");
        }
    }
    if (rank && rank->get<long>() < 1) {
        check.fail("group.rank", "must be at least 1");
    }
    if (p && !is_prime(p->get<long>())) {
        check.fail("group.p", "must be a prime");
    }
    if (units) {
        if (units->size() != parts.size()) {
            check.fail("group.units", "needs one entry per component");
        } else {
            for (std::size_t i = 0; i < units->size(); ++i) {
                const std::string path = "group.units[" + std::to_string(i) + "]";
                try {
                    const Json &u = (*units)[i];
                    parts[i].unit = u.is_number_integer() ? Rational(u.get<long>()) : parse_rational(u.get<std::string>());
                    if (parts[i].unit <= 0) {
                        check.fail(path, "must be positive");
                    }
                } catch (const std::exception &e) {
                    check.fail(path, e.what());
                }
            }
        }
    }
    check.throw_if_failed();
    return GroupDescriptor(std::move(parts), p->get<long>());
}

Json to_json(const GroupDescriptor &g)
{
    Json components = Json::array();
    Json units = Json::array();
    for (const Component &c : g.components()) {
        components.push_back(to_string(c.kind));
        units.push_back(to_string(c.unit));
    }
    return Json{{"rank", g.rank()}, {"components", components}, {"p", g.prime()}, {"units", units}};
}

// ---------------------------------------------------------------------------
// Segments

Segment segment_from_json(const Json &j, const GroupDescriptor &g)
{
    SchemaCheck check;
    check.only(j, "segment", {"direction", "kind", "gamma", "closed", "level", "shift", "text"});
    const Json *dir = check.require(j, "segment", "direction", Json::value_t::string);
    const Json *kind = check.require(j, "segment", "kind", Json::value_t::string);
    const Json *closed = check.optional(j, "segment", "closed", Json::value_t::boolean);
    Direction d = Direction::Final;
    if (dir) {
        const std::string s = dir->get<std::string>();
        if (s == "initial") {
            d = Direction::Initial;
        } else if (s != "final") {
            check.fail("segment.direction", "must be final or initial");
        }
    }
    check.throw_if_failed();
    const std::string k = kind->get<std::string>();
    const bool is_closed = closed ? closed->get<bool>() : false;
    if (k == "empty") {
        return Segment::empty(g, d);
    }
    if (k == "whole") {
        return Segment::whole(g, d);
    }
    if (k == "element") {
        const Json *gamma = check.require(j, "segment", "gamma", Json::value_t::discarded);
        check.throw_if_failed();
        try {
            return Segment::element_cut(g, d, element_from_json(*gamma, g), is_closed);
        } catch (const StructuralError &e) {
            throw SchemaError({std::string("segment.gamma: ") + e.what()});
        }
    }
    if (k == "subgroup") {
        const Json *level = check.require(j, "segment", "level", Json::value_t::number_integer);
        const Json *shift = check.optional(j, "segment", "shift", Json::value_t::discarded);
        if (level && (level->get<long>() < 0 || level->get<long>() > static_cast<long>(g.rank()))) {
            check.fail("segment.level", "must lie in 0.." + std::to_string(g.rank()));
        }
        check.throw_if_failed();
        try {
            const GroupElement d0 = shift ? element_from_json(*shift, g) : g.zero();
            return Segment(g, d, static_cast<std::size_t>(level->get<long>()), d0, is_closed);
        } catch (const StructuralError &e) {
            throw SchemaError({std::string("segment.shift: ") + e.what()});
        }
    }
    throw SchemaError({"segment.kind: must be element, subgroup, empty or whole (got '" + k + "')"});
}

Json to_json(const Segment &s)
{
    Json out{{"direction", s.direction() == Direction::Final ? "final" : "initial"}, {"text", s.str()}};
    if (s.is_empty()) {
        out["kind"] = "empty";
    } else if (s.is_whole()) {
        out["kind"] = "whole";
    } else if (s.is_element_cut()) {
        out["kind"] = "element";
        out["gamma"] = to_json(s.shift());
        out["closed"] = s.closed();
    } else {
        out["kind"] = "subgroup";
        out["level"] = s.level();
        out["shift"] = to_json(s.shift());
        out["closed"] = s.closed();
    }
    return out;
}

Json to_json(const IdealDescriptor &i)
{
    return Json{{"label", i.label}, {"values", to_json(i.values)}, {"principal", i.principal()}};
}

// ---------------------------------------------------------------------------
// Series

SeriesElement parse_series(std::string_view text, const FieldModel &k)
{
    const GroupDescriptor &g = k.value_group;
    std::size_t i = 0;
    auto skip = [&]() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
    };
    SeriesElement out;
    bool first = true;
    skip();
    if (i == text.size()) {
        throw ParseError("empty series", 0);
    }
    if (text.substr(i) == "0") {
        return out;
    }
    while (true) {
        skip();
        if (i == text.size()) {
            break;
        }
        long sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else if (!first) {
            throw ParseError("expected + or -", i);
        }
        first = false;
        const std::size_t term_start = i;
        long coef = 1;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            coef = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                coef = (coef * 10 + (text[i] - '0')) % 1000003;
                ++i;
            }
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip();
            }
        }
        GroupElement e = g.zero();
        if (i < text.size() && text[i] == 't') {
            ++i;
            skip();
            if (i >= text.size() || text[i] != '^') {
                // Plain t: exponent 1 in the dominant coordinate.
                e = g.basis(0);
            } else {
                ++i;
                skip();
                const std::size_t exp_start = i;
                if (i < text.size() && text[i] == '(') {
                    while (i < text.size() && text[i] != ')') {
                        ++i;
                    }
                    if (i == text.size()) {
                        throw ParseError("unterminated exponent tuple", exp_start);
                    }
                    ++i;
                } else {
                    if (i < text.size() && text[i] == '-') {
                        ++i;
                    }
                    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) {
                        ++i;
                    }
                }
                try {
                    e = parse_group_element(text.substr(exp_start, i - exp_start), g.rank());
                } catch (const StructuralError &err) {
                    throw ParseError(err.what(), exp_start);
                }
                if (!g.contains(e)) {
                    throw ParseError("exponent " + e.str() + " is outside the value group", exp_start);
                }
            }
        } else if (i == term_start) {
            throw ParseError("expected a coefficient or t^exponent", i);
        }
        const Coef c = k.residue.from_int(sign * coef);
        out = add(k, out, SeriesElement::monomial(e, c));
    }
    return out;
}

std::string format_series(const SeriesElement &s)
{
    if (s.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto &[e, c] : s.terms()) {
        if (!out.empty()) {
            out += " + ";
        }
        out += std::to_string(c) + " t^" + e.str();
    }
    return out;
}

Json to_json(const PatternSeries &s)
{
    Json tails = Json::array();
    for (const Tail &t : s.tails()) {
        tails.push_back(Json{{"coef", t.coef}, {"first_exponent", to_json(t.first_exponent())}, {"ray", to_json(t.ray)},
                             {"start", t.start}});
    }
    Json out{{"finite", format_series(s.finite_part())}, {"tails", tails}};
    const auto v = s.valuation();
    out["valuation"] = v ? to_json(*v) : Json("inf");
    return out;
}

FieldModel field_from_json(const Json &j, const GroupDescriptor &g)
{
    SchemaCheck check;
    check.only(j, "field", {"name", "residue_degree"});
    const Json *name = check.optional(j, "field", "name", Json::value_t::string);
    const Json *degree = check.optional(j, "field", "residue_degree", Json::value_t::number_integer);
    if (degree && degree->get<long>() < 1) {
        check.fail("field.residue_degree", "must be positive");
    }
    check.throw_if_failed();
    const unsigned m = degree ? static_cast<unsigned>(degree->get<long>()) : 1u;
    const std::string n = name ? name->get<std::string>() : "F_" + std::to_string(g.prime()) + "((t^G))";
    try {
        return FieldModel(n, FiniteField(static_cast<unsigned>(g.prime()), m), g);
    } catch (const UnsupportedError &e) {
        throw SchemaError({std::string("field.residue_degree: ") + e.what()});
    }
}

// ---------------------------------------------------------------------------
// Extensions

namespace
{

// Root of X^p - X = rhs for a single-term rhs = c t^e, e < 0.
PatternSeries artin_schreier_generator(const Json &j, const FieldModel &k)
{
    SchemaCheck check;
    check.only(j, "extension", {"kind", "name", "rhs"});
    const Json *rhs = check.require(j, "extension", "rhs", Json::value_t::string);
    check.throw_if_failed();
    SeriesElement r;
    try {
        r = parse_series(rhs->get<std::string>(), k);
    } catch (const ParseError &e) {
        throw SchemaError({std::string("extension.rhs: ") + e.what()});
    }
    if (r.terms().size() != 1 || r.valuation()->sign() >= 0) {
        throw SchemaError({"extension.rhs: must be a single term c t^e with e < 0"});
    }
    const auto &[e, c] = *r.terms().begin();
    if (k.residue.frobenius(c) != c) {
        throw SchemaError({"extension.rhs: coefficient must lie in the prime field"});
    }
    return artin_schreier_root(k, e, c);
}

} // namespace

ExtensionDatum extension_from_json(const Json &j, const FieldModel &k, long depth)
{
    const GroupDescriptor &g = k.value_group;
    SchemaCheck check;
    const Json *kind = check.require(j, "extension", "kind", Json::value_t::string);
    const Json *name = check.optional(j, "extension", "name", Json::value_t::string);
    check.throw_if_failed();
    const std::string kd = kind->get<std::string>();
    const std::string nm = name ? name->get<std::string>() : kd;

    auto element = [&](const Json *x, const std::string &path) -> std::optional<GroupElement> {
        if (!x) {
            return std::nullopt;
        }
        try {
            return element_from_json(*x, g);
        } catch (const StructuralError &e) {
            check.fail(path, e.what());
            return std::nullopt;
        }
    };

    if (kd == "artin_schreier") {
        return artin_schreier_defect(nm, k, artin_schreier_generator(j, k), depth);
    }
    if (kd == "mixed") {
        check.only(j, "extension", {"kind", "name"});
        check.throw_if_failed();
        return mixed_characteristic_defect(g, depth);
    }
    if (kd == "kummer") {
        check.only(j, "extension", {"kind", "name", "vp", "approach", "schedule"});
        const Json *vp = check.require(j, "extension", "vp", Json::value_t::discarded);
        const Json *approach = check.require(j, "extension", "approach", Json::value_t::object);
        const Json *schedule = check.require(j, "extension", "schedule", Json::value_t::array);
        const auto v = element(vp, "extension.vp");
        std::vector<GroupElement> sch;
        if (schedule) {
            for (std::size_t i = 0; i < schedule->size(); ++i) {
                if (auto s = element(&(*schedule)[i], "extension.schedule[" + std::to_string(i) + "]")) {
                    sch.push_back(*s);
                }
            }
        }
        check.throw_if_failed();
        const Segment a = segment_from_json(*approach, g);
        for (std::size_t i = 0; i < sch.size(); ++i) {
            if (!a.contains(sch[i]) || (i > 0 && !(sch[i - 1] < sch[i]))) {
                throw SchemaError({"extension.schedule[" + std::to_string(i)
                                   + "]: schedule values must increase strictly inside the approach set"});
            }
        }
        const long n = static_cast<long>(sch.size());
        return kummer_defect(nm, g, g.prime(), *v, a, std::move(sch), n);
    }
    if (kd == "synthetic") {
        check.only(j, "extension", {"kind", "name", "sigma"});
        const Json *sigma = check.require(j, "extension", "sigma", Json::value_t::object);
        check.throw_if_failed();
        return synthetic_defect(nm, g, g.prime(), segment_from_json(*sigma, g));
    }
    if (kd == "defectless") {
        check.only(j, "extension", {"kind", "name", "degree", "generator", "residue_characteristic"});
        const Json *degree = check.require(j, "extension", "degree", Json::value_t::number_integer);
        const Json *gen = check.require(j, "extension", "generator", Json::value_t::object);
        const Json *rc = check.optional(j, "extension", "residue_characteristic", Json::value_t::number_integer);
        DefectlessGenerator dg;
        if (gen) {
            check.only(*gen, "extension.generator", {"type", "vx0", "vp"});
            const Json *type = check.require(*gen, "extension.generator", "type", Json::value_t::string);
            const Json *vx0 = check.require(*gen, "extension.generator", "vx0", Json::value_t::string);
            const Json *vp = check.optional(*gen, "extension.generator", "vp", Json::value_t::discarded);
            if (type) {
                const std::string t = type->get<std::string>();
                if (t == "artin_schreier") {
                    dg.type = DefectlessGenerator::Type::ArtinSchreier;
                } else if (t == "kummer_2a") {
                    dg.type = DefectlessGenerator::Type::Kummer2a;
                } else if (t == "kummer_2b") {
                    dg.type = DefectlessGenerator::Type::Kummer2b;
                } else if (t == "tame_kummer") {
                    dg.type = DefectlessGenerator::Type::TameKummer;
                } else {
                    check.fail("extension.generator.type",
                               "must be artin_schreier, kummer_2a, kummer_2b or tame_kummer (got '" + t + "')");
                }
            }
            // vx0 lies outside vK by definition, so only its shape is checked here.
            if (vx0) {
                try {
                    dg.vx0 = parse_group_element(vx0->get<std::string>(), g.rank());
                } catch (const StructuralError &e) {
                    check.fail("extension.generator.vx0", e.what());
                }
            }
            dg.vp = element(vp, "extension.generator.vp");
        }
        if (degree && !is_prime(degree->get<long>())) {
            check.fail("extension.degree", "must be a prime");
        }
        check.throw_if_failed();
        const unsigned residue = rc ? static_cast<unsigned>(rc->get<long>()) : static_cast<unsigned>(g.prime());
        return defectless_extension(nm, g, degree->get<long>(), dg, residue);
    }
    throw SchemaError({"extension.kind: must be artin_schreier, mixed, kummer, synthetic or defectless (got '" + kd + "')"});
}

EvalModel eval_model_from_json(const Json &j, const FieldModel &k, long depth)
{
    const ExtensionDatum e = extension_from_json(j, k, depth);
    const GroupDescriptor &g = k.value_group;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "artin_schreier") {
        PatternSeries theta = artin_schreier_generator(j, k);
        const GroupElement v = *theta.valuation();
        ImmediateElement x{e.name, ImmediateElement::Relation::ArtinSchreier, std::move(theta), *e.approach, e.schedule, v};
        return equal_char_model(k, {std::move(x)});
    }
    if (kind == "mixed") {
        ImmediateElement x{e.name, ImmediateElement::Relation::ArtinSchreier, std::nullopt, *e.approach, e.schedule,
                           e.schedule.front()};
        return mixed_char_model(g, g.basis(0), {std::move(x)});
    }
    if (kind == "kummer") {
        // eta normalized to a 1-unit.
        ImmediateElement x{e.name, ImmediateElement::Relation::Kummer, std::nullopt, *e.approach, e.schedule, g.zero()};
        const GroupElement vp = element_from_json(j.at("vp"), g);
        return mixed_char_model(g, vp, {std::move(x)});
    }
    return equal_char_model(k, {});
}

// ---------------------------------------------------------------------------
// Reports

namespace
{

Json schedule_json(const std::vector<GroupElement> &schedule)
{
    Json out = Json::array();
    for (const GroupElement &s : schedule) {
        out.push_back(to_json(s));
    }
    return out;
}

} // namespace

Json to_json(const DefectClassification &c, const ExtensionDatum &e)
{
    Json out{
        {"kind", to_string(c.kind)},
        {"extension_kind", to_string(e.kind)},
        {"name", e.name},
        {"sigma_segment", to_json(c.sigma)},
        {"H_E_level", c.h_e.level()},
        {"I_E", to_json(c.i_e)},
        {"M_E", to_json(c.m_e)},
        {"criteria",
         Json{{"ideal_route", c.certificate.ideal_route_independent ? "INDEPENDENT" : "DEPENDENT"},
              {"segment_route", c.certificate.segment_route_independent ? "INDEPENDENT" : "DEPENDENT"}}},
        {"truncation_depth", c.certificate.depth},
        {"synthetic", c.certificate.synthetic},
        {"partial", c.certificate.partial},
        {"schedule", schedule_json(c.certificate.schedule)},
    };
    if (e.approach) {
        out["approach"] = to_json(*e.approach);
    }
    if (c.certificate.synthetic) {
        out["marker"] = "SYNTHETIC";
    }
    return out;
}

Json to_json(const DefectlessAnalysis &a)
{
    Json out{{"value_group_L", to_json(a.value_group_l)}, {"H_E_level", a.h_e.level()},
             {"case", to_string(a.dl_case)},          {"M_E", to_json(a.m_e)},
             {"split_index", a.split_index},           {"flags", a.flags}};
    if (a.i_e) {
        out["I_E"] = to_json(*a.i_e);
    }
    return out;
}

Json to_json(const OmegaPresentation &o)
{
    return Json{{"form", to_string(o.form)}, {"numerator", to_json(o.numerator)}, {"exponent", o.exponent},
                {"power", to_json(o.power)}, {"is_zero", o.is_zero},           {"provenance", o.provenance}};
}

Json to_json(const Annihilator &a)
{
    return Json{{"ideal", to_json(a.ideal)}, {"is_max_ideal", a.is_max_ideal}, {"infimum_outside_base", a.infimum_outside_base}};
}

Json to_json(const ConstructionPlan &plan)
{
    Json witnesses = Json::array();
    for (const Witness &w : plan.witnesses) {
        Json x{{"level", w.level}, {"name", w.name}, {"mixed", w.mixed}};
        if (w.theta) {
            x["theta"] = to_json(*w.theta);
        }
        witnesses.push_back(x);
    }
    Json exclusions = Json::array();
    for (const Exclusion &x : plan.exclusions) {
        exclusions.push_back(Json{{"level", x.level}, {"status", x.status}, {"reason", x.reason}});
    }
    Json decompositions = Json::array();
    for (const Decomposition &d : plan.decompositions) {
        decompositions.push_back(Json{{"level", d.level}, {"outer_rank", d.outer_rank}, {"inner_rank", d.inner_rank}});
    }
    return Json{{"rank", plan.rank},
                {"selected", plan.selected},
                {"p", plan.p},
                {"char", to_string(plan.char_case)},
                {"value_group", to_json(plan.model.value_group)},
                {"witnesses", witnesses},
                {"exclusions", exclusions},
                {"decompositions", decompositions},
                {"declared_flags", plan.declared_flags}};
}

Json to_json(const VerificationReport &r)
{
    Json checks = Json::array();
    for (const WitnessCheck &c : r.checks) {
        checks.push_back(Json{{"level", c.level},
                              {"name", c.name},
                              {"realized_level", c.realized_level},
                              {"kind", to_string(c.kind)},
                              {"approach", to_json(c.approach)},
                              {"schedule", schedule_json(c.schedule)},
                              {"identity_exact", c.identity_exact},
                              {"lift_agrees", c.lift_agrees},
                              {"pass", c.pass}});
    }
    Json bijection = Json::array();
    for (const auto &[i, level] : r.principal_bijection) {
        bijection.push_back(Json{{"index", i}, {"level", level}});
    }
    return Json{{"checks", checks},
                {"principal_bijection", bijection},
                {"chain_isomorphic", r.chain_isomorphic},
                {"drvg", r.drvg},
                {"depth", r.depth},
                {"pass", r.pass}};
}

Json to_json(const AgreementReport &r)
{
    return Json{{"samples", r.samples},
                {"agreements", r.agreements},
                {"disagreements", r.disagreements},
                {"unknown", r.unknown},
                {"unknown_rate", r.unknown_rate()},
                {"oracle_decided", r.oracle_decided},
                {"budget", r.budget},
                {"seed", r.seed},
                {"disagreement_details", r.disagreement_details}};
}

Json to_json(const EvalResult &r)
{
    return Json{{"value", to_string(r.value)},
                {"mode", to_string(r.mode)},
                {"witnesses", r.witnesses},
                {"candidates_used", r.candidates_used}};
}

std::string dump(const Json &j)
{
    return j.dump(2) + "\n";
}

} // namespace vcoarse

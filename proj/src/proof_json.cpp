#include "qml/proof_json.hpp"

#include <string>

namespace qml {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw error("proof JSON: " + where + ": " + what);
}

formula formula_from(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a formula string");
    try {
        return parse(v.get<std::string>());
    } catch (const parse_error& e) {
        bad(where, e.what());
    }
}

formula_set side_from(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected an array of formula strings");
    std::vector<formula> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(formula_from(v[i], where + "[" + std::to_string(i) + "]"));
    return formula_set(std::move(out));
}

derivation node_from(const json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected a node object");
    if (!j.contains("conclusion")) bad(where, "missing \"conclusion\"");
    if (!j.contains("rule")) bad(where, "missing \"rule\"");
    const json& jc = j["conclusion"];
    if (!jc.is_object()) bad(where + ".conclusion", "expected an object");
    sequent conclusion{
        side_from(jc.contains("left") ? jc["left"] : json::array(), where + ".conclusion.left"),
        side_from(jc.contains("right") ? jc["right"] : json::array(),
                  where + ".conclusion.right")};

    const json& jr = j["rule"];
    if (!jr.is_object() || !jr.contains("name") || !jr["name"].is_string())
        bad(where + ".rule", "expected an object with a \"name\" string");
    std::string name = jr["name"].get<std::string>();
    auto r = rule_from_name(name);
    if (!r) bad(where + ".rule.name", "unknown rule '" + name + "'");

    std::vector<formula> params;
    int want = rule_param_count(*r);
    if (want == 1) {
        if (!jr.contains("formula"))
            bad(where + ".rule", name + " needs a \"formula\" parameter");
        params.push_back(formula_from(jr["formula"], where + ".rule.formula"));
    } else if (want == 2) {
        if (!jr.contains("formulas") || !jr["formulas"].is_array() ||
            jr["formulas"].size() != 2)
            bad(where + ".rule", name + " needs a \"formulas\" array of two entries");
        params.push_back(formula_from(jr["formulas"][0], where + ".rule.formulas[0]"));
        params.push_back(formula_from(jr["formulas"][1], where + ".rule.formulas[1]"));
    } else if (jr.contains("formula") || jr.contains("formulas")) {
        bad(where + ".rule", name + " takes no formula parameters");
    }

    derivation d{std::move(conclusion), {*r, std::move(params)}, {}};
    if (j.contains("premises")) {
        const json& jp = j["premises"];
        if (!jp.is_array()) bad(where + ".premises", "expected an array of nodes");
        for (std::size_t i = 0; i < jp.size(); ++i)
            d.premises.push_back(
                node_from(jp[i], where + ".premises[" + std::to_string(i) + "]"));
    }
    return d;
}

json side_to(const formula_set& fs) {
    json out = json::array();
    for (const formula& f : fs) out.push_back(print(f));
    return out;
}

}  // namespace

derivation derivation_from_json(const nlohmann::json& j) {
    return node_from(j, "root");
}

nlohmann::json derivation_to_json(const derivation& d) {
    json j;
    j["conclusion"] = {{"left", side_to(d.conclusion.left)},
                       {"right", side_to(d.conclusion.right)}};
    json r;
    r["name"] = std::string(rule_name(d.inst.r));
    if (d.inst.params.size() == 1) r["formula"] = print(d.inst.params[0]);
    if (d.inst.params.size() == 2)
        r["formulas"] = {print(d.inst.params[0]), print(d.inst.params[1])};
    j["rule"] = std::move(r);
    if (!d.premises.empty()) {
        json p = json::array();
        for (const derivation& child : d.premises) p.push_back(derivation_to_json(child));
        j["premises"] = std::move(p);
    }
    return j;
}

}  // namespace qml

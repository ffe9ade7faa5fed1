#include "qml/model_json.hpp"

#include <set>
#include <string>

namespace qml {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw error("model JSON: " + where + ": " + what);
}

int world_index(const json& v, int n, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected a world index (integer)");
    auto i = v.get<std::int64_t>();
    if (i < 0 || i >= n)
        bad(where, "world index " + std::to_string(i) + " out of range 0.." +
                       std::to_string(n - 1));
    return static_cast<int>(i);
}

relation relation_from(const json& j, int n, const std::string& key) {
    if (!j.is_array()) bad(key, "expected an array of [i, j] pairs");
    relation r(n);
    for (std::size_t idx = 0; idx < j.size(); ++idx) {
        const json& pair = j[idx];
        std::string where = key + "[" + std::to_string(idx) + "]";
        if (!pair.is_array() || pair.size() != 2) bad(where, "expected a pair [i, j]");
        r.set(world_index(pair[0], n, where), world_index(pair[1], n, where));
    }
    return r;
}

}  // namespace

structure structure_from_json(const json& j) {
    if (!j.is_object()) bad("root", "expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "worlds" && key != "rq" && key != "rm" && key != "valuation")
            bad(key, "unknown key (expected worlds, rq, rm, valuation)");
    }
    if (!j.contains("worlds")) bad("root", "missing \"worlds\"");
    const json& jw = j["worlds"];
    if (!jw.is_array() || jw.empty()) bad("worlds", "expected a non-empty array of names");
    if (jw.size() > static_cast<std::size_t>(k_max_worlds))
        bad("worlds", "at most " + std::to_string(k_max_worlds) + " worlds supported");
    int n = static_cast<int>(jw.size());

    std::vector<std::string> names;
    for (std::size_t i = 0; i < jw.size(); ++i) {
        if (!jw[i].is_string())
            bad("worlds[" + std::to_string(i) + "]", "expected a string name");
        names.push_back(jw[i].get<std::string>());
    }

    relation rq = relation_from(j.contains("rq") ? j["rq"] : json::array(), n, "rq");
    for (int i = 0; i < n; ++i) rq.set(i, i);  // reflexive pairs may be omitted
    relation rm = relation_from(j.contains("rm") ? j["rm"] : json::array(), n, "rm");

    std::map<std::string, world_set> valuation;
    if (j.contains("valuation")) {
        const json& jv = j["valuation"];
        if (!jv.is_object()) bad("valuation", "expected an object atom -> world indices");
        for (const auto& [atom, worlds] : jv.items()) {
            std::string where = "valuation." + atom;
            if (!worlds.is_array()) bad(where, "expected an array of world indices");
            world_set ws(n);
            for (const json& v : worlds) ws.add(world_index(v, n, where));
            valuation.emplace(atom, ws);
        }
    }
    try {
        return structure(std::move(rq), std::move(rm), std::move(valuation),
                         std::move(names));
    } catch (const error& e) {
        bad("root", e.what());
    }
}

nlohmann::json structure_to_json(const structure& s) {
    json j;
    j["worlds"] = s.world_names();
    auto pairs = [&](const relation& r) {
        json out = json::array();
        for (int i = 0; i < s.world_count(); ++i)
            for (int k = 0; k < s.world_count(); ++k)
                if (r.at(i, k)) out.push_back({i, k});
        return out;
    };
    j["rq"] = pairs(s.rq());
    j["rm"] = pairs(s.rm());
    json val = json::object();
    for (const auto& [atom, worlds] : s.valuation()) val[atom] = worlds.members();
    j["valuation"] = std::move(val);
    return j;
}

}  // namespace qml

#include "mctree/serialize.hpp"

#include "mctree/error.hpp"

#include <algorithm>
#include <map>

namespace mctree {

Json rational_json(const Rational& x) { return to_string(x); }

Json rationals_json(const std::vector<Rational>& xs) {
    Json out = Json::array();
    for (const auto& x : xs)
        out.push_back(rational_json(x));
    return out;
}

Json matrix_json(const RationalMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (const auto& x : m.row(i))
            row.push_back(rational_json(x));
        out.push_back(std::move(row));
    }
    return out;
}

Json float_json(const Rational& x) { return rounded_12(x); }

Json floats_json(const std::vector<Rational>& xs) {
    Json out = Json::array();
    for (const auto& x : xs)
        out.push_back(float_json(x));
    return out;
}

Json float_matrix_json(const RationalMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (const auto& x : m.row(i))
            row.push_back(float_json(x));
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

Json labelled_roots(const StateSet& roots, const std::vector<std::string>& labels) {
    Json out = Json::array();
    for (State r : roots)
        out.push_back(labels.at(r));
    return out;
}

Json pointer_map(const std::vector<State>& next, const std::vector<std::string>& labels) {
    Json out = Json::object();
    for (State v = 0; v < next.size(); ++v)
        if (next[v] != no_state)
            out[labels.at(v)] = labels.at(next[v]);
    return out;
}

State lookup(const std::map<std::string, State>& index, const Json& label) {
    if (!label.is_string())
        throw ParseError("state label " + label.dump() + " is not a string");
    auto it = index.find(label.get<std::string>());
    if (it == index.end())
        throw ParseError("unknown state label " + label.dump());
    return it->second;
}

std::pair<StateSet, std::vector<State>> read_pointers(const Json& doc, const std::vector<std::string>& labels) {
    if (!doc.is_object() || !doc.contains("roots") || !doc.contains("parent") || !doc["roots"].is_array() ||
        !doc["parent"].is_object())
        throw ParseError("expected {\"roots\": [...], \"parent\": {...}}");
    std::map<std::string, State> index;
    for (State v = 0; v < labels.size(); ++v)
        index[labels[v]] = v;
    std::vector<State> roots;
    for (const auto& r : doc["roots"])
        roots.push_back(lookup(index, r));
    std::vector<State> next(labels.size(), no_state);
    for (const auto& [key, value] : doc["parent"].items())
        next[lookup(index, Json(key))] = lookup(index, value);
    return {StateSet(std::move(roots)), std::move(next)};
}

} // namespace

Json forest_json(const RootedForest& f, const std::vector<std::string>& labels) {
    return Json{{"roots", labelled_roots(f.roots(), labels)}, {"parent", pointer_map(f.parents(), labels)}};
}

Json ecrsf_json(const Ecrsf& f, const std::vector<std::string>& labels) {
    Json cycles = Json::array();
    for (const auto& c : f.cycles()) {
        Json cycle = Json::array();
        for (State v : c)
            cycle.push_back(labels.at(v));
        cycles.push_back(std::move(cycle));
    }
    return Json{{"roots", labelled_roots(f.tree_roots(), labels)},
                {"parent", pointer_map(f.successors(), labels)},
                {"cycles", std::move(cycles)}};
}

RootedForest forest_from_json(const Json& doc, const std::vector<std::string>& labels) {
    auto [roots, parent] = read_pointers(doc, labels);
    try {
        return RootedForest(std::move(roots), std::move(parent));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("not a rooted forest: ") + e.what());
    }
}

Ecrsf ecrsf_from_json(const Json& doc, const std::vector<std::string>& labels) {
    auto [roots, successor] = read_pointers(doc, labels);
    Ecrsf f = [&] {
        try {
            return Ecrsf(std::move(roots), std::move(successor));
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("not a cycle-rooted forest: ") + e.what());
        }
    }();
    if (doc.contains("cycles")) {
        std::vector<std::vector<State>> listed;
        std::map<std::string, State> index;
        for (State v = 0; v < labels.size(); ++v)
            index[labels[v]] = v;
        for (const auto& c : doc["cycles"]) {
            std::vector<State> cycle;
            for (const auto& v : c)
                cycle.push_back(lookup(index, v));
            listed.push_back(canonical_cycle(cycle));
        }
        std::sort(listed.begin(), listed.end());
        if (listed != f.cycles())
            throw ParseError("listed cycles disagree with the successor map");
    }
    return f;
}

} // namespace mctree

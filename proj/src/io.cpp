#include "mctree/io.hpp"

#include "mctree/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace mctree {

namespace {

using nlohmann::json;

Rational rational_from_json(const json& cell) {
    if (cell.is_string())
        return parse_rational(cell.get<std::string>());
    if (cell.is_number_integer())
        return Rational(Integer(std::to_string(cell.get<long long>())));
    throw ParseError("matrix entry " + cell.dump() + " is not an integer or a \"p/q\" string");
}

bool is_index_label(const std::string& s) {
    return !s.empty() && s.size() < 10 && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct EdgeLine {
    std::string tail;
    std::string head;
    Rational value;
    std::size_t line_no;
};

struct EdgeDocument {
    std::vector<EdgeLine> lines;
    std::vector<std::string> labels;
    std::map<std::string, State> index;
};

// Integer labels are taken as state indices; anything else is numbered in
// order of first appearance.
EdgeDocument read_edges(std::string_view source) {
    EdgeDocument doc;
    std::istringstream in{std::string(source)};
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::string> order;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream fields(raw);
        std::string tail, head, value, extra;
        if (!(fields >> tail))
            continue;
        if (!(fields >> head >> value) || (fields >> extra))
            throw ParseError("line " + std::to_string(line_no) + ": expected 'tail head value'");
        Rational r;
        try {
            r = parse_rational(value);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        for (const std::string& label : {tail, head})
            if (seen.insert(label).second)
                order.push_back(label);
        doc.lines.push_back({tail, head, r, line_no});
    }
    if (order.empty())
        throw ParseError("edge list declares no states");
    if (std::all_of(order.begin(), order.end(), is_index_label)) {
        std::size_t n = 0;
        for (const std::string& label : order)
            n = std::max<std::size_t>(n, std::stoul(label) + 1);
        doc.labels = default_labels(n);
        for (const std::string& label : order)
            doc.index[label] = std::stoul(label);
    } else {
        doc.labels = order;
        for (State s = 0; s < order.size(); ++s)
            doc.index[order[s]] = s;
    }
    return doc;
}

LabeledChain parse_matrix(std::string_view source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
        throw ParseError("matrix document needs a \"rows\" array");
    const json& rows = doc["rows"];
    const std::size_t n = rows.size();
    if (doc.contains("n")) {
        if (!doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() != n)
            throw ParseError("\"n\" does not match the number of rows");
    }
    if (n == 0)
        throw ParseError("matrix document has no rows");
    RationalMatrix entries(n, n);
    for (State i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            throw ParseError("row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
        for (State j = 0; j < n; ++j)
            entries(i, j) = rational_from_json(rows[i][j]);
    }
    std::vector<std::string> labels = default_labels(n);
    if (doc.contains("labels")) {
        const json& l = doc["labels"];
        if (!l.is_array() || l.size() != n)
            throw ParseError("\"labels\" must list one string per state");
        std::set<std::string> distinct;
        for (State i = 0; i < n; ++i) {
            if (!l[i].is_string())
                throw ParseError("labels must be strings");
            labels[i] = l[i].get<std::string>();
            if (!distinct.insert(labels[i]).second)
                throw ParseError("duplicate label '" + labels[i] + "'");
        }
    }
    return {TransitionMatrix(std::move(entries)), std::move(labels)};
}

LabeledChain parse_edge_chain(std::string_view source) {
    EdgeDocument doc = read_edges(source);
    const std::size_t n = doc.labels.size();
    RationalMatrix entries(n, n);
    std::set<std::pair<State, State>> filled;
    for (const EdgeLine& e : doc.lines) {
        State i = doc.index.at(e.tail), j = doc.index.at(e.head);
        if (!filled.insert({i, j}).second)
            throw ParseError("line " + std::to_string(e.line_no) + ": duplicate matrix cell (" + e.tail + ", " +
                             e.head + ")");
        entries(i, j) = e.value;
    }
    return {TransitionMatrix(std::move(entries)), std::move(doc.labels)};
}

} // namespace

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = std::to_string(i);
    return labels;
}

LabeledChain parse_chain(std::string_view source, ChainFormat format) {
    return format == ChainFormat::matrix ? parse_matrix(source) : parse_edge_chain(source);
}

LabeledDigraph parse_conductances(std::string_view source) {
    EdgeDocument doc = read_edges(source);
    std::vector<Arc> arcs;
    arcs.reserve(doc.lines.size());
    for (const EdgeLine& e : doc.lines)
        arcs.push_back({doc.index.at(e.tail), doc.index.at(e.head), e.value});
    const std::size_t n = doc.labels.size();
    return {WeightedDigraph(n, std::move(arcs)), std::move(doc.labels)};
}

nlohmann::json chain_to_json(const LabeledChain& chain) {
    const std::size_t n = chain.chain.size();
    json rows = json::array();
    for (State i = 0; i < n; ++i) {
        json row = json::array();
        for (State j = 0; j < n; ++j)
            row.push_back(to_string(chain.chain(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"n", n}, {"rows", std::move(rows)}, {"labels", chain.labels}};
}

std::string serialize_chain(const LabeledChain& chain) { return chain_to_json(chain).dump(); }

} // namespace mctree

#pragma once

#include "mctree/chain.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace mctree {

enum class ChainFormat { matrix, edges };

struct LabeledChain {
    TransitionMatrix chain;
    std::vector<std::string> labels;
};

struct LabeledDigraph {
    WeightedDigraph graph;
    std::vector<std::string> labels;
};

// Matrix document: {"n": int, "rows": [["p/q", ...], ...], "labels": [...]}.
// Edge list: one "tail head prob" triple per line, '#' starts a comment.
// Errors surface as ParseError (syntax) or InvalidChain (stochasticity).
LabeledChain parse_chain(std::string_view source, ChainFormat format);

// Edge list whose third column is a conductance rather than a probability.
LabeledDigraph parse_conductances(std::string_view source);

// Canonical matrix document; parse_chain(serialize_chain(c)) == c.
nlohmann::json chain_to_json(const LabeledChain& chain);
std::string serialize_chain(const LabeledChain& chain);

// Labels "0".."n-1".
std::vector<std::string> default_labels(std::size_t n);

} // namespace mctree

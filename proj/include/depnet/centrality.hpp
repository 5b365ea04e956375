#pragma once

#include <map>

#include "depnet/graph.hpp"

namespace depnet {

enum class GraphVariant { unweighted, weighted, weighted_lcc };

std::string_view to_string(GraphVariant variant);
std::optional<GraphVariant> parse_variant(std::string_view text);

// Katz centrality with per-node source terms: raw scores satisfy
//
//     x[v] = beta * sum over edges u->v of w(u,v) * (x[u] + b[u])
//
// i.e. x = sum_{k>=1} beta^k (W^T)^k b, a weighted count of all directed
// walks ending at v, attenuated by beta per hop. Papers have no in-edges, so
// their raw score is 0; a paper with citation weight c feeds beta*c*b[paper]
// into each package it mentions, and packages pass their own score plus
// baseline down their dependency edges.
struct CentralityConfig {
    double beta = 1.0;
    double baseline = 1.0;                         // uniform source term b
    std::map<NodeId, double> baseline_overrides;   // per-node exceptions
    GraphVariant variant = GraphVariant::weighted;
    double tolerance = 1e-10;
    int max_iterations = 10000;
    bool normalize = true;  // unit Euclidean norm over all scored nodes
};

struct CentralityResult {
    GraphVariant variant = GraphVariant::weighted;
    std::map<NodeId, double> raw;
    std::map<NodeId, double> normalized;  // empty when normalization was skipped
    bool converged = false;
    int iterations_used = 0;
    bool normalized_applied = false;

    // Normalized score when available, raw otherwise.
    double score(const NodeId& id) const;
};

// Exact single-pass accumulation in topological order. Throws CycleError on
// cyclic input (use katz_iterative there).
CentralityResult katz_exact_dag(const DependencyGraph& graph, const CentralityConfig& config);

// Fixed-point iteration x <- beta W^T (x + b) from x = 0. With non-negative
// weights the iterates grow monotonically toward the fixed point, so
// divergence shows up as unbounded monotone growth. Never returns a
// non-converged result: it throws DivergenceError instead.
CentralityResult katz_iterative(const DependencyGraph& graph, const CentralityConfig& config);

// Exact path when the graph is acyclic, iterative otherwise.
CentralityResult katz_centrality(const DependencyGraph& graph, const CentralityConfig& config);

// The three analysis variants: unweighted (all weights 1, full graph),
// weighted (as built, full graph), weighted_lcc (weighted scores on each
// ecosystem's largest connected component, normalized jointly; nodes outside
// every LCC are absent).
std::map<GraphVariant, CentralityResult> run_variants(const DependencyGraph& graph,
                                                      const CentralityConfig& base_config);

}  // namespace depnet

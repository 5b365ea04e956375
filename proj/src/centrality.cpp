#include "depnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "depnet/structure.hpp"

namespace depnet {

std::string_view to_string(GraphVariant variant) {
    switch (variant) {
        case GraphVariant::unweighted: return "unweighted";
        case GraphVariant::weighted: return "weighted";
        case GraphVariant::weighted_lcc: return "weighted_lcc";
    }
    return "?";
}

std::optional<GraphVariant> parse_variant(std::string_view text) {
    if (text == "unweighted") return GraphVariant::unweighted;
    if (text == "weighted") return GraphVariant::weighted;
    if (text == "weighted_lcc") return GraphVariant::weighted_lcc;
    return std::nullopt;
}

double CentralityResult::score(const NodeId& id) const {
    const auto& scores = normalized_applied ? normalized : raw;
    auto it = scores.find(id);
    return it == scores.end() ? 0.0 : it->second;
}

namespace {

double edge_weight(const GraphEdge& edge, GraphVariant variant) {
    return variant == GraphVariant::unweighted ? 1.0 : edge.weight;
}

std::vector<double> baselines(const DependencyGraph& graph, const CentralityConfig& config) {
    if (config.beta <= 0) throw std::invalid_argument("beta must be positive");
    if (config.tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
    if (config.baseline < 0) throw std::invalid_argument("baseline must be non-negative");
    std::vector<double> b(graph.node_count(), config.baseline);
    for (const auto& [id, value] : config.baseline_overrides) {
        if (value < 0) throw std::invalid_argument("baseline must be non-negative");
        if (auto idx = graph.find(id)) b[*idx] = value;
    }
    return b;
}

CentralityResult package_result(const DependencyGraph& graph, const CentralityConfig& config,
                                std::vector<double> raw, bool converged, int iterations) {
    CentralityResult result;
    result.variant = config.variant;
    result.converged = converged;
    result.iterations_used = iterations;
    double norm_sq = 0.0;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        result.raw.emplace(graph.node(i).id, raw[i]);
        norm_sq += raw[i] * raw[i];
    }
    if (config.normalize && norm_sq > 0.0) {
        double norm = std::sqrt(norm_sq);
        for (NodeIndex i = 0; i < graph.node_count(); ++i)
            result.normalized.emplace(graph.node(i).id, raw[i] / norm);
        result.normalized_applied = true;
    }
    return result;
}

}  // namespace

CentralityResult katz_exact_dag(const DependencyGraph& graph, const CentralityConfig& config) {
    const std::size_t n = graph.node_count();
    std::vector<double> b = baselines(graph, config);

    // Kahn topological order; anything left over sits on a cycle.
    std::vector<std::size_t> pending(n);
    std::deque<NodeIndex> ready;
    for (NodeIndex i = 0; i < n; ++i) {
        pending[i] = graph.in_edges(i).size();
        if (pending[i] == 0) ready.push_back(i);
    }
    std::vector<NodeIndex> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeIndex v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (const auto& edge : graph.out_edges(v))
            if (--pending[edge.neighbor] == 0) ready.push_back(edge.neighbor);
    }
    if (order.size() != n)
        throw CycleError("graph contains a dependency cycle; exact accumulation requires a DAG "
                         "(use katz_iterative with beta below the divergence threshold)");

    std::vector<double> x(n, 0.0);
    for (NodeIndex v : order) {
        double sum = 0.0;
        for (const auto& edge : graph.in_edges(v))
            sum += edge_weight(edge, config.variant) * (x[edge.neighbor] + b[edge.neighbor]);
        x[v] = config.beta * sum;
    }
    return package_result(graph, config, std::move(x), true, 1);
}

CentralityResult katz_iterative(const DependencyGraph& graph, const CentralityConfig& config) {
    const std::size_t n = graph.node_count();
    std::vector<double> b = baselines(graph, config);

    std::vector<double> x(n, 0.0), next(n, 0.0);
    double previous_norm = 0.0;
    double previous_delta = 0.0;
    int growth_streak = 0;

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        double delta = 0.0;
        double norm = 0.0;
        for (NodeIndex v = 0; v < n; ++v) {
            double sum = 0.0;
            for (const auto& edge : graph.in_edges(v))
                sum += edge_weight(edge, config.variant) * (x[edge.neighbor] + b[edge.neighbor]);
            next[v] = config.beta * sum;
            delta = std::max(delta, std::abs(next[v] - x[v]));
            norm = std::max(norm, std::abs(next[v]));
        }
        std::swap(x, next);
        if (delta < config.tolerance)
            return package_result(graph, config, std::move(x), true, iteration);

        growth_streak = norm > previous_norm ? growth_streak + 1 : 0;
        double rho_bound = previous_delta > 0 ? delta / previous_delta / config.beta : 0.0;
        if (growth_streak >= 50 && norm > 1e12) {
            throw DivergenceError(
                "katz iteration diverged: beta=" + format_double(config.beta) +
                    " with estimated spectral radius >= " + format_double(rho_bound) +
                    " (need beta < 1/rho on cyclic graphs)",
                config.beta, rho_bound);
        }
        previous_norm = norm;
        previous_delta = delta;
        if (iteration == config.max_iterations) {
            throw DivergenceError(
                "katz iteration did not converge within " +
                    std::to_string(config.max_iterations) + " iterations: beta=" +
                    format_double(config.beta) + ", estimated spectral radius >= " +
                    format_double(rho_bound) + " (need beta < 1/rho on cyclic graphs)",
                config.beta, rho_bound);
        }
    }
    throw DivergenceError("katz iteration did not converge", config.beta, 0.0);
}

CentralityResult katz_centrality(const DependencyGraph& graph, const CentralityConfig& config) {
    try {
        return katz_exact_dag(graph, config);
    } catch (const CycleError&) {
        return katz_iterative(graph, config);
    }
}

std::map<GraphVariant, CentralityResult> run_variants(const DependencyGraph& graph,
                                                      const CentralityConfig& base_config) {
    std::map<GraphVariant, CentralityResult> results;

    CentralityConfig unweighted = base_config;
    unweighted.variant = GraphVariant::unweighted;
    results.emplace(GraphVariant::unweighted, katz_centrality(graph, unweighted));

    CentralityConfig weighted = base_config;
    weighted.variant = GraphVariant::weighted;
    results.emplace(GraphVariant::weighted, katz_centrality(graph, weighted));

    // Weighted scores per-ecosystem LCC, pooled, then normalized jointly.
    CentralityResult lcc_result;
    lcc_result.variant = GraphVariant::weighted_lcc;
    lcc_result.converged = true;
    lcc_result.iterations_used = 0;
    for (Ecosystem eco : kAllEcosystems) {
        ComponentReport lcc = largest_connected_component(graph, eco);
        if (lcc.lcc_nodes.empty()) continue;
        DependencyGraph subgraph = induced_subgraph(
            graph, [&](const GraphNode& node) { return lcc.lcc_nodes.count(node.id) > 0; });
        CentralityConfig sub_config = base_config;
        sub_config.variant = GraphVariant::weighted_lcc;
        sub_config.normalize = false;
        CentralityResult sub = katz_centrality(subgraph, sub_config);
        lcc_result.converged = lcc_result.converged && sub.converged;
        lcc_result.iterations_used = std::max(lcc_result.iterations_used, sub.iterations_used);
        for (const auto& [id, value] : sub.raw) lcc_result.raw[id] = value;
    }
    if (base_config.normalize) {
        double norm_sq = 0.0;
        for (const auto& [id, value] : lcc_result.raw) norm_sq += value * value;
        if (norm_sq > 0.0) {
            double norm = std::sqrt(norm_sq);
            for (const auto& [id, value] : lcc_result.raw)
                lcc_result.normalized[id] = value / norm;
            lcc_result.normalized_applied = true;
        }
    }
    results.emplace(GraphVariant::weighted_lcc, std::move(lcc_result));
    return results;
}

}  // namespace depnet

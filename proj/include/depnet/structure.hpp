#pragma once

#include <optional>
#include <set>
#include <vector>

#include "depnet/graph.hpp"

namespace depnet {

struct SccReport {
    // Partition of the node set; members sorted, components ordered by their
    // smallest member.
    std::vector<std::vector<NodeId>> components;
    std::set<NodeId> loop_packages;  // packages in components of size >= 2
    double loop_fraction = 0.0;      // |loop_packages| / |package nodes|
};

struct MentionAcyclicityReport {
    bool acyclic = true;
    // A closed walk [a, b, ..., a] through package edges when !acyclic.
    std::optional<std::vector<NodeId>> witness_cycle;
};

struct ComponentReport {
    Ecosystem ecosystem = Ecosystem::pypi;
    std::vector<std::size_t> component_sizes;  // descending
    std::set<NodeId> lcc_nodes;
};

// Exact SCC partition (iterative Tarjan); papers are trivially singletons.
SccReport strongly_connected_components(const DependencyGraph& graph);

// Checks the weakly-connected components that contain at least one paper
// node: their package edges must form a DAG. Returns one witness cycle
// otherwise.
MentionAcyclicityReport assert_mention_components_acyclic(const DependencyGraph& graph);

// Weak connectivity over the subgraph of this ecosystem's packages plus the
// papers mentioning them. Ties for the largest component go to the component
// containing the lexicographically smallest node key.
ComponentReport largest_connected_component(const DependencyGraph& graph, Ecosystem eco);

}  // namespace depnet

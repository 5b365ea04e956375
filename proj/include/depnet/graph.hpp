#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "depnet/ingest.hpp"
#include "depnet/types.hpp"

namespace depnet {

using NodeIndex = std::uint32_t;

struct GraphNode {
    NodeId id;
    std::string name;                 // display name (DOI for papers)
    std::uint64_t mention_count = 0;  // in-degree from paper nodes
    bool metadata_missing = false;    // package present only as a dangling name
    bool citations_unknown = false;   // paper DOI absent from the citation map

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    NodeIndex neighbor = 0;  // target for out-edges, source for in-edges
    double weight = 0.0;

    bool operator==(const GraphEdge&) const = default;
};

// Two-mode directed weighted network of papers and packages. Immutable once
// built; nodes are stored sorted by (class, key) and adjacency lists by
// neighbor index, so iteration order (and any sum over it) is deterministic.
class DependencyGraph {
  public:
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const GraphNode& node(NodeIndex i) const { return nodes_[i]; }
    std::optional<NodeIndex> find(const NodeId& id) const;
    std::span<const GraphNode> nodes() const { return nodes_; }
    std::span<const GraphEdge> out_edges(NodeIndex i) const { return out_[i]; }
    std::span<const GraphEdge> in_edges(NodeIndex i) const { return in_[i]; }

    std::size_t package_count() const;
    std::size_t class_count(NodeClass cls) const;

    bool operator==(const DependencyGraph& other) const {
        return nodes_ == other.nodes_ && out_ == other.out_;
    }

  private:
    friend class GraphBuilder;
    std::vector<GraphNode> nodes_;
    std::vector<std::vector<GraphEdge>> out_;
    std::vector<std::vector<GraphEdge>> in_;
    std::unordered_map<NodeId, NodeIndex, NodeIdHash> index_;
    std::size_t edge_count_ = 0;
};

// Assembles a DependencyGraph while enforcing the edge laws of the two-mode
// network: no edges into papers, package edges stay within one ecosystem,
// no parallel (from, to) pairs. Self-edges are dropped with a warning.
class GraphBuilder {
  public:
    NodeIndex ensure_node(const NodeId& id, std::string_view name = {});
    void set_metadata_missing(const NodeId& id, bool flag);
    void set_citations_unknown(const NodeId& id, bool flag);
    bool has_node(const NodeId& id) const { return index_.count(id) > 0; }

    // Returns false when the edge was dropped (self-edge) or already present
    // with the same weight. A parallel edge with a different weight and any
    // edge violating the class laws throw FormatError.
    bool add_edge(const NodeId& from, const NodeId& to, double weight);

    const std::vector<std::string>& warnings() const { return warnings_; }

    // Sorts nodes canonically, rewires indices, recomputes mention counts.
    // The builder is left empty.
    DependencyGraph finalize();

  private:
    struct PendingNode {
        GraphNode node;
        std::map<NodeIndex, double> out;  // keyed by target for dedup
    };
    std::vector<PendingNode> nodes_;
    std::unordered_map<NodeId, NodeIndex, NodeIdHash> index_;
    std::vector<std::string> warnings_;
};

// Reachability closure of `roots` under the direct-dependency relation:
// every package reachable through at least one dependency hop. Roots appear
// only when some dependency chain leads back to them. Dangling dependency
// names resolve to stub ids (their folded name).
std::set<NodeId> resolve_transitive_dependencies(const PackageIndex& index,
                                                 const std::set<NodeId>& roots);

struct BuildConfig {
    std::set<Ecosystem> ecosystems = {Ecosystem::bioconductor, Ecosystem::cran, Ecosystem::pypi};
};

struct BuildReport {
    std::map<NodeClass, std::size_t> node_counts;
    std::size_t mention_edges = 0;
    std::size_t dependency_edges = 0;
    std::vector<std::pair<Ecosystem, std::string>> dangling;  // folded names, sorted
    std::vector<std::string> papers_without_citations;        // DOIs, sorted
    std::vector<std::string> warnings;                        // self-dependency drops etc.
};

struct BuildResult {
    DependencyGraph graph;
    BuildReport report;
};

// Construct the two-mode network: papers with >= 1 mention, the packages
// they mention, and the transitive dependency closure of those packages.
// Mention edges carry the paper's citation count (0 + flag when unknown);
// dependency edges carry weight 1.
BuildResult build_graph(const std::vector<MentionRecord>& mentions, const CitationMap& citations,
                        const PackageIndex& index, const BuildConfig& config = {});

// Nodes satisfying `keep` plus all edges among them.
DependencyGraph induced_subgraph(const DependencyGraph& graph,
                                 const std::function<bool(const GraphNode&)>& keep);

// `from_class,from_key,to_class,to_key,weight` rows, sorted.
void write_edge_csv(std::ostream& out, const DependencyGraph& graph);

}  // namespace depnet

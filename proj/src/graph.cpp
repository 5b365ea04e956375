#include "depnet/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "depnet/csv.hpp"

namespace depnet {

std::optional<NodeIndex> DependencyGraph::find(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t DependencyGraph::package_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
        if (is_package_class(node.id.cls)) ++n;
    return n;
}

std::size_t DependencyGraph::class_count(NodeClass cls) const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
        if (node.id.cls == cls) ++n;
    return n;
}

NodeIndex GraphBuilder::ensure_node(const NodeId& id, std::string_view name) {
    auto it = index_.find(id);
    if (it != index_.end()) {
        if (nodes_[it->second].node.name.empty() && !name.empty())
            nodes_[it->second].node.name = std::string(name);
        return it->second;
    }
    NodeIndex idx = static_cast<NodeIndex>(nodes_.size());
    PendingNode pending;
    pending.node.id = id;
    pending.node.name = name.empty() ? id.key : std::string(name);
    nodes_.push_back(std::move(pending));
    index_.emplace(id, idx);
    return idx;
}

void GraphBuilder::set_metadata_missing(const NodeId& id, bool flag) {
    nodes_[ensure_node(id)].node.metadata_missing = flag;
}

void GraphBuilder::set_citations_unknown(const NodeId& id, bool flag) {
    nodes_[ensure_node(id)].node.citations_unknown = flag;
}

bool GraphBuilder::add_edge(const NodeId& from, const NodeId& to, double weight) {
    if (to.cls == NodeClass::paper)
        throw FormatError("edge into paper node " + to.key + " is not allowed");
    if (from.cls != NodeClass::paper && from.cls != to.cls)
        throw FormatError("dependency edge crosses ecosystems: " + from.key + " -> " + to.key);
    if (weight < 0)
        throw FormatError("negative edge weight on " + from.key + " -> " + to.key);
    if (from == to) {
        warnings_.push_back("self-dependency dropped: " + std::string(to_string(from.cls)) + "/" +
                            from.key);
        return false;
    }
    NodeIndex f = ensure_node(from);
    NodeIndex t = ensure_node(to);
    auto [it, inserted] = nodes_[f].out.emplace(t, weight);
    if (!inserted) {
        if (it->second != weight)
            throw FormatError("parallel edge with conflicting weight: " + from.key + " -> " +
                              to.key);
        return false;
    }
    return true;
}

DependencyGraph GraphBuilder::finalize() {
    std::vector<NodeIndex> order(nodes_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
        return nodes_[a].node.id < nodes_[b].node.id;
    });
    std::vector<NodeIndex> remap(nodes_.size());
    for (NodeIndex pos = 0; pos < order.size(); ++pos) remap[order[pos]] = pos;

    DependencyGraph graph;
    graph.nodes_.resize(nodes_.size());
    graph.out_.resize(nodes_.size());
    graph.in_.resize(nodes_.size());
    for (NodeIndex old = 0; old < nodes_.size(); ++old) {
        NodeIndex now = remap[old];
        graph.nodes_[now] = std::move(nodes_[old].node);
        graph.index_.emplace(graph.nodes_[now].id, now);
        for (const auto& [target, weight] : nodes_[old].out)
            graph.out_[now].push_back({remap[target], weight});
    }
    for (NodeIndex i = 0; i < graph.out_.size(); ++i) {
        auto& edges = graph.out_[i];
        std::sort(edges.begin(), edges.end(),
                  [](const GraphEdge& a, const GraphEdge& b) { return a.neighbor < b.neighbor; });
        graph.edge_count_ += edges.size();
        for (const auto& edge : edges) graph.in_[edge.neighbor].push_back({i, edge.weight});
    }
    for (auto& edges : graph.in_)
        std::sort(edges.begin(), edges.end(),
                  [](const GraphEdge& a, const GraphEdge& b) { return a.neighbor < b.neighbor; });

    for (NodeIndex i = 0; i < graph.nodes_.size(); ++i) {
        std::uint64_t mentions = 0;
        for (const auto& edge : graph.in_[i])
            if (graph.nodes_[edge.neighbor].id.cls == NodeClass::paper) ++mentions;
        graph.nodes_[i].mention_count = mentions;
    }

    nodes_.clear();
    index_.clear();
    return graph;
}

namespace {

// Dependency names without a snapshot record resolve to a stub id: the
// folded name itself.
NodeId dependency_target(const PackageIndex& index, Ecosystem eco, const std::string& dep_name,
                         const PackageRecord** record_out) {
    const PackageRecord* record = index.find_by_name(eco, dep_name);
    *record_out = record;
    if (record) return package_node(eco, record->package_id);
    return package_node(eco, fold_package_name(eco, dep_name));
}

}  // namespace

std::set<NodeId> resolve_transitive_dependencies(const PackageIndex& index,
                                                 const std::set<NodeId>& roots) {
    std::set<NodeId> closure;
    std::deque<NodeId> queue;
    std::set<NodeId> expanded;

    auto expand = [&](const NodeId& id) {
        if (!expanded.insert(id).second) return;
        auto eco = ecosystem_of(id.cls);
        if (!eco) return;
        const PackageRecord* record = index.find_by_id(*eco, id.key);
        if (!record) return;  // stub: no known dependencies
        for (const auto& dep_name : record->dependencies) {
            const PackageRecord* dep_record = nullptr;
            NodeId target = dependency_target(index, *eco, dep_name, &dep_record);
            if (target == id) continue;  // self-dependency
            if (closure.insert(target).second) queue.push_back(target);
        }
    };

    for (const auto& root : roots) expand(root);
    while (!queue.empty()) {
        NodeId next = queue.front();
        queue.pop_front();
        expand(next);
    }
    return closure;
}

BuildResult build_graph(const std::vector<MentionRecord>& mentions, const CitationMap& citations,
                        const PackageIndex& index, const BuildConfig& config) {
    std::vector<const MentionRecord*> selected;
    for (const auto& mention : mentions)
        if (config.ecosystems.count(mention.ecosystem)) selected.push_back(&mention);
    if (selected.empty()) throw EmptyInputError("no seed mentions for the selected ecosystems");

    GraphBuilder builder;
    BuildReport report;
    std::set<std::pair<Ecosystem, std::string>> dangling;
    std::set<std::string> papers_without_citations;
    std::set<NodeId> mentioned;

    // Paper -> package mention edges, weighted by citation count.
    for (const MentionRecord* mention : selected) {
        NodeId paper = paper_node(mention->paper_doi);
        builder.ensure_node(paper, mention->paper_doi);

        const PackageRecord* record = index.find_by_id(mention->ecosystem, mention->package_id);
        NodeId pkg = package_node(mention->ecosystem,
                                  record ? record->package_id : mention->package_id);
        builder.ensure_node(pkg, record ? record->name : mention->package_name);
        if (!record) {
            builder.set_metadata_missing(pkg, true);
            dangling.emplace(mention->ecosystem,
                             fold_package_name(mention->ecosystem, mention->package_name));
        }
        mentioned.insert(pkg);

        auto count = citations.find(mention->paper_doi);
        if (!count) {
            builder.set_citations_unknown(paper, true);
            papers_without_citations.insert(mention->paper_doi);
        }
        if (builder.add_edge(paper, pkg, count ? static_cast<double>(*count) : 0.0))
            ++report.mention_edges;
    }

    // Transitive dependency closure, one dependency edge per (from, to).
    std::deque<NodeId> queue(mentioned.begin(), mentioned.end());
    std::set<NodeId> visited(mentioned.begin(), mentioned.end());
    while (!queue.empty()) {
        NodeId current = queue.front();
        queue.pop_front();
        Ecosystem eco = *ecosystem_of(current.cls);
        const PackageRecord* record = index.find_by_id(eco, current.key);
        if (!record) continue;
        for (const auto& dep_name : record->dependencies) {
            const PackageRecord* dep_record = nullptr;
            NodeId target = dependency_target(index, eco, dep_name, &dep_record);
            if (target == current) {
                report.warnings.push_back("self-dependency dropped: " +
                                          std::string(to_string(eco)) + "/" + record->name);
                continue;
            }
            builder.ensure_node(target, dep_record ? dep_record->name : dep_name);
            if (!dep_record) {
                builder.set_metadata_missing(target, true);
                dangling.emplace(eco, fold_package_name(eco, dep_name));
            }
            if (builder.add_edge(current, target, 1.0)) ++report.dependency_edges;
            if (visited.insert(target).second) queue.push_back(target);
        }
    }

    BuildResult result{builder.finalize(), std::move(report)};
    for (const auto& node : result.graph.nodes()) ++result.report.node_counts[node.id.cls];
    result.report.dangling.assign(dangling.begin(), dangling.end());
    result.report.papers_without_citations.assign(papers_without_citations.begin(),
                                                  papers_without_citations.end());
    return result;
}

DependencyGraph induced_subgraph(const DependencyGraph& graph,
                                 const std::function<bool(const GraphNode&)>& keep) {
    GraphBuilder builder;
    std::vector<bool> kept(graph.node_count(), false);
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        const GraphNode& node = graph.node(i);
        if (!keep(node)) continue;
        kept[i] = true;
        builder.ensure_node(node.id, node.name);
        builder.set_metadata_missing(node.id, node.metadata_missing);
        builder.set_citations_unknown(node.id, node.citations_unknown);
    }
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        if (!kept[i]) continue;
        for (const auto& edge : graph.out_edges(i))
            if (kept[edge.neighbor])
                builder.add_edge(graph.node(i).id, graph.node(edge.neighbor).id, edge.weight);
    }
    return builder.finalize();
}

void write_edge_csv(std::ostream& out, const DependencyGraph& graph) {
    csv::write_row(out, std::vector<std::string>{"from_class", "from_key", "to_class", "to_key",
                                                 "weight"});
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        for (const auto& edge : graph.out_edges(i)) {
            const GraphNode& from = graph.node(i);
            const GraphNode& to = graph.node(edge.neighbor);
            csv::write_row(out, std::vector<std::string>{
                                    std::string(to_string(from.id.cls)), from.id.key,
                                    std::string(to_string(to.id.cls)), to.id.key,
                                    format_double(edge.weight)});
        }
    }
}

}  // namespace depnet

#include "depnet/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace depnet {

namespace {

// Iterative Tarjan; recursion depth is unbounded on real dependency chains.
std::vector<std::vector<NodeIndex>> tarjan_sccs(const DependencyGraph& graph) {
    const std::size_t n = graph.node_count();
    constexpr NodeIndex kUnvisited = static_cast<NodeIndex>(-1);
    std::vector<NodeIndex> number(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeIndex> stack;
    std::vector<std::vector<NodeIndex>> sccs;
    NodeIndex next_number = 0;

    struct Frame {
        NodeIndex vertex;
        std::size_t edge = 0;
    };
    std::vector<Frame> call_stack;

    for (NodeIndex start = 0; start < n; ++start) {
        if (number[start] != kUnvisited) continue;
        call_stack.push_back({start});
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            NodeIndex v = frame.vertex;
            if (frame.edge == 0) {
                number[v] = low[v] = next_number++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            auto edges = graph.out_edges(v);
            bool descended = false;
            while (frame.edge < edges.size()) {
                NodeIndex w = edges[frame.edge].neighbor;
                ++frame.edge;
                if (number[w] == kUnvisited) {
                    call_stack.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], number[w]);
            }
            if (descended) continue;
            if (low[v] == number[v]) {
                std::vector<NodeIndex> scc;
                for (;;) {
                    NodeIndex w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc.push_back(w);
                    if (w == v) break;
                }
                sccs.push_back(std::move(scc));
            }
            call_stack.pop_back();
            if (!call_stack.empty()) {
                NodeIndex parent = call_stack.back().vertex;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return sccs;
}

// Union-find over node indices.
class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    NodeIndex find(NodeIndex x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(NodeIndex a, NodeIndex b) { parent_[find(a)] = find(b); }

  private:
    std::vector<NodeIndex> parent_;
};

}  // namespace

SccReport strongly_connected_components(const DependencyGraph& graph) {
    SccReport report;
    std::size_t packages = graph.package_count();

    for (auto& scc : tarjan_sccs(graph)) {
        std::vector<NodeId> component;
        component.reserve(scc.size());
        for (NodeIndex i : scc) component.push_back(graph.node(i).id);
        std::sort(component.begin(), component.end());
        if (component.size() >= 2)
            for (const auto& id : component)
                if (is_package_class(id.cls)) report.loop_packages.insert(id);
        report.components.push_back(std::move(component));
    }
    std::sort(report.components.begin(), report.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    report.loop_fraction =
        packages == 0 ? 0.0
                      : static_cast<double>(report.loop_packages.size()) /
                            static_cast<double>(packages);
    return report;
}

MentionAcyclicityReport assert_mention_components_acyclic(const DependencyGraph& graph) {
    const std::size_t n = graph.node_count();
    DisjointSets components(n);
    for (NodeIndex i = 0; i < n; ++i)
        for (const auto& edge : graph.out_edges(i)) components.unite(i, edge.neighbor);

    std::set<NodeIndex> mention_roots;
    for (NodeIndex i = 0; i < n; ++i)
        if (graph.node(i).id.cls == NodeClass::paper) mention_roots.insert(components.find(i));

    // Any size >= 2 SCC inside a paper-bearing weak component is a cycle;
    // papers themselves cannot participate (they have no in-edges).
    for (auto& scc : tarjan_sccs(graph)) {
        if (scc.size() < 2) continue;
        if (!mention_roots.count(components.find(scc[0]))) continue;

        // Extract one directed cycle inside this SCC, deterministically:
        // start at the smallest member, always follow the smallest in-SCC
        // neighbor until a node repeats.
        std::set<NodeIndex> members(scc.begin(), scc.end());
        NodeIndex start = *std::min_element(scc.begin(), scc.end(), [&](NodeIndex a, NodeIndex b) {
            return graph.node(a).id < graph.node(b).id;
        });
        std::vector<NodeIndex> walk{start};
        std::map<NodeIndex, std::size_t> first_seen{{start, 0}};
        for (;;) {
            NodeIndex current = walk.back();
            NodeIndex next = static_cast<NodeIndex>(-1);
            for (const auto& edge : graph.out_edges(current)) {
                if (members.count(edge.neighbor)) {
                    next = edge.neighbor;
                    break;
                }
            }
            auto seen = first_seen.find(next);
            if (seen != first_seen.end()) {
                std::vector<NodeId> cycle;
                for (std::size_t i = seen->second; i < walk.size(); ++i)
                    cycle.push_back(graph.node(walk[i]).id);
                cycle.push_back(graph.node(next).id);
                return {false, std::move(cycle)};
            }
            first_seen.emplace(next, walk.size());
            walk.push_back(next);
        }
    }
    return {true, std::nullopt};
}

ComponentReport largest_connected_component(const DependencyGraph& graph, Ecosystem eco) {
    const NodeClass pkg_class = node_class_of(eco);
    const std::size_t n = graph.node_count();

    std::vector<bool> in_slice(n, false);
    for (NodeIndex i = 0; i < n; ++i) {
        if (graph.node(i).id.cls == pkg_class) in_slice[i] = true;
    }
    for (NodeIndex i = 0; i < n; ++i) {
        if (graph.node(i).id.cls != NodeClass::paper) continue;
        for (const auto& edge : graph.out_edges(i)) {
            if (graph.node(edge.neighbor).id.cls == pkg_class) {
                in_slice[i] = true;
                break;
            }
        }
    }

    ComponentReport report;
    report.ecosystem = eco;

    DisjointSets components(n);
    for (NodeIndex i = 0; i < n; ++i) {
        if (!in_slice[i]) continue;
        for (const auto& edge : graph.out_edges(i))
            if (in_slice[edge.neighbor]) components.unite(i, edge.neighbor);
    }

    std::map<NodeIndex, std::vector<NodeIndex>> by_root;
    for (NodeIndex i = 0; i < n; ++i)
        if (in_slice[i]) by_root[components.find(i)].push_back(i);
    if (by_root.empty()) return report;

    // Largest component; ties resolved toward the smallest member key.
    const std::vector<NodeIndex>* best = nullptr;
    std::string best_min_key;
    for (const auto& [root, members] : by_root) {
        report.component_sizes.push_back(members.size());
        std::string member_min_key = graph.node(members.front()).id.key;
        for (NodeIndex m : members)
            member_min_key = std::min(member_min_key, graph.node(m).id.key);
        if (!best || members.size() > best->size() ||
            (members.size() == best->size() && member_min_key < best_min_key)) {
            best = &members;
            best_min_key = std::move(member_min_key);
        }
    }
    std::sort(report.component_sizes.begin(), report.component_sizes.end(), std::greater<>());
    for (NodeIndex m : *best) report.lcc_nodes.insert(graph.node(m).id);
    return report;
}

}  // namespace depnet

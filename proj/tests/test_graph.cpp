#include <doctest.h>

#include <sstream>

#include "depnet/graph.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

using namespace depnet;
using namespace depnet::test;

namespace {

PackageIndex chain_index() {
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"B"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {"C"}});
    index.insert({Ecosystem::cran, "c", "C", "1", {}});
    return index;
}

}  // namespace

TEST_CASE("resolve_transitive_dependencies: chain") {
    auto closure = resolve_transitive_dependencies(chain_index(), {cran("a")});
    CHECK(closure == std::set<NodeId>{cran("b"), cran("c")});
}

TEST_CASE("resolve_transitive_dependencies: diamond dedups the shared dependency") {
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"B", "C"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {"D"}});
    index.insert({Ecosystem::cran, "c", "C", "1", {"D"}});
    index.insert({Ecosystem::cran, "d", "D", "1", {}});
    auto closure = resolve_transitive_dependencies(index, {cran("a")});
    CHECK(closure == std::set<NodeId>{cran("b"), cran("c"), cran("d")});
}

TEST_CASE("resolve_transitive_dependencies: 2-cycle pulls the root back in") {
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"B"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {"A"}});
    auto closure = resolve_transitive_dependencies(index, {cran("a")});
    CHECK(closure == std::set<NodeId>{cran("a"), cran("b")});
}

TEST_CASE("resolve_transitive_dependencies: dangling names become stub ids") {
    PackageIndex index;
    index.insert({Ecosystem::pypi, "x", "x-lib", "1", {"Missing_Dep"}});
    auto closure = resolve_transitive_dependencies(index, {pypi("x")});
    CHECK(closure == std::set<NodeId>{pypi("missing-dep")});
}

TEST_CASE("build_graph: minimal 3-node network") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"}};
    CitationMap citations;
    citations.record("10.1/p", 5);
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"B"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {}});

    BuildResult built = build_graph(mentions, citations, index);
    const DependencyGraph& graph = built.graph;
    CHECK(graph.node_count() == 3);
    CHECK(graph.edge_count() == 2);

    auto p = *graph.find(paper("10.1/p"));
    auto a = *graph.find(cran("a"));
    auto b = *graph.find(cran("b"));
    REQUIRE(graph.out_edges(p).size() == 1);
    CHECK(graph.out_edges(p)[0].neighbor == a);
    CHECK(graph.out_edges(p)[0].weight == 5.0);
    REQUIRE(graph.out_edges(a).size() == 1);
    CHECK(graph.out_edges(a)[0].neighbor == b);
    CHECK(graph.out_edges(a)[0].weight == 1.0);

    CHECK(graph.node(a).mention_count == 1);
    CHECK(graph.node(b).mention_count == 0);
    CHECK(graph.node(a).name == "A");
    CHECK(!graph.node(p).citations_unknown);
}

TEST_CASE("build_graph: missing DOI gives weight 0 and flags the paper") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"}};
    CitationMap citations;  // empty
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {}});

    BuildResult built = build_graph(mentions, citations, index);
    auto p = *built.graph.find(paper("10.1/p"));
    CHECK(built.graph.node(p).citations_unknown);
    CHECK(built.graph.out_edges(p)[0].weight == 0.0);
    CHECK(built.report.papers_without_citations == std::vector<std::string>{"10.1/p"});
}

TEST_CASE("build_graph: empty mention set is an error") {
    CitationMap citations;
    PackageIndex index;
    CHECK_THROWS_AS(build_graph({}, citations, index), EmptyInputError);

    std::vector<MentionRecord> pypi_only = {{"10.1/p", Ecosystem::pypi, "x", "x"}};
    BuildConfig cran_only;
    cran_only.ecosystems = {Ecosystem::cran};
    CHECK_THROWS_AS(build_graph(pypi_only, citations, index, cran_only), EmptyInputError);
}

TEST_CASE("build_graph: mentioned package missing from registry becomes a flagged stub") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::pypi, "czi99", "Mystery"}};
    CitationMap citations;
    citations.record("10.1/p", 2);
    PackageIndex index;

    BuildResult built = build_graph(mentions, citations, index);
    auto node = *built.graph.find(pypi("czi99"));
    CHECK(built.graph.node(node).metadata_missing);
    CHECK(built.graph.node(node).name == "Mystery");
    CHECK(built.report.dangling.size() == 1);
}

TEST_CASE("build_graph: dangling dependency stub keeps the graph closed") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"}};
    CitationMap citations;
    citations.record("10.1/p", 1);
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"Ghost"}});

    BuildResult built = build_graph(mentions, citations, index);
    auto ghost = built.graph.find(cran("Ghost"));
    REQUIRE(ghost.has_value());
    CHECK(built.graph.node(*ghost).metadata_missing);
    CHECK(built.report.dangling ==
          std::vector<std::pair<Ecosystem, std::string>>{{Ecosystem::cran, "Ghost"}});
}

TEST_CASE("build_graph: self-dependency is dropped with a warning") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"}};
    CitationMap citations;
    citations.record("10.1/p", 1);
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"A", "B"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {}});

    BuildResult built = build_graph(mentions, citations, index);
    auto a = *built.graph.find(cran("a"));
    CHECK(built.graph.out_edges(a).size() == 1);
    REQUIRE(built.report.warnings.size() == 1);
    CHECK(built.report.warnings[0].find("self-dependency") != std::string::npos);
}

TEST_CASE("build_graph: ecosystems excluded by config do not appear") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"},
                                           {"10.1/p", Ecosystem::pypi, "x", "x"}};
    CitationMap citations;
    citations.record("10.1/p", 1);
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {}});
    index.insert({Ecosystem::pypi, "x", "x", "1", {}});

    BuildConfig config;
    config.ecosystems = {Ecosystem::cran};
    BuildResult built = build_graph(mentions, citations, index, config);
    CHECK(built.graph.find(cran("a")).has_value());
    CHECK(!built.graph.find(pypi("x")).has_value());
}

TEST_CASE("graph builder enforces the bipartite direction laws") {
    GraphBuilder builder;
    builder.ensure_node(paper("10.1/p"));
    builder.ensure_node(cran("a"));
    builder.ensure_node(pypi("x"));
    CHECK_THROWS_AS(builder.add_edge(cran("a"), paper("10.1/p"), 1.0), FormatError);
    CHECK_THROWS_AS(builder.add_edge(paper("10.1/p"), paper("10.1/p"), 1.0), FormatError);
    CHECK_THROWS_AS(builder.add_edge(cran("a"), pypi("x"), 1.0), FormatError);
    CHECK_THROWS_AS(builder.add_edge(paper("10.1/p"), cran("a"), -2.0), FormatError);
}

TEST_CASE("bipartite law and mention-count law hold on random graphs") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        DependencyGraph graph = random_two_mode_graph(rng);
        for (NodeIndex i = 0; i < graph.node_count(); ++i) {
            const GraphNode& node = graph.node(i);
            if (node.id.cls == NodeClass::paper) CHECK(graph.in_edges(i).empty());
            std::uint64_t paper_in = 0;
            for (const auto& edge : graph.in_edges(i))
                if (graph.node(edge.neighbor).id.cls == NodeClass::paper) ++paper_in;
            CHECK(node.mention_count == paper_in);
            for (const auto& edge : graph.out_edges(i))
                CHECK(graph.node(edge.neighbor).id.cls != NodeClass::paper);
        }
    }
}

TEST_CASE("package subgraph equals mentioned set plus its transitive closure") {
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"B"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {"C"}});
    index.insert({Ecosystem::cran, "c", "C", "1", {}});
    index.insert({Ecosystem::cran, "z", "Z", "1", {"A"}});  // never mentioned, never pulled
    index.insert({Ecosystem::pypi, "x", "x", "1", {"y"}});
    index.insert({Ecosystem::pypi, "y", "y", "1", {}});

    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"},
                                           {"10.1/q", Ecosystem::pypi, "x", "x"}};
    CitationMap citations;
    citations.record("10.1/p", 3);

    BuildResult built = build_graph(mentions, citations, index);

    std::set<NodeId> mentioned = {cran("a"), pypi("x")};
    std::set<NodeId> expected = mentioned;
    auto closure = resolve_transitive_dependencies(index, mentioned);
    expected.insert(closure.begin(), closure.end());

    std::set<NodeId> actual;
    for (const auto& node : built.graph.nodes())
        if (is_package_class(node.id.cls)) actual.insert(node.id);
    CHECK(actual == expected);
    CHECK(!built.graph.find(cran("z")).has_value());
}

TEST_CASE("induced_subgraph keeps matching nodes and their edges") {
    std::vector<MentionRecord> mentions = {{"10.1/p", Ecosystem::cran, "a", "A"}};
    CitationMap citations;
    citations.record("10.1/p", 5);
    PackageIndex index;
    index.insert({Ecosystem::cran, "a", "A", "1", {"B"}});
    index.insert({Ecosystem::cran, "b", "B", "1", {}});
    DependencyGraph graph = build_graph(mentions, citations, index).graph;

    DependencyGraph packages_only = induced_subgraph(
        graph, [](const GraphNode& node) { return node.id.cls != NodeClass::paper; });
    CHECK(packages_only.node_count() == 2);
    CHECK(packages_only.edge_count() == 1);

    DependencyGraph everything =
        induced_subgraph(graph, [](const GraphNode&) { return true; });
    CHECK(everything == graph);

    DependencyGraph empty = induced_subgraph(graph, [](const GraphNode&) { return false; });
    CHECK(empty.node_count() == 0);
}

TEST_CASE("induced_subgraph on one ecosystem keeps only intra-class edges") {
    GraphBuilder builder;
    builder.ensure_node(paper("10.1/p"));
    builder.add_edge(paper("10.1/p"), cran("a"), 2.0);
    builder.add_edge(paper("10.1/p"), pypi("x"), 2.0);
    builder.add_edge(cran("a"), cran("b"), 1.0);
    builder.add_edge(pypi("x"), pypi("y"), 1.0);
    DependencyGraph graph = builder.finalize();

    DependencyGraph cran_only = induced_subgraph(
        graph, [](const GraphNode& node) { return node.id.cls == NodeClass::cran; });
    CHECK(cran_only.node_count() == 2);
    CHECK(cran_only.edge_count() == 1);
    CHECK(cran_only.find(cran("a")).has_value());
    CHECK(!cran_only.find(pypi("x")).has_value());
}

TEST_CASE("edge csv export is sorted and carries weights") {
    GraphBuilder builder;
    builder.add_edge(paper("10.1/p"), cran("a"), 5.0);
    builder.add_edge(cran("a"), cran("b"), 1.0);
    DependencyGraph graph = builder.finalize();

    std::ostringstream out;
    write_edge_csv(out, graph);
    CHECK(out.str() ==
          "from_class,from_key,to_class,to_key,weight\n"
          "cran,a,cran,b,1\n"
          "paper,10.1/p,cran,a,5\n");
}

#include <doctest.h>

#include <sstream>

#include "depnet/gexf.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

using namespace depnet;
using namespace depnet::test;

namespace {

DependencyGraph minimal_network() {
    GraphBuilder builder;
    builder.ensure_node(paper("10.1/p"), "10.1/p");
    builder.ensure_node(cran("a"), "A");
    builder.ensure_node(cran("b"), "B");
    builder.add_edge(paper("10.1/p"), cran("a"), 5.0);
    builder.add_edge(cran("a"), cran("b"), 1.0);
    return builder.finalize();
}

DependencyGraph round_trip(const DependencyGraph& graph,
                           std::vector<std::string>* warnings = nullptr) {
    std::ostringstream out;
    write_gexf(out, graph);
    std::istringstream in(out.str());
    return read_gexf(in, warnings);
}

}  // namespace

TEST_CASE("gexf round-trip of the minimal network is the identity") {
    DependencyGraph graph = minimal_network();
    CHECK(round_trip(graph) == graph);
}

TEST_CASE("gexf round-trip is the identity on random graphs") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        DependencyGraph graph = random_two_mode_graph(rng);
        CHECK(round_trip(graph) == graph);
    }
}

TEST_CASE("gexf round-trip preserves flags and names") {
    GraphBuilder builder;
    builder.ensure_node(paper("10.1/p"), "10.1/p");
    builder.set_citations_unknown(paper("10.1/p"), true);
    builder.ensure_node(cran("stub"), "Stub & <Friends>\nsecond line");
    builder.set_metadata_missing(cran("stub"), true);
    builder.add_edge(paper("10.1/p"), cran("stub"), 0.0);
    DependencyGraph graph = builder.finalize();

    DependencyGraph back = round_trip(graph);
    CHECK(back == graph);
    auto stub = *back.find(cran("stub"));
    CHECK(back.node(stub).metadata_missing);
    CHECK(back.node(stub).name == "Stub & <Friends>\nsecond line");
}

TEST_CASE("gexf writing is byte-deterministic") {
    DependencyGraph graph = minimal_network();
    std::ostringstream first, second;
    write_gexf(first, graph);
    write_gexf(second, graph);
    CHECK(first.str() == second.str());
}

TEST_CASE("gexf read: missing edge weight defaults to 1 with a warning") {
    std::string doc = R"(<?xml version="1.0" encoding="UTF-8"?>
<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node">
      <attribute id="0" title="type" type="string"/>
    </attributes>
    <nodes>
      <node id="a" label="A"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
      <node id="b" label="B"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
    </nodes>
    <edges>
      <edge id="0" source="a" target="b"/>
    </edges>
  </graph>
</gexf>
)";
    std::istringstream in(doc);
    std::vector<std::string> warnings;
    DependencyGraph graph = read_gexf(in, &warnings);
    auto a = *graph.find(cran("a"));
    CHECK(graph.out_edges(a)[0].weight == 1.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("no weight") != std::string::npos);
}

TEST_CASE("gexf read: undirected declarations are format errors") {
    std::string undirected_default = R"(<?xml version="1.0"?>
<gexf version="1.2"><graph defaultedgetype="undirected"><nodes/></graph></gexf>)";
    std::istringstream in1(undirected_default);
    CHECK_THROWS_AS(read_gexf(in1), FormatError);

    std::string undirected_edge = R"(<?xml version="1.0"?>
<gexf version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node"><attribute id="0" title="type" type="string"/></attributes>
    <nodes>
      <node id="a"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
      <node id="b"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
    </nodes>
    <edges><edge id="0" source="a" target="b" type="undirected"/></edges>
  </graph>
</gexf>)";
    std::istringstream in2(undirected_edge);
    CHECK_THROWS_AS(read_gexf(in2), FormatError);
}

TEST_CASE("gexf read: edge weight may arrive as an attvalue") {
    std::string doc = R"(<?xml version="1.0"?>
<gexf version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node"><attribute id="0" title="type" type="string"/></attributes>
    <attributes class="edge"><attribute id="5" title="weight" type="double"/></attributes>
    <nodes>
      <node id="a"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
      <node id="b"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
    </nodes>
    <edges>
      <edge id="0" source="a" target="b">
        <attvalues><attvalue for="5" value="2.5"/></attvalues>
      </edge>
    </edges>
  </graph>
</gexf>)";
    std::istringstream in(doc);
    std::vector<std::string> warnings;
    DependencyGraph graph = read_gexf(in, &warnings);
    auto a = *graph.find(cran("a"));
    CHECK(graph.out_edges(a)[0].weight == 2.5);
    CHECK(warnings.empty());
}

TEST_CASE("gexf read: unknown node type names the node") {
    std::string doc = R"(<?xml version="1.0"?>
<gexf version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node"><attribute id="0" title="type" type="string"/></attributes>
    <nodes>
      <node id="weird"><attvalues><attvalue for="0" value="npm"/></attvalues></node>
    </nodes>
  </graph>
</gexf>)";
    std::istringstream in(doc);
    try {
        read_gexf(in);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("weird") != std::string::npos);
    }
}

TEST_CASE("gexf read: unknown attributes are ignored with a warning") {
    std::string doc = R"(<?xml version="1.0"?>
<gexf version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node">
      <attribute id="0" title="type" type="string"/>
      <attribute id="1" title="color" type="string"/>
    </attributes>
    <nodes>
      <node id="a"><attvalues>
        <attvalue for="0" value="pypi"/>
        <attvalue for="1" value="blue"/>
      </attvalues></node>
    </nodes>
  </graph>
</gexf>)";
    std::istringstream in(doc);
    std::vector<std::string> warnings;
    DependencyGraph graph = read_gexf(in, &warnings);
    CHECK(graph.node_count() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("color") != std::string::npos);
}

TEST_CASE("gexf read: mention counts are recomputed from paper edges") {
    DependencyGraph graph = minimal_network();
    DependencyGraph back = round_trip(graph);
    CHECK(back.node(*back.find(cran("a"))).mention_count == 1);
    CHECK(back.node(*back.find(cran("b"))).mention_count == 0);
}

TEST_CASE("gexf write refuses cross-class key collisions") {
    GraphBuilder builder;
    builder.ensure_node(cran("same"));
    builder.ensure_node(pypi("same"));
    DependencyGraph graph = builder.finalize();
    std::ostringstream out;
    CHECK_THROWS_AS(write_gexf(out, graph), FormatError);
}

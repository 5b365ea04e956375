#include <doctest.h>

#include <fstream>
#include <thread>

#include <httplib.h>

#include "depnet/cli.hpp"
#include "support/test_support.hpp"

using namespace depnet;
using depnet::test::TempDir;
using depnet::test::slurp;

namespace {

const char* kMentions =
    "paper_doi,ecosystem,package_id,package_name\n"
    "10.1/p,cran,a,A\n"
    "10.1/q,cran,a,A\n"
    "10.1/q,pypi,x,xlib\n";

const char* kCitations =
    "paper_doi,citation_count\n"
    "10.1/p,5\n"
    "10.1/q,2\n";

const char* kRegistry =
    R"({"ecosystem":"cran","package_id":"a","name":"A","latest_version":"1","dependencies":["B"]})"
    "\n"
    R"({"ecosystem":"cran","package_id":"b","name":"B","latest_version":"1","dependencies":[]})"
    "\n"
    R"({"ecosystem":"pypi","package_id":"x","name":"xlib","latest_version":"1","dependencies":["helper"]})"
    "\n";

struct Pipeline {
    TempDir dir;
    std::string out;

    Pipeline() {
        dir.write("mentions.csv", kMentions);
        dir.write("citations.csv", kCitations);
        dir.write("registry.jsonl", kRegistry);
        out = (dir.path() / "out").string();
    }

    int build() {
        return run_cli({"build", "--mentions", dir.file("mentions.csv").string(),
                        "--citations", dir.file("citations.csv").string(), "--registry",
                        dir.file("registry.jsonl").string(), "--out", out});
    }
    int analyze() { return run_cli({"analyze", "--out", out}); }
    int stats() { return run_cli({"stats", "--out", out}); }
    int quadrants() { return run_cli({"quadrants", "--out", out, "--top-k", "2"}); }
    int cycles() { return run_cli({"cycles", "--out", out}); }

    std::filesystem::path artifact(const std::string& name) const {
        return std::filesystem::path(out) / name;
    }
};

}  // namespace

TEST_CASE("cli pipeline: build writes graph, report and edge list") {
    Pipeline pipeline;
    REQUIRE(pipeline.build() == 0);
    CHECK(std::filesystem::exists(pipeline.artifact("graph.gexf")));
    CHECK(std::filesystem::exists(pipeline.artifact("edges.csv")));
    CHECK(std::filesystem::exists(pipeline.artifact("rejects.csv")));

    std::string report = slurp(pipeline.artifact("build_report.txt"));
    CHECK(report.find("nodes_paper=2") != std::string::npos);
    CHECK(report.find("nodes_cran=2") != std::string::npos);
    CHECK(report.find("nodes_pypi=2") != std::string::npos);
    CHECK(report.find("missing: pypi/helper") != std::string::npos);
}

TEST_CASE("cli pipeline: analyze, stats, quadrants, cycles") {
    Pipeline pipeline;
    REQUIRE(pipeline.build() == 0);
    REQUIRE(pipeline.analyze() == 0);
    CHECK(std::filesystem::exists(pipeline.artifact("centrality_unweighted.csv")));
    CHECK(std::filesystem::exists(pipeline.artifact("centrality_weighted.csv")));
    CHECK(std::filesystem::exists(pipeline.artifact("centrality_weighted_lcc.csv")));
    CHECK(std::filesystem::exists(pipeline.artifact("package_metrics.csv")));

    REQUIRE(pipeline.stats() == 0);
    std::string mention_stats = slurp(pipeline.artifact("mention_stats.csv"));
    CHECK(mention_stats.find("ecosystem,count,dependency_only,median,iqr,max,gini") == 0);
    CHECK(mention_stats.find("cran,2,0.5,") != std::string::npos);

    REQUIRE(pipeline.quadrants() == 0);
    CHECK(std::filesystem::exists(pipeline.artifact("quadrants_weighted.csv")));

    REQUIRE(pipeline.cycles() == 0);
    std::string summary = slurp(pipeline.artifact("cycles_summary.txt"));
    CHECK(summary.find("mention_components_acyclic=true") != std::string::npos);
    CHECK(summary.find("loop_fraction=0") != std::string::npos);
}

TEST_CASE("cli determinism: re-running build+analyze is byte-identical") {
    Pipeline pipeline;
    REQUIRE(pipeline.build() == 0);
    REQUIRE(pipeline.analyze() == 0);
    std::string gexf_first = slurp(pipeline.artifact("graph.gexf"));
    std::string metrics_first = slurp(pipeline.artifact("package_metrics.csv"));
    std::string weighted_first = slurp(pipeline.artifact("centrality_weighted.csv"));

    REQUIRE(pipeline.build() == 0);
    REQUIRE(pipeline.analyze() == 0);
    CHECK(slurp(pipeline.artifact("graph.gexf")) == gexf_first);
    CHECK(slurp(pipeline.artifact("package_metrics.csv")) == metrics_first);
    CHECK(slurp(pipeline.artifact("centrality_weighted.csv")) == weighted_first);
}

TEST_CASE("cli exit 2: unreadable input names the path") {
    TempDir dir;
    int code = run_cli({"build", "--mentions", (dir.path() / "absent.csv").string(),
                        "--citations", (dir.path() / "absent.csv").string(), "--registry",
                        (dir.path() / "absent.jsonl").string(), "--out",
                        (dir.path() / "out").string()});
    CHECK(code == 2);
}

TEST_CASE("cli exit 3: empty mention set") {
    TempDir dir;
    dir.write("mentions.csv", "paper_doi,ecosystem,package_id,package_name\n");
    dir.write("citations.csv", "paper_doi,citation_count\n");
    dir.write("registry.jsonl", "");
    int code = run_cli({"build", "--mentions", dir.file("mentions.csv").string(),
                        "--citations", dir.file("citations.csv").string(), "--registry",
                        dir.file("registry.jsonl").string(), "--out",
                        (dir.path() / "out").string()});
    CHECK(code == 3);
}

TEST_CASE("cli exit 4: cyclic graph with beta 1 fails with the divergence error") {
    TempDir dir;
    // hand-written GEXF with a 2-cycle inside the mentioned component
    dir.write("cyclic.gexf", R"(<?xml version="1.0"?>
<gexf version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node"><attribute id="0" title="type" type="string"/></attributes>
    <nodes>
      <node id="10.1/p"><attvalues><attvalue for="0" value="paper"/></attvalues></node>
      <node id="a"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
      <node id="b"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
    </nodes>
    <edges>
      <edge id="0" source="10.1/p" target="a" weight="3"/>
      <edge id="1" source="a" target="b" weight="1"/>
      <edge id="2" source="b" target="a" weight="1"/>
    </edges>
  </graph>
</gexf>)");
    int code = run_cli({"analyze", "--graph", dir.file("cyclic.gexf").string(), "--out",
                        (dir.path() / "out").string()});
    CHECK(code == 4);
}

TEST_CASE("cli cycles: injected in-component cycle flips the verdict with a witness") {
    TempDir dir;
    dir.write("cyclic.gexf", R"(<?xml version="1.0"?>
<gexf version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node"><attribute id="0" title="type" type="string"/></attributes>
    <nodes>
      <node id="10.1/p"><attvalues><attvalue for="0" value="paper"/></attvalues></node>
      <node id="a"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
      <node id="b"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
    </nodes>
    <edges>
      <edge id="0" source="10.1/p" target="a" weight="3"/>
      <edge id="1" source="a" target="b" weight="1"/>
      <edge id="2" source="b" target="a" weight="1"/>
    </edges>
  </graph>
</gexf>)");
    int code = run_cli({"cycles", "--graph", dir.file("cyclic.gexf").string(), "--out",
                        (dir.path() / "out").string()});
    CHECK(code == 0);
    std::string summary = slurp(dir.path() / "out" / "cycles_summary.txt");
    CHECK(summary.find("mention_components_acyclic=false") != std::string::npos);
    CHECK(summary.find("witness_cycle=a->b->a") != std::string::npos);
}

TEST_CASE("cli config file supplies defaults, flags override") {
    Pipeline pipeline;
    REQUIRE(pipeline.build() == 0);
    std::filesystem::path config = pipeline.dir.write(
        "depnet.toml", "out=\"" + pipeline.out + "\"\ntop-k=1\n");
    REQUIRE(run_cli({"analyze", "--config", config.string()}) == 0);
    REQUIRE(run_cli({"quadrants", "--config", config.string()}) == 0);
    std::string quadrants = slurp(pipeline.artifact("quadrants_weighted.csv"));
    // top-k=1: exactly one pasteur row
    CHECK(quadrants.find("pasteur,") != std::string::npos);
    std::size_t first = quadrants.find("pasteur,");
    CHECK(quadrants.find("pasteur,", first + 1) == std::string::npos);

    // a flag beats the same key in the config file
    REQUIRE(run_cli({"quadrants", "--config", config.string(), "--top-k", "2"}) == 0);
    quadrants = slurp(pipeline.artifact("quadrants_weighted.csv"));
    first = quadrants.find("pasteur,");
    std::size_t second = quadrants.find("pasteur,", first + 1);
    CHECK(second != std::string::npos);
    CHECK(quadrants.find("pasteur,", second + 1) == std::string::npos);
}

TEST_CASE("cli include: sanity-check packages are appended to the quadrant report") {
    Pipeline pipeline;
    REQUIRE(pipeline.build() == 0);
    REQUIRE(pipeline.analyze() == 0);
    REQUIRE(run_cli({"quadrants", "--out", pipeline.out, "--top-k", "1", "--include",
                     "helper"}) == 0);
    std::string quadrants = slurp(pipeline.artifact("quadrants_weighted.csv"));
    CHECK(quadrants.find("include,helper") != std::string::npos);
}

TEST_CASE("cli fetch: crawls a registry API into registry.jsonl usable by build") {
    httplib::Server server;
    server.Get("/cran/top", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(
            R"({"name":"top","latest_version":"1.0","dependencies":[{"name":"base","kind":"runtime"},{"name":"devkit","kind":"dev"}]})",
            "application/json");
    });
    server.Get("/cran/base", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"name":"base","latest_version":"2.0","dependencies":["gone"]})",
                        "application/json");
    });
    // /cran/gone falls through to 404
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    TempDir dir;
    dir.write("packages.csv", "ecosystem,name\ncran,top\n");
    std::string out = (dir.path() / "out").string();
    int code = run_cli({"fetch", "--base-url", "http://127.0.0.1:" + std::to_string(port),
                        "--packages", dir.file("packages.csv").string(), "--cache-dir",
                        (dir.path() / "cache").string(), "--delay-ms", "0", "--out", out});
    server.stop();
    server_thread.join();
    REQUIRE(code == 0);

    std::string snapshot = slurp(dir.path() / "out" / "registry.jsonl");
    CHECK(snapshot.find("\"name\":\"top\"") != std::string::npos);
    CHECK(snapshot.find("\"name\":\"base\"") != std::string::npos);
    CHECK(snapshot.find("devkit") == std::string::npos);  // dev dependency dropped
    std::string report = slurp(dir.path() / "out" / "fetch_report.txt");
    CHECK(report.find("unknown: cran/gone") != std::string::npos);

    // the crawled snapshot feeds straight into build
    dir.write("mentions.csv", "paper_doi,ecosystem,package_id,package_name\n10.1/p,cran,top,top\n");
    dir.write("citations.csv", "paper_doi,citation_count\n10.1/p,4\n");
    int build_code = run_cli({"build", "--mentions", dir.file("mentions.csv").string(),
                              "--citations", dir.file("citations.csv").string(), "--registry",
                              (dir.path() / "out" / "registry.jsonl").string(), "--out", out});
    CHECK(build_code == 0);
    std::string build_report = slurp(dir.path() / "out" / "build_report.txt");
    CHECK(build_report.find("nodes_cran=3") != std::string::npos);  // top, base, stub gone
}

TEST_CASE("cli variants subset: only requested variants are written") {
    Pipeline pipeline;
    REQUIRE(pipeline.build() == 0);
    REQUIRE(run_cli({"analyze", "--out", pipeline.out, "--variants", "weighted"}) == 0);
    CHECK(std::filesystem::exists(pipeline.artifact("centrality_weighted.csv")));
    CHECK(!std::filesystem::exists(pipeline.artifact("centrality_unweighted.csv")));
}

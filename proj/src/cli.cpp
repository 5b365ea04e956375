#include "depnet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "depnet/centrality.hpp"
#include "depnet/csv.hpp"
#include "depnet/gexf.hpp"
#include "depnet/graph.hpp"
#include "depnet/ingest.hpp"
#include "depnet/metrics.hpp"
#include "depnet/registry_client.hpp"
#include "depnet/structure.hpp"

namespace depnet {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitEmptyInput = 3;
constexpr int kExitDivergence = 4;

struct RunConfig {
    std::string mentions_path;
    std::string citations_path;
    std::string registry_path;
    std::string graph_path;
    std::string out_dir = ".";
    std::string base_url;
    std::string cache_dir;
    std::string packages_path;
    double beta = 1.0;
    double tolerance = 1e-10;
    int top_k = 12;
    int delay_ms = 250;
    int concurrency = 4;
    int retries = 3;
    std::vector<std::string> variant_names = {"unweighted", "weighted", "weighted_lcc"};
    std::vector<std::string> ecosystem_names = {"bioconductor", "cran", "pypi"};
    std::vector<std::string> include;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read input file: " + path);
    return in;
}

std::ofstream open_output(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write output file: " + path.string());
    return out;
}

std::set<Ecosystem> parse_ecosystems(const std::vector<std::string>& names) {
    std::set<Ecosystem> ecosystems;
    for (const auto& name : names) {
        auto eco = parse_ecosystem(name);
        if (!eco) throw FormatError("unknown ecosystem: " + name);
        ecosystems.insert(*eco);
    }
    return ecosystems;
}

std::vector<GraphVariant> parse_variants(const std::vector<std::string>& names) {
    std::vector<GraphVariant> variants;
    for (const auto& name : names) {
        auto variant = parse_variant(name);
        if (!variant) throw FormatError("unknown variant: " + name);
        if (std::find(variants.begin(), variants.end(), *variant) == variants.end())
            variants.push_back(*variant);
    }
    return variants;
}

DependencyGraph load_graph(const RunConfig& config) {
    std::string path = config.graph_path.empty()
                           ? (fs::path(config.out_dir) / "graph.gexf").string()
                           : config.graph_path;
    auto in = open_input(path);
    std::vector<std::string> warnings;
    DependencyGraph graph = read_gexf(in, &warnings);
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << '\n';
    return graph;
}

void write_rejects(std::ostream& out, const std::string& file,
                   const std::vector<RowReject>& rejects) {
    for (const auto& reject : rejects)
        csv::write_row(out, std::vector<std::string>{file, std::to_string(reject.line),
                                                     reject.reason});
}

int cmd_build(const RunConfig& config) {
    auto mentions_in = open_input(config.mentions_path);
    auto citations_in = open_input(config.citations_path);
    auto registry_in = open_input(config.registry_path);

    MentionParseResult mentions = parse_mentions(mentions_in);
    CitationParseResult citations = parse_citations(citations_in);
    RegistryLoadResult registry = load_registry_snapshot(registry_in);

    BuildConfig build_config;
    build_config.ecosystems = parse_ecosystems(config.ecosystem_names);
    BuildResult built = build_graph(mentions.records, citations.citations, registry.index,
                                    build_config);

    {
        auto out = open_output(fs::path(config.out_dir) / "graph.gexf");
        write_gexf(out, built.graph);
    }
    {
        auto out = open_output(fs::path(config.out_dir) / "edges.csv");
        write_edge_csv(out, built.graph);
    }
    {
        auto out = open_output(fs::path(config.out_dir) / "rejects.csv");
        csv::write_row(out, std::vector<std::string>{"file", "line", "reason"});
        write_rejects(out, config.mentions_path, mentions.rejects);
        write_rejects(out, config.citations_path, citations.rejects);
        write_rejects(out, config.registry_path, registry.rejects);
    }

    auto report = open_output(fs::path(config.out_dir) / "build_report.txt");
    report << "nodes_total=" << built.graph.node_count() << '\n';
    for (const auto& [cls, count] : built.report.node_counts)
        report << "nodes_" << to_string(cls) << "=" << count << '\n';
    report << "mention_edges=" << built.report.mention_edges << '\n';
    report << "dependency_edges=" << built.report.dependency_edges << '\n';
    report << "rejected_rows=" << mentions.rejects.size() + citations.rejects.size() +
                                      registry.rejects.size()
           << '\n';
    report << "missing_metadata=" << built.report.dangling.size() << '\n';
    for (const auto& [eco, name] : built.report.dangling)
        report << "missing: " << to_string(eco) << "/" << name << '\n';
    report << "papers_without_citations=" << built.report.papers_without_citations.size() << '\n';
    for (const auto& doi : built.report.papers_without_citations)
        report << "no_citations: " << doi << '\n';
    for (const auto& warning : built.report.warnings) report << "warning: " << warning << '\n';

    std::cout << "graph: " << built.graph.node_count() << " nodes, " << built.graph.edge_count()
              << " edges -> " << (fs::path(config.out_dir) / "graph.gexf").string() << '\n';
    return kExitOk;
}

std::string quadrant_or_empty(const PackageMetricsRow& row) {
    return std::string(to_string(row.quadrant));
}

void write_metrics_rows(std::ostream& out, GraphVariant variant,
                        const std::vector<PackageMetricsRow>& rows, bool header) {
    if (header)
        csv::write_row(out, std::vector<std::string>{"variant", "software", "ecosystem",
                                                     "node_key", "mentions", "mention_pct",
                                                     "centrality", "centrality_pct", "quadrant"});
    for (const auto& row : rows) {
        csv::write_row(out, std::vector<std::string>{
                                std::string(to_string(variant)), row.name,
                                std::string(to_string(row.node.cls)), row.node.key,
                                std::to_string(row.mentions), format_double(row.mention_pct),
                                format_double(row.centrality), format_double(row.centrality_pct),
                                quadrant_or_empty(row)});
    }
}

int cmd_analyze(const RunConfig& config) {
    DependencyGraph graph = load_graph(config);
    std::vector<GraphVariant> variants = parse_variants(config.variant_names);

    CentralityConfig base;
    base.beta = config.beta;
    base.tolerance = config.tolerance;
    std::map<GraphVariant, CentralityResult> results = run_variants(graph, base);

    for (GraphVariant variant : variants) {
        const CentralityResult& result = results.at(variant);
        auto out = open_output(fs::path(config.out_dir) /
                               ("centrality_" + std::string(to_string(variant)) + ".csv"));
        csv::write_row(out, std::vector<std::string>{"node_class", "node_key", "variant",
                                                     "raw_score", "normalized_score",
                                                     "converged"});
        for (const auto& [id, raw] : result.raw) {
            double normalized = result.normalized_applied ? result.normalized.at(id) : raw;
            csv::write_row(out, std::vector<std::string>{
                                    std::string(to_string(id.cls)), id.key,
                                    std::string(to_string(variant)), format_double(raw),
                                    format_double(normalized),
                                    result.converged ? "true" : "false"});
        }
    }

    auto metrics_out = open_output(fs::path(config.out_dir) / "package_metrics.csv");
    bool header = true;
    for (GraphVariant variant : variants) {
        std::vector<PackageMetricsRow> rows = package_metrics_rows(graph, results.at(variant));
        write_metrics_rows(metrics_out, variant, rows, header);
        header = false;
    }
    std::cout << "analyzed " << variants.size() << " variants over " << graph.package_count()
              << " packages\n";
    return kExitOk;
}

// Reads one centrality_<variant>.csv back into per-node scores.
std::map<NodeId, double> read_centrality_csv(const fs::path& path) {
    auto in = open_input(path.string());
    csv::Reader reader(in);
    auto header = reader.next_row();
    if (!header || header->size() < 5)
        throw FormatError("bad centrality csv: " + path.string());
    std::map<NodeId, double> scores;
    while (auto row = reader.next_row()) {
        auto cls = parse_node_class((*row)[0]);
        auto value = parse_double((*row)[4]);
        if (!cls || !value) throw FormatError("bad centrality row in " + path.string());
        scores[NodeId{*cls, (*row)[1]}] = *value;
    }
    return scores;
}

int cmd_stats(const RunConfig& config) {
    DependencyGraph graph = load_graph(config);
    std::vector<GraphVariant> variants = parse_variants(config.variant_names);

    auto mention_out = open_output(fs::path(config.out_dir) / "mention_stats.csv");
    csv::write_row(mention_out,
                   std::vector<std::string>{"ecosystem", "count", "dependency_only", "median",
                                            "iqr", "max", "gini"});
    auto centrality_out = open_output(fs::path(config.out_dir) / "centrality_stats.csv");
    csv::write_row(centrality_out, std::vector<std::string>{"ecosystem", "variant", "median",
                                                            "iqr", "max", "gini"});

    for (Ecosystem eco : kAllEcosystems) {
        const NodeClass cls = node_class_of(eco);
        if (graph.class_count(cls) == 0) continue;

        std::vector<double> mentions;
        std::size_t unmentioned = 0;
        for (const auto& node : graph.nodes()) {
            if (node.id.cls != cls) continue;
            mentions.push_back(static_cast<double>(node.mention_count));
            if (node.mention_count == 0) ++unmentioned;
        }
        SummaryStats stats = summarize_values(mentions);
        csv::write_row(mention_out,
                       std::vector<std::string>{
                           std::string(to_string(eco)), std::to_string(stats.count),
                           format_double(static_cast<double>(unmentioned) /
                                         static_cast<double>(mentions.size())),
                           format_double(stats.median), format_double(stats.iqr),
                           format_double(stats.max), format_double(stats.gini)});

        for (GraphVariant variant : variants) {
            fs::path path = fs::path(config.out_dir) /
                            ("centrality_" + std::string(to_string(variant)) + ".csv");
            std::map<NodeId, double> scores = read_centrality_csv(path);
            std::vector<double> values;
            for (const auto& [id, value] : scores)
                if (id.cls == cls) values.push_back(value);
            if (values.empty()) continue;
            SummaryStats centrality_stats = summarize_values(values);
            csv::write_row(centrality_out,
                           std::vector<std::string>{
                               std::string(to_string(eco)), std::string(to_string(variant)),
                               format_double(centrality_stats.median),
                               format_double(centrality_stats.iqr),
                               format_double(centrality_stats.max),
                               format_double(centrality_stats.gini)});
        }
    }
    std::cout << "stats written to " << config.out_dir << '\n';
    return kExitOk;
}

// Reads package_metrics.csv back into rows grouped by variant.
std::map<GraphVariant, std::vector<PackageMetricsRow>> read_metrics_csv(const fs::path& path) {
    auto in = open_input(path.string());
    csv::Reader reader(in);
    auto header = reader.next_row();
    if (!header || header->size() != 9)
        throw FormatError("bad package metrics csv: " + path.string());
    std::map<GraphVariant, std::vector<PackageMetricsRow>> by_variant;
    while (auto row = reader.next_row()) {
        auto variant = parse_variant((*row)[0]);
        auto cls = parse_node_class((*row)[2]);
        auto mentions = parse_uint((*row)[4]);
        auto mention_pct = parse_double((*row)[5]);
        auto centrality = parse_double((*row)[6]);
        auto centrality_pct = parse_double((*row)[7]);
        if (!variant || !cls || !mentions || !mention_pct || !centrality || !centrality_pct)
            throw FormatError("bad metrics row in " + path.string());
        PackageMetricsRow row_out;
        row_out.name = (*row)[1];
        row_out.node = NodeId{*cls, (*row)[3]};
        row_out.mentions = *mentions;
        row_out.mention_pct = *mention_pct;
        row_out.centrality = *centrality;
        row_out.centrality_pct = *centrality_pct;
        row_out.quadrant = classify_quadrant(*mention_pct, *centrality_pct);
        row_out.pasteur_score = *mention_pct + *centrality_pct;
        by_variant[*variant].push_back(std::move(row_out));
    }
    return by_variant;
}

int cmd_quadrants(const RunConfig& config) {
    auto by_variant = read_metrics_csv(fs::path(config.out_dir) / "package_metrics.csv");
    std::vector<GraphVariant> variants = parse_variants(config.variant_names);

    for (GraphVariant variant : variants) {
        auto it = by_variant.find(variant);
        if (it == by_variant.end()) continue;
        TopKReports reports = top_k_reports(it->second, static_cast<std::size_t>(config.top_k),
                                            config.include);
        auto out = open_output(fs::path(config.out_dir) /
                               ("quadrants_" + std::string(to_string(variant)) + ".csv"));
        csv::write_row(out, std::vector<std::string>{"list", "software", "ecosystem", "mentions",
                                                     "mention_pct", "centrality",
                                                     "centrality_pct", "quadrant"});
        auto write_list = [&](const std::string& list,
                              const std::vector<PackageMetricsRow>& rows) {
            for (const auto& row : rows) {
                csv::write_row(out, std::vector<std::string>{
                                        list, row.name, std::string(to_string(row.node.cls)),
                                        std::to_string(row.mentions),
                                        format_double(row.mention_pct),
                                        format_double(row.centrality),
                                        format_double(row.centrality_pct),
                                        std::string(to_string(row.quadrant))});
            }
        };
        write_list("pasteur", reports.pasteur);
        write_list("popular", reports.popular);
        write_list("nebraska", reports.nebraska);
        write_list("include", reports.included);
    }
    std::cout << "quadrant reports written to " << config.out_dir << '\n';
    return kExitOk;
}

int cmd_cycles(const RunConfig& config) {
    DependencyGraph graph = load_graph(config);
    SccReport scc = strongly_connected_components(graph);
    MentionAcyclicityReport acyclicity = assert_mention_components_acyclic(graph);

    {
        auto out = open_output(fs::path(config.out_dir) / "cycles.csv");
        csv::write_row(out, std::vector<std::string>{"component_id", "size", "package_keys"});
        std::size_t component_id = 0;
        for (const auto& component : scc.components) {
            if (component.size() < 2) continue;
            std::string keys;
            for (const auto& id : component) {
                if (!keys.empty()) keys += ';';
                keys += id.key;
            }
            csv::write_row(out, std::vector<std::string>{std::to_string(component_id++),
                                                         std::to_string(component.size()), keys});
        }
    }

    std::ostringstream summary;
    for (Ecosystem eco : kAllEcosystems) {
        const NodeClass cls = node_class_of(eco);
        std::size_t total = graph.class_count(cls);
        if (total == 0) continue;
        std::size_t loops = 0;
        for (const auto& id : scc.loop_packages)
            if (id.cls == cls) ++loops;
        summary << to_string(eco) << " loop_fraction="
                << format_double(static_cast<double>(loops) / static_cast<double>(total)) << '\n';
    }
    summary << "loop_fraction=" << format_double(scc.loop_fraction) << '\n';
    summary << "mention_components_acyclic=" << (acyclicity.acyclic ? "true" : "false") << '\n';
    if (acyclicity.witness_cycle) {
        summary << "witness_cycle=";
        for (std::size_t i = 0; i < acyclicity.witness_cycle->size(); ++i) {
            if (i) summary << "->";
            summary << (*acyclicity.witness_cycle)[i].key;
        }
        summary << '\n';
    }
    auto out = open_output(fs::path(config.out_dir) / "cycles_summary.txt");
    out << summary.str();
    std::cout << summary.str();
    return kExitOk;
}

int cmd_fetch(const RunConfig& config) {
    if (config.base_url.empty()) throw FormatError("fetch requires --base-url");
    auto packages_in = open_input(config.packages_path);
    csv::Reader reader(packages_in);
    auto header = reader.next_row();
    if (!header || *header != std::vector<std::string>{"ecosystem", "name"})
        throw FormatError("packages file: expected header `ecosystem,name`");
    std::vector<std::pair<Ecosystem, std::string>> roots;
    while (auto row = reader.next_row()) {
        if (row->size() != 2) throw FormatError("packages file: expected 2 fields per row");
        auto eco = parse_ecosystem((*row)[0]);
        if (!eco) throw FormatError("packages file: unknown ecosystem " + (*row)[0]);
        roots.emplace_back(*eco, (*row)[1]);
    }
    if (roots.empty()) throw EmptyInputError("packages file lists no packages");

    RegistryClientConfig client_config;
    client_config.base_url = config.base_url;
    client_config.cache_dir = config.cache_dir;
    client_config.politeness_delay = std::chrono::milliseconds(config.delay_ms);
    client_config.concurrency = config.concurrency;
    client_config.max_retries = config.retries;
    RegistryClient client(std::move(client_config));

    RegistryClient::CrawlResult crawl = client.crawl(roots);

    PackageIndex index;
    for (auto& [key, record] : crawl.records) index.insert(std::move(record));
    {
        auto out = open_output(fs::path(config.out_dir) / "registry.jsonl");
        write_registry_snapshot(out, index);
    }
    auto report = open_output(fs::path(config.out_dir) / "fetch_report.txt");
    report << "fetched=" << crawl.records.size() << '\n';
    report << "unknown=" << crawl.unknown.size() << '\n';
    for (const auto& [eco, name] : crawl.unknown)
        report << "unknown: " << to_string(eco) << "/" << name << '\n';
    report << "failed=" << crawl.failed.size() << '\n';
    for (const auto& [eco, name] : crawl.failed)
        report << "failed: " << to_string(eco) << "/" << name << '\n';

    std::cout << "fetched " << crawl.records.size() << " packages ("
              << crawl.unknown.size() << " unknown, " << crawl.failed.size() << " failed)\n";
    return crawl.failed.empty() ? kExitOk : kExitInputError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"two-mode paper/package dependency network analytics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML-style key=value file");

    RunConfig config;
    app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--mentions", config.mentions_path, "mentions.csv path");
    app.add_option("--citations", config.citations_path, "citations.csv path");
    app.add_option("--registry", config.registry_path, "registry.jsonl path");
    app.add_option("--graph", config.graph_path, "graph.gexf path (defaults to <out>/graph.gexf)");
    app.add_option("--beta", config.beta, "katz attenuation factor")->capture_default_str();
    app.add_option("--tolerance", config.tolerance, "iterative stop tolerance")
        ->capture_default_str();
    app.add_option("--top-k", config.top_k, "rows per quadrant list")->capture_default_str();
    app.add_option("--variants", config.variant_names, "graph variants to analyze")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--ecosystems", config.ecosystem_names, "ecosystems to include")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--include", config.include, "named sanity-check packages for quadrant reports")
        ->delimiter(',');
    app.add_option("--base-url", config.base_url, "registry API base URL (fetch)");
    app.add_option("--cache-dir", config.cache_dir,
                   "metadata cache directory (default $DEPNET_CACHE_DIR or ./cache)");
    app.add_option("--packages", config.packages_path, "ecosystem,name CSV of crawl roots");
    app.add_option("--delay-ms", config.delay_ms, "politeness delay between requests")
        ->capture_default_str();
    app.add_option("--concurrency", config.concurrency, "parallel fetch requests")
        ->capture_default_str();
    app.add_option("--retries", config.retries, "bounded retries per request")
        ->capture_default_str();

    auto* build = app.add_subcommand("build", "construct the graph from the three inputs");
    auto* analyze = app.add_subcommand("analyze", "katz centrality and per-package metrics");
    auto* stats = app.add_subcommand("stats", "mention and centrality summary tables");
    auto* quadrants = app.add_subcommand("quadrants", "top-k quadrant listings");
    auto* cycles = app.add_subcommand("cycles", "dependency loops and acyclicity verdict");
    auto* fetch = app.add_subcommand("fetch", "crawl a registry API into registry.jsonl");
    for (auto* sub : {build, analyze, stats, quadrants, cycles, fetch}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (build->parsed()) return cmd_build(config);
        if (analyze->parsed()) return cmd_analyze(config);
        if (stats->parsed()) return cmd_stats(config);
        if (quadrants->parsed()) return cmd_quadrants(config);
        if (cycles->parsed()) return cmd_cycles(config);
        if (fetch->parsed()) return cmd_fetch(config);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const EmptyInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEmptyInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}

}  // namespace depnet

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "depnet/centrality.hpp"
#include "depnet/gexf.hpp"
#include "depnet/graph.hpp"
#include "depnet/ingest.hpp"
#include "depnet/metrics.hpp"
#include "depnet/structure.hpp"

namespace py = pybind11;
using namespace depnet;

namespace {

std::ifstream open_or_raise(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read input file: " + path.string());
    return in;
}

CentralityConfig make_config(double beta, double tolerance, int max_iterations, bool normalize,
                             double baseline) {
    CentralityConfig config;
    config.beta = beta;
    config.tolerance = tolerance;
    config.max_iterations = max_iterations;
    config.normalize = normalize;
    config.baseline = baseline;
    return config;
}

py::dict result_to_dict(const CentralityResult& result) {
    py::dict raw, normalized;
    for (const auto& [id, value] : result.raw)
        raw[py::make_tuple(std::string(to_string(id.cls)), id.key)] = value;
    for (const auto& [id, value] : result.normalized)
        normalized[py::make_tuple(std::string(to_string(id.cls)), id.key)] = value;
    py::dict out;
    out["variant"] = std::string(to_string(result.variant));
    out["raw"] = raw;
    out["normalized"] = normalized;
    out["converged"] = result.converged;
    out["iterations_used"] = result.iterations_used;
    out["normalized_applied"] = result.normalized_applied;
    return out;
}

py::list rows_to_list(const std::vector<PackageMetricsRow>& rows) {
    py::list out;
    for (const auto& row : rows) {
        py::dict item;
        item["ecosystem"] = std::string(to_string(row.node.cls));
        item["key"] = row.node.key;
        item["name"] = row.name;
        item["mentions"] = row.mentions;
        item["mention_pct"] = row.mention_pct;
        item["centrality"] = row.centrality;
        item["centrality_pct"] = row.centrality_pct;
        item["quadrant"] = std::string(to_string(row.quadrant));
        item["pasteur_score"] = row.pasteur_score;
        out.append(item);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "two-mode paper/package dependency network analytics";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<EmptyInputError>(m, "EmptyInputError", PyExc_ValueError);
    py::register_exception<CycleError>(m, "CycleError", PyExc_RuntimeError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    py::class_<DependencyGraph>(m, "DependencyGraph")
        .def("node_count", &DependencyGraph::node_count)
        .def("edge_count", &DependencyGraph::edge_count)
        .def("package_count", &DependencyGraph::package_count)
        .def("class_count",
             [](const DependencyGraph& graph, const std::string& cls) {
                 auto parsed = parse_node_class(cls);
                 if (!parsed) throw FormatError("unknown node class: " + cls);
                 return graph.class_count(*parsed);
             })
        .def("nodes",
             [](const DependencyGraph& graph) {
                 py::list out;
                 for (const auto& node : graph.nodes()) {
                     py::dict item;
                     item["cls"] = std::string(to_string(node.id.cls));
                     item["key"] = node.id.key;
                     item["name"] = node.name;
                     item["mention_count"] = node.mention_count;
                     item["metadata_missing"] = node.metadata_missing;
                     item["citations_unknown"] = node.citations_unknown;
                     out.append(item);
                 }
                 return out;
             })
        .def("edges",
             [](const DependencyGraph& graph) {
                 py::list out;
                 for (NodeIndex i = 0; i < graph.node_count(); ++i)
                     for (const auto& edge : graph.out_edges(i))
                         out.append(py::make_tuple(graph.node(i).id.key,
                                                   graph.node(edge.neighbor).id.key,
                                                   edge.weight));
                 return out;
             })
        .def("__eq__", [](const DependencyGraph& a, const DependencyGraph& b) { return a == b; });

    m.def(
        "build_graph",
        [](const std::filesystem::path& mentions_path, const std::filesystem::path& citations_path,
           const std::filesystem::path& registry_path, const std::vector<std::string>& ecosystems) {
            auto mentions_in = open_or_raise(mentions_path);
            auto citations_in = open_or_raise(citations_path);
            auto registry_in = open_or_raise(registry_path);
            MentionParseResult mentions = parse_mentions(mentions_in);
            CitationParseResult citations = parse_citations(citations_in);
            RegistryLoadResult registry = load_registry_snapshot(registry_in);
            BuildConfig config;
            if (!ecosystems.empty()) {
                config.ecosystems.clear();
                for (const auto& name : ecosystems) {
                    auto eco = parse_ecosystem(name);
                    if (!eco) throw FormatError("unknown ecosystem: " + name);
                    config.ecosystems.insert(*eco);
                }
            }
            return build_graph(mentions.records, citations.citations, registry.index, config)
                .graph;
        },
        py::arg("mentions"), py::arg("citations"), py::arg("registry"),
        py::arg("ecosystems") = std::vector<std::string>{});

    m.def("read_gexf", [](const std::filesystem::path& path) {
        auto in = open_or_raise(path);
        return read_gexf(in);
    });
    m.def("write_gexf", [](const DependencyGraph& graph, const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + path.string());
        write_gexf(out, graph);
    });
    m.def("gexf_dumps", [](const DependencyGraph& graph) {
        std::ostringstream out;
        write_gexf(out, graph);
        return out.str();
    });
    m.def("gexf_loads", [](const std::string& text) {
        std::istringstream in(text);
        return read_gexf(in);
    });

    m.def(
        "katz_centrality",
        [](const DependencyGraph& graph, const std::string& variant, double beta,
           double tolerance, int max_iterations, bool normalize, double baseline) {
            CentralityConfig config =
                make_config(beta, tolerance, max_iterations, normalize, baseline);
            auto parsed = parse_variant(variant);
            if (!parsed) throw FormatError("unknown variant: " + variant);
            config.variant = *parsed;
            return result_to_dict(katz_centrality(graph, config));
        },
        py::arg("graph"), py::arg("variant") = "weighted", py::arg("beta") = 1.0,
        py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 10000,
        py::arg("normalize") = true, py::arg("baseline") = 1.0);

    m.def(
        "run_variants",
        [](const DependencyGraph& graph, double beta, double tolerance, int max_iterations,
           bool normalize, double baseline) {
            CentralityConfig config =
                make_config(beta, tolerance, max_iterations, normalize, baseline);
            py::dict out;
            for (const auto& [variant, result] : run_variants(graph, config))
                out[std::string(to_string(variant)).c_str()] = result_to_dict(result);
            return out;
        },
        py::arg("graph"), py::arg("beta") = 1.0, py::arg("tolerance") = 1e-10,
        py::arg("max_iterations") = 10000, py::arg("normalize") = true,
        py::arg("baseline") = 1.0);

    m.def(
        "package_metrics",
        [](const DependencyGraph& graph, const std::string& variant, double beta) {
            CentralityConfig config;
            config.beta = beta;
            auto results = run_variants(graph, config);
            auto parsed = parse_variant(variant);
            if (!parsed) throw FormatError("unknown variant: " + variant);
            return rows_to_list(package_metrics_rows(graph, results.at(*parsed)));
        },
        py::arg("graph"), py::arg("variant") = "weighted", py::arg("beta") = 1.0);

    m.def("gini", [](const std::vector<double>& values) { return gini(values); });
    m.def("percentile_ranks",
          [](const std::vector<double>& values) { return percentile_ranks(values); });
    m.def("classify_quadrant", [](double mention_pct, double centrality_pct) {
        return std::string(to_string(classify_quadrant(mention_pct, centrality_pct)));
    });

    m.def("strongly_connected_components", [](const DependencyGraph& graph) {
        SccReport report = strongly_connected_components(graph);
        py::dict out;
        py::list components;
        for (const auto& component : report.components) {
            py::list member_keys;
            for (const auto& id : component) member_keys.append(id.key);
            components.append(member_keys);
        }
        py::list loops;
        for (const auto& id : report.loop_packages) loops.append(id.key);
        out["components"] = components;
        out["loop_packages"] = loops;
        out["loop_fraction"] = report.loop_fraction;
        return out;
    });

    m.def("mention_components_acyclic", [](const DependencyGraph& graph) {
        MentionAcyclicityReport report = assert_mention_components_acyclic(graph);
        py::dict out;
        out["acyclic"] = report.acyclic;
        if (report.witness_cycle) {
            py::list witness;
            for (const auto& id : *report.witness_cycle) witness.append(id.key);
            out["witness_cycle"] = witness;
        } else {
            out["witness_cycle"] = py::none();
        }
        return out;
    });

    m.def("largest_connected_component", [](const DependencyGraph& graph,
                                            const std::string& ecosystem) {
        auto eco = parse_ecosystem(ecosystem);
        if (!eco) throw FormatError("unknown ecosystem: " + ecosystem);
        ComponentReport report = largest_connected_component(graph, *eco);
        py::dict out;
        out["component_sizes"] = report.component_sizes;
        py::list members;
        for (const auto& id : report.lcc_nodes) members.append(id.key);
        out["lcc_nodes"] = members;
        return out;
    });
}

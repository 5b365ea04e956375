#include "depnet/gexf.hpp"

#include <map>
#include <set>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace depnet {

namespace {

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            // literal whitespace in attribute values would be normalized to
            // spaces on read
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            case '\t': out += "&#9;"; break;
            default: out += c;
        }
    }
    return out;
}

// Element names may arrive namespace-qualified ("ns0:node"); compare on the
// local part.
std::string_view local_name(std::string_view key) {
    auto pos = key.rfind(':');
    return pos == std::string_view::npos ? key : key.substr(pos + 1);
}

const boost::property_tree::ptree* find_child(const boost::property_tree::ptree& tree,
                                              std::string_view name) {
    for (const auto& [key, child] : tree)
        if (local_name(key) == name) return &child;
    return nullptr;
}

std::string get_attr(const boost::property_tree::ptree& element, const std::string& name,
                     const std::string& fallback = {}) {
    auto attrs = element.get_child_optional("<xmlattr>");
    if (!attrs) return fallback;
    return attrs->get<std::string>(name, fallback);
}

}  // namespace

void write_gexf(std::ostream& out, const DependencyGraph& graph) {
    {
        std::set<std::string_view> keys;
        for (const auto& node : graph.nodes())
            if (!keys.insert(node.id.key).second)
                throw FormatError("gexf: node key `" + std::string(node.id.key) +
                                  "` appears in more than one class; ids would collide");
    }

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
    out << "  <graph defaultedgetype=\"directed\">\n";
    out << "    <attributes class=\"node\">\n";
    out << "      <attribute id=\"0\" title=\"type\" type=\"string\"/>\n";
    out << "      <attribute id=\"1\" title=\"metadata_missing\" type=\"boolean\"/>\n";
    out << "      <attribute id=\"2\" title=\"citations_unknown\" type=\"boolean\"/>\n";
    out << "    </attributes>\n";
    out << "    <nodes>\n";
    for (const auto& node : graph.nodes()) {
        out << "      <node id=\"" << xml_escape(node.id.key) << "\" label=\""
            << xml_escape(node.name) << "\">\n";
        out << "        <attvalues>\n";
        out << "          <attvalue for=\"0\" value=\"" << to_string(node.id.cls) << "\"/>\n";
        if (node.metadata_missing)
            out << "          <attvalue for=\"1\" value=\"true\"/>\n";
        if (node.citations_unknown)
            out << "          <attvalue for=\"2\" value=\"true\"/>\n";
        out << "        </attvalues>\n";
        out << "      </node>\n";
    }
    out << "    </nodes>\n";
    out << "    <edges>\n";
    std::size_t edge_id = 0;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        for (const auto& edge : graph.out_edges(i)) {
            out << "      <edge id=\"" << edge_id++ << "\" source=\""
                << xml_escape(graph.node(i).id.key) << "\" target=\""
                << xml_escape(graph.node(edge.neighbor).id.key) << "\" weight=\""
                << format_double(edge.weight) << "\"/>\n";
        }
    }
    out << "    </edges>\n";
    out << "  </graph>\n";
    out << "</gexf>\n";
}

DependencyGraph read_gexf(std::istream& in, std::vector<std::string>* warnings) {
    namespace pt = boost::property_tree;
    pt::ptree doc;
    try {
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw FormatError(std::string("gexf: xml parse failed: ") + e.what());
    }

    auto warn = [&](const std::string& message) {
        if (warnings) warnings->push_back(message);
    };

    const pt::ptree* gexf = find_child(doc, "gexf");
    if (!gexf) throw FormatError("gexf: missing <gexf> root element");
    const pt::ptree* graph_el = find_child(*gexf, "graph");
    if (!graph_el) throw FormatError("gexf: missing <graph> element");
    if (get_attr(*graph_el, "defaultedgetype") != "directed")
        throw FormatError("gexf: only directed graphs are supported "
                          "(defaultedgetype=\"directed\" required)");

    // Attribute declarations: attribute id -> title, per class.
    std::map<std::string, std::string> attr_titles, edge_attr_titles;
    for (const auto& [key, child] : *graph_el) {
        if (local_name(key) != "attributes") continue;
        auto& titles = get_attr(child, "class") == "edge" ? edge_attr_titles : attr_titles;
        for (const auto& [akey, attr] : child) {
            if (local_name(akey) != "attribute") continue;
            titles[get_attr(attr, "id")] = get_attr(attr, "title");
        }
    }

    GraphBuilder builder;
    std::map<std::string, NodeId> ids;
    std::set<std::string> unknown_attrs;

    const pt::ptree* nodes_el = find_child(*graph_el, "nodes");
    if (!nodes_el) throw FormatError("gexf: missing <nodes> element");
    for (const auto& [key, node_el] : *nodes_el) {
        if (local_name(key) != "node") continue;
        std::string id = get_attr(node_el, "id");
        if (id.empty()) throw FormatError("gexf: node without id");
        std::string label = get_attr(node_el, "label", id);

        std::string type_value;
        bool metadata_missing = false;
        bool citations_unknown = false;
        if (const pt::ptree* attvalues = find_child(node_el, "attvalues")) {
            for (const auto& [vkey, attvalue] : *attvalues) {
                if (local_name(vkey) != "attvalue") continue;
                auto title_it = attr_titles.find(get_attr(attvalue, "for"));
                std::string title = title_it == attr_titles.end() ? get_attr(attvalue, "for")
                                                                  : title_it->second;
                std::string value = get_attr(attvalue, "value");
                if (title == "type") type_value = value;
                else if (title == "metadata_missing") metadata_missing = value == "true";
                else if (title == "citations_unknown") citations_unknown = value == "true";
                else if (unknown_attrs.insert(title).second)
                    warn("gexf: ignoring unknown node attribute `" + title + "`");
            }
        }
        auto cls = parse_node_class(type_value);
        if (!cls)
            throw FormatError("gexf: node `" + id + "` has unknown type `" + type_value + "`");
        NodeId node_id{*cls, id};
        if (!ids.emplace(id, node_id).second)
            throw FormatError("gexf: duplicate node id `" + id + "`");
        builder.ensure_node(node_id, label);
        if (metadata_missing) builder.set_metadata_missing(node_id, true);
        if (citations_unknown) builder.set_citations_unknown(node_id, true);
    }

    const pt::ptree* edges_el = find_child(*graph_el, "edges");
    if (edges_el) {
        for (const auto& [key, edge_el] : *edges_el) {
            if (local_name(key) != "edge") continue;
            if (get_attr(edge_el, "type", "directed") != "directed")
                throw FormatError("gexf: undirected edge declarations are not supported");
            std::string source = get_attr(edge_el, "source");
            std::string target = get_attr(edge_el, "target");
            auto source_it = ids.find(source);
            auto target_it = ids.find(target);
            if (source_it == ids.end() || target_it == ids.end())
                throw FormatError("gexf: edge references unknown node `" +
                                  (source_it == ids.end() ? source : target) + "`");
            std::string weight_text = get_attr(edge_el, "weight");
            if (weight_text.empty()) {
                // some writers put the weight in an attvalue instead
                if (const pt::ptree* attvalues = find_child(edge_el, "attvalues")) {
                    for (const auto& [vkey, attvalue] : *attvalues) {
                        if (local_name(vkey) != "attvalue") continue;
                        auto title_it = edge_attr_titles.find(get_attr(attvalue, "for"));
                        std::string title = title_it == edge_attr_titles.end()
                                                ? get_attr(attvalue, "for")
                                                : title_it->second;
                        if (title == "weight") weight_text = get_attr(attvalue, "value");
                    }
                }
            }
            double weight = 1.0;
            if (weight_text.empty()) {
                warn("gexf: edge " + source + " -> " + target +
                     " has no weight, defaulting to 1");
            } else {
                auto parsed = parse_double(weight_text);
                if (!parsed)
                    throw FormatError("gexf: bad edge weight `" + weight_text + "`");
                weight = *parsed;
            }
            builder.add_edge(source_it->second, target_it->second, weight);
        }
    }

    for (const auto& message : builder.warnings()) warn(message);
    return builder.finalize();
}

}  // namespace depnet

#include "depnet/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace depnet {

std::string_view to_string(Ecosystem eco) {
    switch (eco) {
        case Ecosystem::bioconductor: return "bioconductor";
        case Ecosystem::cran: return "cran";
        case Ecosystem::pypi: return "pypi";
    }
    return "?";
}

std::optional<Ecosystem> parse_ecosystem(std::string_view text) {
    if (text == "bioconductor") return Ecosystem::bioconductor;
    if (text == "cran") return Ecosystem::cran;
    if (text == "pypi") return Ecosystem::pypi;
    return std::nullopt;
}

std::string_view to_string(NodeClass cls) {
    switch (cls) {
        case NodeClass::paper: return "paper";
        case NodeClass::bioconductor: return "bioconductor";
        case NodeClass::cran: return "cran";
        case NodeClass::pypi: return "pypi";
    }
    return "?";
}

std::optional<NodeClass> parse_node_class(std::string_view text) {
    if (text == "paper") return NodeClass::paper;
    if (auto eco = parse_ecosystem(text)) return node_class_of(*eco);
    return std::nullopt;
}

NodeClass node_class_of(Ecosystem eco) {
    switch (eco) {
        case Ecosystem::bioconductor: return NodeClass::bioconductor;
        case Ecosystem::cran: return NodeClass::cran;
        case Ecosystem::pypi: return NodeClass::pypi;
    }
    return NodeClass::pypi;
}

std::optional<Ecosystem> ecosystem_of(NodeClass cls) {
    switch (cls) {
        case NodeClass::paper: return std::nullopt;
        case NodeClass::bioconductor: return Ecosystem::bioconductor;
        case NodeClass::cran: return Ecosystem::cran;
        case NodeClass::pypi: return Ecosystem::pypi;
    }
    return std::nullopt;
}

int class_sort_rank(NodeClass cls) {
    // bioconductor < cran < paper < pypi
    switch (cls) {
        case NodeClass::bioconductor: return 0;
        case NodeClass::cran: return 1;
        case NodeClass::paper: return 2;
        case NodeClass::pypi: return 3;
    }
    return 4;
}

bool CitationMap::record(const std::string& doi, std::uint64_t count) {
    auto [it, inserted] = counts_.emplace(doi, count);
    if (!inserted) {
        it->second = std::max(it->second, count);
        return false;
    }
    return true;
}

std::optional<std::uint64_t> CitationMap::find(const std::string& doi) const {
    auto it = counts_.find(doi);
    if (it == counts_.end()) return std::nullopt;
    return it->second;
}

std::string fold_package_name(Ecosystem eco, std::string_view name) {
    if (eco != Ecosystem::pypi) return std::string(name);
    std::string folded(name);
    std::transform(folded.begin(), folded.end(), folded.begin(), [](unsigned char c) {
        if (c == '_') return '-';
        return static_cast<char>(std::tolower(c));
    });
    return folded;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) return std::nullopt;
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

}  // namespace depnet

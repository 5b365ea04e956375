#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace depnet {

// ---------------------------------------------------------------------------
// Errors

// Base class for all recoverable errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input: bad CSV/JSONL/GEXF structure, bad API payload.
struct FormatError : Error {
    using Error::Error;
};

// Registry snapshot contains conflicting records for the same package.
struct SnapshotError : FormatError {
    using FormatError::FormatError;
};

// Input is empty or too small to be analyzed (no seed mentions, < 2 packages).
struct EmptyInputError : Error {
    using Error::Error;
};

// Exact accumulation was asked for a graph that contains a directed cycle.
struct CycleError : Error {
    using Error::Error;
};

// Katz iteration diverged or failed to converge within the iteration budget.
struct DivergenceError : Error {
    DivergenceError(const std::string& what, double beta, double rho_bound)
        : Error(what), beta(beta), rho_bound(rho_bound) {}
    double beta;
    double rho_bound;  // estimated lower bound on the spectral radius
};

// Registry API request failed after the configured retries.
struct FetchError : Error {
    using Error::Error;
};

// Registry API reported that the package does not exist (negative-cached).
struct PackageUnknownError : FetchError {
    using FetchError::FetchError;
};

// ---------------------------------------------------------------------------
// Ecosystems and node identities

enum class Ecosystem : std::uint8_t { bioconductor, cran, pypi };

inline constexpr Ecosystem kAllEcosystems[] = {Ecosystem::bioconductor, Ecosystem::cran,
                                               Ecosystem::pypi};

std::string_view to_string(Ecosystem eco);
std::optional<Ecosystem> parse_ecosystem(std::string_view text);

// Node classes of the two-mode network: papers plus one class per ecosystem.
enum class NodeClass : std::uint8_t { paper, bioconductor, cran, pypi };

std::string_view to_string(NodeClass cls);
std::optional<NodeClass> parse_node_class(std::string_view text);
NodeClass node_class_of(Ecosystem eco);
std::optional<Ecosystem> ecosystem_of(NodeClass cls);
inline bool is_package_class(NodeClass cls) { return cls != NodeClass::paper; }

// Rank used wherever nodes are ordered: alphabetical on the class name, so
// emitted CSV rows sort the same way as the class strings.
int class_sort_rank(NodeClass cls);

// (class, key) pair identifying one node. Papers are keyed by DOI, packages
// by their ecosystem-specific identifier.
struct NodeId {
    NodeClass cls = NodeClass::paper;
    std::string key;

    bool operator==(const NodeId&) const = default;
    std::strong_ordering operator<=>(const NodeId& other) const {
        if (auto c = class_sort_rank(cls) <=> class_sort_rank(other.cls); c != 0) return c;
        return key <=> other.key;
    }
};

struct NodeIdHash {
    std::size_t operator()(const NodeId& id) const {
        return std::hash<std::string>()(id.key) * 4 + static_cast<std::size_t>(id.cls);
    }
};

inline NodeId paper_node(std::string doi) { return {NodeClass::paper, std::move(doi)}; }
inline NodeId package_node(Ecosystem eco, std::string id) {
    return {node_class_of(eco), std::move(id)};
}

// ---------------------------------------------------------------------------
// Ingest records

// One paper -> package mention, already resolved to an ecosystem identifier.
struct MentionRecord {
    std::string paper_doi;
    Ecosystem ecosystem = Ecosystem::pypi;
    std::string package_id;
    std::string package_name;

    bool operator==(const MentionRecord&) const = default;
};

// Citation counts per DOI. Lookup of an absent DOI is distinguishable from a
// stored count of zero.
class CitationMap {
  public:
    // Keeps the maximum count seen for a DOI; returns false when the row was
    // a duplicate that did not raise the stored value semantics-wise.
    bool record(const std::string& doi, std::uint64_t count);
    std::optional<std::uint64_t> find(const std::string& doi) const;
    std::size_t size() const { return counts_.size(); }
    const std::unordered_map<std::string, std::uint64_t>& entries() const { return counts_; }

  private:
    std::unordered_map<std::string, std::uint64_t> counts_;
};

// Metadata of one package at its latest release.
struct PackageRecord {
    Ecosystem ecosystem = Ecosystem::pypi;
    std::string package_id;
    std::string name;
    std::string latest_version;
    std::vector<std::string> dependencies;  // names within the same ecosystem

    bool operator==(const PackageRecord&) const = default;
};

// PyPI treats names case-insensitively with '-' and '_' interchangeable;
// CRAN and Bioconductor names are taken verbatim.
std::string fold_package_name(Ecosystem eco, std::string_view name);

// ---------------------------------------------------------------------------
// Formatting helpers

// Shortest decimal representation that round-trips the double (to_chars).
std::string format_double(double value);

// Strict non-negative integer parse: digits only, must fit in uint64.
std::optional<std::uint64_t> parse_uint(std::string_view text);

std::optional<double> parse_double(std::string_view text);

}  // namespace depnet

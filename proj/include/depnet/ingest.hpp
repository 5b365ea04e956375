#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "depnet/types.hpp"

namespace depnet {

// Row-level parse failure. Accepted rows + duplicates + rejects always add up
// to the number of data rows seen.
struct RowReject {
    std::size_t line = 0;  // 1-based line in the input (header is line 1)
    std::string reason;

    bool operator==(const RowReject&) const = default;
};

struct MentionParseResult {
    std::vector<MentionRecord> records;  // deduplicated, input order
    std::vector<RowReject> rejects;
    std::size_t total_rows = 0;
    std::size_t duplicate_rows = 0;
};

struct CitationParseResult {
    CitationMap citations;
    std::vector<RowReject> rejects;
    std::size_t total_rows = 0;
    std::size_t duplicate_rows = 0;  // rows that merged into an existing DOI
};

// Lookup structure over the registry snapshot. Name lookups go through
// fold_package_name, so e.g. "NumPy" and "numpy" hit the same PyPI record.
class PackageIndex {
  public:
    // Throws SnapshotError when a conflicting record already exists for the
    // same (ecosystem, folded name) or (ecosystem, package_id). Returns false
    // for an identical duplicate.
    bool insert(PackageRecord record);

    const PackageRecord* find_by_name(Ecosystem eco, std::string_view name) const;
    const PackageRecord* find_by_id(Ecosystem eco, std::string_view package_id) const;

    std::size_t size() const { return records_.size(); }

    // Records ordered by (ecosystem, folded name); the canonical order for
    // serialization and reports.
    std::vector<const PackageRecord*> records_sorted() const;

  private:
    std::vector<PackageRecord> records_;
    std::map<std::pair<Ecosystem, std::string>, std::size_t> by_name_;
    std::map<std::pair<Ecosystem, std::string>, std::size_t> by_id_;
};

struct RegistryLoadResult {
    PackageIndex index;
    // Dependency names that have no record in the snapshot, as
    // (ecosystem, name) pairs, folded, sorted, unique.
    std::vector<std::pair<Ecosystem, std::string>> missing_metadata;
    std::vector<RowReject> rejects;
    std::size_t total_rows = 0;
    std::size_t duplicate_rows = 0;
};

// mentions.csv: header `paper_doi,ecosystem,package_id,package_name`.
// Dedup key is (paper_doi, ecosystem, package_id); first occurrence wins.
MentionParseResult parse_mentions(std::istream& in);

// citations.csv: header `paper_doi,citation_count`. Duplicate DOIs keep the
// maximum count.
CitationParseResult parse_citations(std::istream& in);

// registry.jsonl: one JSON object per line with fields ecosystem, package_id,
// name, latest_version, dependencies[]. Conflicting duplicates are a hard
// SnapshotError; identical duplicates are skipped.
RegistryLoadResult load_registry_snapshot(std::istream& in);

// Serializers for the same three formats (parse . write is the identity).
void write_mentions(std::ostream& out, const std::vector<MentionRecord>& records);
void write_citations(std::ostream& out, const CitationMap& citations);
void write_registry_snapshot(std::ostream& out, const PackageIndex& index);

}  // namespace depnet

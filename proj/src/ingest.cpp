#include "depnet/ingest.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "depnet/csv.hpp"

namespace depnet {

namespace {

std::vector<std::string> read_header(csv::Reader& reader, const std::vector<std::string>& expected,
                                     const char* what) {
    auto row = reader.next_row();
    if (!row || *row != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        throw FormatError(std::string(what) + ": missing or wrong header, expected `" + want + "`");
    }
    return *row;
}

}  // namespace

MentionParseResult parse_mentions(std::istream& in) {
    csv::Reader reader(in);
    read_header(reader, {"paper_doi", "ecosystem", "package_id", "package_name"}, "mentions");

    MentionParseResult result;
    std::set<std::tuple<std::string, Ecosystem, std::string>> seen;
    while (auto row = reader.next_row()) {
        ++result.total_rows;
        if (row->size() != 4) {
            result.rejects.push_back({reader.row_line(), "expected 4 fields, got " +
                                                             std::to_string(row->size())});
            continue;
        }
        const std::string& doi = (*row)[0];
        if (doi.empty()) {
            result.rejects.push_back({reader.row_line(), "empty paper_doi"});
            continue;
        }
        auto eco = parse_ecosystem((*row)[1]);
        if (!eco) {
            result.rejects.push_back({reader.row_line(), "unsupported ecosystem: " + (*row)[1]});
            continue;
        }
        if ((*row)[2].empty()) {
            result.rejects.push_back({reader.row_line(), "empty package_id"});
            continue;
        }
        if (!seen.emplace(doi, *eco, (*row)[2]).second) {
            ++result.duplicate_rows;
            continue;
        }
        result.records.push_back({doi, *eco, (*row)[2], (*row)[3]});
    }
    return result;
}

CitationParseResult parse_citations(std::istream& in) {
    csv::Reader reader(in);
    read_header(reader, {"paper_doi", "citation_count"}, "citations");

    CitationParseResult result;
    while (auto row = reader.next_row()) {
        ++result.total_rows;
        if (row->size() != 2) {
            result.rejects.push_back({reader.row_line(), "expected 2 fields, got " +
                                                             std::to_string(row->size())});
            continue;
        }
        if ((*row)[0].empty()) {
            result.rejects.push_back({reader.row_line(), "empty paper_doi"});
            continue;
        }
        auto count = parse_uint((*row)[1]);
        if (!count) {
            result.rejects.push_back(
                {reader.row_line(), "citation_count must be a non-negative integer: " + (*row)[1]});
            continue;
        }
        if (!result.citations.record((*row)[0], *count)) ++result.duplicate_rows;
    }
    return result;
}

bool PackageIndex::insert(PackageRecord record) {
    auto name_key = std::make_pair(record.ecosystem,
                                   fold_package_name(record.ecosystem, record.name));
    auto id_key = std::make_pair(record.ecosystem, record.package_id);

    auto by_name = by_name_.find(name_key);
    auto by_id = by_id_.find(id_key);
    if (by_name != by_name_.end() || by_id != by_id_.end()) {
        const PackageRecord& existing =
            records_[by_name != by_name_.end() ? by_name->second : by_id->second];
        if (existing == record) return false;
        throw SnapshotError("registry snapshot inconsistent: conflicting records for " +
                            std::string(to_string(record.ecosystem)) + "/" + record.name);
    }
    records_.push_back(std::move(record));
    by_name_.emplace(std::move(name_key), records_.size() - 1);
    by_id_.emplace(std::move(id_key), records_.size() - 1);
    return true;
}

const PackageRecord* PackageIndex::find_by_name(Ecosystem eco, std::string_view name) const {
    auto it = by_name_.find(std::make_pair(eco, fold_package_name(eco, name)));
    if (it == by_name_.end()) return nullptr;
    return &records_[it->second];
}

const PackageRecord* PackageIndex::find_by_id(Ecosystem eco, std::string_view package_id) const {
    auto it = by_id_.find(std::make_pair(eco, std::string(package_id)));
    if (it == by_id_.end()) return nullptr;
    return &records_[it->second];
}

std::vector<const PackageRecord*> PackageIndex::records_sorted() const {
    std::vector<const PackageRecord*> out;
    out.reserve(records_.size());
    for (const auto& [key, idx] : by_name_) out.push_back(&records_[idx]);
    return out;
}

RegistryLoadResult load_registry_snapshot(std::istream& in) {
    RegistryLoadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++result.total_rows;

        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            result.rejects.push_back({line_no, "not a JSON object"});
            continue;
        }
        PackageRecord record;
        try {
            auto eco = parse_ecosystem(doc.at("ecosystem").get<std::string>());
            if (!eco) {
                result.rejects.push_back(
                    {line_no, "unsupported ecosystem: " + doc.at("ecosystem").get<std::string>()});
                continue;
            }
            record.ecosystem = *eco;
            record.package_id = doc.at("package_id").get<std::string>();
            record.name = doc.at("name").get<std::string>();
            record.latest_version = doc.value("latest_version", std::string());
            if (doc.contains("dependencies")) {
                for (const auto& dep : doc.at("dependencies"))
                    record.dependencies.push_back(dep.get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            result.rejects.push_back({line_no, std::string("bad record: ") + e.what()});
            continue;
        }
        if (record.name.empty() || record.package_id.empty()) {
            result.rejects.push_back({line_no, "empty name or package_id"});
            continue;
        }
        bool bad_dep = false;
        std::unordered_set<std::string> dep_seen;
        std::vector<std::string> deps;
        for (const auto& dep : record.dependencies) {
            if (dep.empty()) {
                bad_dep = true;
                break;
            }
            if (dep_seen.insert(fold_package_name(record.ecosystem, dep)).second)
                deps.push_back(dep);
        }
        if (bad_dep) {
            result.rejects.push_back({line_no, "empty dependency name"});
            continue;
        }
        record.dependencies = std::move(deps);
        if (!result.index.insert(std::move(record)))  // throws on conflict
            ++result.duplicate_rows;
    }

    std::set<std::pair<Ecosystem, std::string>> missing;
    for (const PackageRecord* record : result.index.records_sorted()) {
        for (const auto& dep : record->dependencies) {
            if (!result.index.find_by_name(record->ecosystem, dep))
                missing.emplace(record->ecosystem, fold_package_name(record->ecosystem, dep));
        }
    }
    result.missing_metadata.assign(missing.begin(), missing.end());
    return result;
}

void write_mentions(std::ostream& out, const std::vector<MentionRecord>& records) {
    csv::write_row(out, std::vector<std::string>{"paper_doi", "ecosystem", "package_id",
                                                 "package_name"});
    for (const auto& r : records) {
        csv::write_row(out, std::vector<std::string>{r.paper_doi, std::string(to_string(r.ecosystem)),
                                                     r.package_id, r.package_name});
    }
}

void write_citations(std::ostream& out, const CitationMap& citations) {
    csv::write_row(out, std::vector<std::string>{"paper_doi", "citation_count"});
    std::vector<std::pair<std::string, std::uint64_t>> rows(citations.entries().begin(),
                                                            citations.entries().end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [doi, count] : rows)
        csv::write_row(out, std::vector<std::string>{doi, std::to_string(count)});
}

void write_registry_snapshot(std::ostream& out, const PackageIndex& index) {
    for (const PackageRecord* record : index.records_sorted()) {
        nlohmann::ordered_json doc;
        doc["ecosystem"] = to_string(record->ecosystem);
        doc["package_id"] = record->package_id;
        doc["name"] = record->name;
        doc["latest_version"] = record->latest_version;
        doc["dependencies"] = record->dependencies;
        out << doc.dump() << '\n';
    }
}

}  // namespace depnet

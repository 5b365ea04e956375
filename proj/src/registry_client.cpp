#include "depnet/registry_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

namespace depnet {

namespace {

constexpr const char* kNegativeMarker = "depnet_negative_cache";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FetchError("cannot read cache file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Write-to-temp-then-rename so concurrent readers never see a torn file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw FetchError("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

bool dependency_kind_required(const std::string& kind) {
    static const std::unordered_set<std::string> required = {
        "", "runtime", "required", "install", "depends", "imports"};
    return required.count(kind) > 0;
}

void collect_dependencies(const nlohmann::json& list, std::vector<std::string>* out) {
    for (const auto& entry : list) {
        if (entry.is_string()) {
            out->push_back(entry.get<std::string>());
            continue;
        }
        if (!entry.is_object()) continue;
        if (entry.value("optional", false)) continue;
        if (!dependency_kind_required(entry.value("kind", std::string()))) continue;
        if (entry.contains("name")) out->push_back(entry.at("name").get<std::string>());
    }
}

}  // namespace

std::filesystem::path resolve_cache_dir(const std::filesystem::path& configured) {
    if (!configured.empty()) return configured;
    if (const char* env = std::getenv("DEPNET_CACHE_DIR"); env && *env) return env;
    return "cache";
}

PackageRecord parse_registry_payload(Ecosystem eco, const std::string& name,
                                     const std::string& body, const std::string& source_label) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw FormatError("registry payload is not a JSON object (" + source_label + ")");

    PackageRecord record;
    record.ecosystem = eco;
    record.name = doc.value("name", name);
    record.latest_version = doc.value("latest_version", std::string());
    record.package_id = doc.value("package_id", fold_package_name(eco, record.name));

    try {
        if (doc.contains("dependencies")) {
            collect_dependencies(doc.at("dependencies"), &record.dependencies);
        } else if (doc.contains("releases")) {
            // Multiple releases listed: keep the latest one only.
            const nlohmann::json* release = nullptr;
            for (const auto& candidate : doc.at("releases")) {
                if (!candidate.is_object()) continue;
                if (release == nullptr) release = &candidate;
                if (!record.latest_version.empty() &&
                    candidate.value("number", std::string()) == record.latest_version) {
                    release = &candidate;
                    break;
                }
            }
            if (release && release->contains("dependencies"))
                collect_dependencies(release->at("dependencies"), &record.dependencies);
            if (release && record.latest_version.empty())
                record.latest_version = release->value("number", std::string());
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("registry payload malformed (" + source_label + "): " + e.what());
    }

    // Fold-dedupe while keeping the declared order.
    std::unordered_set<std::string> seen;
    std::vector<std::string> deps;
    for (auto& dep : record.dependencies) {
        if (dep.empty())
            throw FormatError("registry payload has an empty dependency name (" + source_label +
                              ")");
        if (seen.insert(fold_package_name(eco, dep)).second) deps.push_back(std::move(dep));
    }
    record.dependencies = std::move(deps);
    return record;
}

struct RegistryClient::KeyLocks {
    std::mutex master;
    std::map<std::string, std::mutex> per_key;

    std::mutex& lock_for(const std::string& key) {
        std::lock_guard<std::mutex> guard(master);
        return per_key[key];
    }
};

RegistryClient::RegistryClient(RegistryClientConfig config, HttpTransport transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      key_locks_(std::make_unique<KeyLocks>()),
      last_request_(std::chrono::steady_clock::now() - config_.politeness_delay) {
    config_.cache_dir = resolve_cache_dir(config_.cache_dir);
    if (!transport_) {
        transport_ = [this](const std::string& path) -> HttpResponse {
            httplib::Client client(config_.base_url);
            client.set_follow_location(true);
            auto result = client.Get(path);
            if (!result)
                throw FetchError("request to " + config_.base_url + path + " failed: " +
                                 httplib::to_string(result.error()));
            return {result->status, result->body};
        };
    }
}

RegistryClient::~RegistryClient() = default;

std::filesystem::path RegistryClient::cache_path(Ecosystem eco,
                                                 const std::string& folded_name) const {
    return config_.cache_dir / std::string(to_string(eco)) / (folded_name + ".json");
}

HttpResponse RegistryClient::request(const std::string& path) {
    // One host, one politeness window.
    {
        std::lock_guard<std::mutex> guard(politeness_mutex_);
        auto earliest = last_request_ + config_.politeness_delay;
        auto now = std::chrono::steady_clock::now();
        if (now < earliest) std::this_thread::sleep_for(earliest - now);
        last_request_ = std::chrono::steady_clock::now();
    }

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.politeness_delay * attempt);
        try {
            HttpResponse response = transport_(path);
            if (response.status >= 500) {
                last_error = "server returned " + std::to_string(response.status);
                continue;
            }
            return response;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    throw FetchError("request " + path + " failed after " + std::to_string(config_.max_retries) +
                     " retries: " + last_error);
}

PackageRecord RegistryClient::fetch_folded(Ecosystem eco, const std::string& folded_name) {
    auto path = cache_path(eco, folded_name);
    std::lock_guard<std::mutex> key_guard(key_locks_->lock_for(path.string()));

    std::string body;
    if (std::filesystem::exists(path)) {
        body = read_file(path);
        nlohmann::json probe = nlohmann::json::parse(body, nullptr, false);
        if (probe.is_object() && probe.value(kNegativeMarker, false))
            throw PackageUnknownError("package unknown: " + std::string(to_string(eco)) + "/" +
                                      folded_name + " (cached)");
    } else {
        HttpResponse response =
            request("/" + std::string(to_string(eco)) + "/" + folded_name);
        if (response.status == 404) {
            nlohmann::json marker;
            marker[kNegativeMarker] = true;
            marker["status"] = 404;
            write_file_atomic(path, marker.dump());
            throw PackageUnknownError("package unknown: " + std::string(to_string(eco)) + "/" +
                                      folded_name);
        }
        if (response.status != 200)
            throw FetchError("unexpected status " + std::to_string(response.status) + " for " +
                             folded_name);
        write_file_atomic(path, response.body);
        body = std::move(response.body);
    }
    return parse_registry_payload(eco, folded_name, body, path.string());
}

PackageRecord RegistryClient::fetch(Ecosystem eco, const std::string& name) {
    return fetch_folded(eco, fold_package_name(eco, name));
}

RegistryClient::CrawlResult RegistryClient::crawl(
    const std::vector<std::pair<Ecosystem, std::string>>& roots) {
    CrawlResult result;
    std::set<std::pair<Ecosystem, std::string>> scheduled;
    std::vector<std::pair<Ecosystem, std::string>> wave;
    for (const auto& [eco, name] : roots) {
        auto key = std::make_pair(eco, fold_package_name(eco, name));
        if (scheduled.insert(key).second) wave.push_back(key);
    }

    std::mutex result_mutex;
    while (!wave.empty()) {
        std::vector<std::pair<Ecosystem, std::string>> next_wave;
        std::size_t cursor = 0;
        std::mutex cursor_mutex;

        auto worker = [&]() {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> guard(cursor_mutex);
                    if (cursor >= wave.size()) return;
                    i = cursor++;
                }
                const auto& [eco, folded] = wave[i];
                try {
                    PackageRecord record = fetch_folded(eco, folded);
                    std::lock_guard<std::mutex> guard(result_mutex);
                    for (const auto& dep : record.dependencies) {
                        auto key = std::make_pair(eco, fold_package_name(eco, dep));
                        if (scheduled.insert(key).second) next_wave.push_back(key);
                    }
                    result.records.emplace(std::make_pair(eco, folded), std::move(record));
                } catch (const PackageUnknownError&) {
                    std::lock_guard<std::mutex> guard(result_mutex);
                    result.unknown.emplace_back(eco, folded);
                } catch (const std::exception&) {
                    std::lock_guard<std::mutex> guard(result_mutex);
                    result.failed.emplace_back(eco, folded);
                }
            }
        };

        auto threads = static_cast<std::size_t>(std::max(1, config_.concurrency));
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(threads, wave.size()); ++t)
            pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
        wave = std::move(next_wave);
    }

    std::sort(result.unknown.begin(), result.unknown.end());
    std::sort(result.failed.begin(), result.failed.end());
    return result;
}

PackageRecord fetch_package_metadata(RegistryClient& client, Ecosystem eco,
                                     const std::string& name) {
    return client.fetch(eco, name);
}

}  // namespace depnet

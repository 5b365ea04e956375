#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "depnet/types.hpp"

namespace depnet {

struct HttpResponse {
    int status = 0;
    std::string body;
};

// GETs a path like "/pypi/numpy" and returns the response; throws FetchError
// on transport failure. Injectable for tests.
using HttpTransport = std::function<HttpResponse(const std::string& path)>;

struct RegistryClientConfig {
    std::string base_url;  // e.g. https://registry.example.org/api/v1
    std::filesystem::path cache_dir;  // empty: $DEPNET_CACHE_DIR, then ./cache
    std::chrono::milliseconds politeness_delay{250};
    int max_retries = 3;
    int concurrency = 4;
};

// Resolution order for the cache directory: explicit config value, then the
// DEPNET_CACHE_DIR environment variable, then ./cache.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& configured);

// Fetches package metadata from a registry API with a persistent cache under
// cache_dir/<ecosystem>/<folded-name>.json. Raw 200 responses are cached
// verbatim; 404s are cached as a negative marker. Requests to the network
// honor the politeness delay and bounded retries.
class RegistryClient {
  public:
    explicit RegistryClient(RegistryClientConfig config, HttpTransport transport = {});
    ~RegistryClient();

    // Throws PackageUnknownError (404), FetchError (transport/retries
    // exhausted), FormatError (bad payload; message names the cache file).
    PackageRecord fetch(Ecosystem eco, const std::string& name);

    // Closure crawl: fetches `roots` and then every reachable dependency,
    // with up to config.concurrency requests in flight. Unknown packages are
    // collected instead of raised. Results keyed by (ecosystem, folded name).
    struct CrawlResult {
        std::map<std::pair<Ecosystem, std::string>, PackageRecord> records;
        std::vector<std::pair<Ecosystem, std::string>> unknown;
        std::vector<std::pair<Ecosystem, std::string>> failed;
    };
    CrawlResult crawl(const std::vector<std::pair<Ecosystem, std::string>>& roots);

    const RegistryClientConfig& config() const { return config_; }

  private:
    struct KeyLocks;
    std::filesystem::path cache_path(Ecosystem eco, const std::string& folded_name) const;
    HttpResponse request(const std::string& path);
    PackageRecord fetch_folded(Ecosystem eco, const std::string& folded_name);

    RegistryClientConfig config_;
    HttpTransport transport_;
    std::unique_ptr<KeyLocks> key_locks_;
    std::mutex politeness_mutex_;
    std::chrono::steady_clock::time_point last_request_;
};

// Parses a registry API payload into a PackageRecord, keeping only required
// (install-time/runtime) dependencies of the latest release.
PackageRecord parse_registry_payload(Ecosystem eco, const std::string& name,
                                     const std::string& body, const std::string& source_label);

PackageRecord fetch_package_metadata(RegistryClient& client, Ecosystem eco,
                                     const std::string& name);

}  // namespace depnet

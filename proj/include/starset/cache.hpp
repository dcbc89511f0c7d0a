#pragma once

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "starset/errors.hpp"
#include "starset/numtheory.hpp"
#include "starset/version.hpp"

namespace starset {

// Append-only JSONL result store.  Each line wraps a payload with its key, a
// content fingerprint, the library version, and a timestamp.  The timestamp
// lives in the wrapper only: payloads stay byte-reproducible, and a cached
// record can be compared against a fresh recomputation.
class result_cache {
 public:
  explicit result_cache(std::string path) : path_(std::move(path)) { load(); }

  std::optional<nlohmann::json> lookup(const std::string& key) const {
    auto it = records_.find(key);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  // Returns true when a new record was appended, false when an identical
  // payload was already cached.  A different payload under the same key is a
  // determinism failure and raises.
  bool store(const std::string& key, const nlohmann::json& payload) {
    auto it = records_.find(key);
    if (it != records_.end()) {
      if (it->second != payload)
        fail(errc::assertion_failed, "cache conflict: key '" + key + "' recomputed differently");
      return false;
    }
    nlohmann::json line;
    line["key"] = key;
    line["fp"] = fingerprint(payload);
    line["version"] = version_string;
    line["time"] = now_iso8601();
    line["payload"] = payload;
    std::ofstream out(path_, std::ios::app);
    require(out.good(), errc::config_invalid, "cannot open cache file for append: " + path_);
    out << line.dump() << "\n";
    records_.emplace(key, payload);
    return true;
  }

  std::size_t size() const { return records_.size(); }
  const std::string& path() const { return path_; }

  static std::string fingerprint(const nlohmann::json& payload) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(payload.dump()));
    return buf;
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in.good()) return;  // no cache yet
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
      require(!rec.is_discarded() && rec.contains("key") && rec.contains("payload") &&
                  rec.contains("fp"),
              errc::config_invalid,
              "cache line " + std::to_string(lineno) + " is not a valid record");
      std::string key = rec["key"].get<std::string>();
      nlohmann::json payload = rec["payload"];
      check(fingerprint(payload) == rec["fp"].get<std::string>(),
            "cache line " + std::to_string(lineno) + " fingerprint mismatch");
      auto it = records_.find(key);
      if (it != records_.end()) {
        check(it->second == payload,
              "cache holds conflicting payloads for key '" + key + "'");
        continue;
      }
      records_.emplace(std::move(key), std::move(payload));
    }
  }

  static std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
  }

  std::string path_;
  std::map<std::string, nlohmann::json> records_;
};

}  // namespace starset

#ifndef DIOPH_CACHE_HPP
#define DIOPH_CACHE_HPP

// On-disk cache of partial-quotient expansions, one JSON file per constant.
// Single writer, last write wins; concurrent writers may clobber each other.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dioph/contfrac.hpp"
#include "dioph/errors.hpp"

namespace dioph {

inline constexpr const char* cache_dir_env = "DIOPHANTINE_CACHE_DIR";

inline std::filesystem::path cache_directory() {
  if (const char* dir = std::getenv(cache_dir_env); dir && *dir) return dir;
  return ".diophantine-cache";
}

struct CacheEntry {
  std::string constant_id;
  int precision_digits = 0;
  std::size_t term_count = 0;
  std::vector<BigInt> terms;
  std::uint64_t checksum = 0;
};

/// FNV-1a over "id|digits|a0,a1,...".
inline std::uint64_t cache_checksum(const std::string& id, int digits, const std::vector<BigInt>& terms) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  feed(id);
  feed("|" + std::to_string(digits) + "|");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) feed(",");
    feed(terms[i].get_str());
  }
  return h;
}

inline CacheEntry make_cache_entry(const PartialQuotients& pq) {
  CacheEntry e{pq.constant_id, pq.source_precision, pq.size(), pq.terms, 0};
  e.checksum = cache_checksum(e.constant_id, e.precision_digits, e.terms);
  return e;
}

inline std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& id) {
  if (id.empty() || id.find_first_of("/\\.") != std::string::npos) {
    throw DomainError("cannot cache constant id '" + id + "'");
  }
  return dir / (id + ".json");
}

inline void write_cache(const PartialQuotients& pq, const std::filesystem::path& dir = cache_directory()) {
  const CacheEntry e = make_cache_entry(pq);
  nlohmann::json j;
  j["constant_id"] = e.constant_id;
  j["precision_digits"] = e.precision_digits;
  j["term_count"] = e.term_count;
  auto& terms = j["terms"] = nlohmann::json::array();
  for (const auto& t : e.terms) terms.push_back(t.get_str());
  j["checksum"] = e.checksum;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create cache directory '" + dir.string() + "': " + ec.message());
  const auto path = cache_path(dir, e.constant_id);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write cache file '" + tmp + "'");
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot replace cache file '" + path.string() + "': " + ec.message());
}

struct CacheLookup {
  std::optional<PartialQuotients> hit;
  std::string reason;  // why there is no hit
};

/// Entries below the requested precision or term count, or with a bad
/// checksum, are ignored.
inline CacheLookup read_cache(const std::string& id, int min_digits, std::size_t min_terms,
                              const std::filesystem::path& dir = cache_directory()) {
  const auto path = cache_path(dir, id);
  std::ifstream in(path);
  if (!in) return {std::nullopt, "no cache entry for " + id};
  CacheEntry e;
  try {
    const auto j = nlohmann::json::parse(in);
    e.constant_id = j.at("constant_id").get<std::string>();
    e.precision_digits = j.at("precision_digits").get<int>();
    e.term_count = j.at("term_count").get<std::size_t>();
    e.checksum = j.at("checksum").get<std::uint64_t>();
    for (const auto& t : j.at("terms")) {
      BigInt v;
      if (v.set_str(t.get<std::string>(), 10) != 0) return {std::nullopt, "corrupt term in " + path.string()};
      e.terms.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& ex) {
    return {std::nullopt, "unreadable cache file " + path.string() + ": " + ex.what()};
  }
  if (e.constant_id != id || e.terms.size() != e.term_count ||
      cache_checksum(e.constant_id, e.precision_digits, e.terms) != e.checksum) {
    return {std::nullopt, "checksum mismatch in " + path.string()};
  }
  if (e.precision_digits < min_digits) {
    return {std::nullopt, "cached entry has " + std::to_string(e.precision_digits) + " digits, " +
                              std::to_string(min_digits) + " requested"};
  }
  if (e.term_count < min_terms) {
    return {std::nullopt, "cached entry has " + std::to_string(e.term_count) + " terms, " +
                              std::to_string(min_terms) + " requested"};
  }
  PartialQuotients pq;
  pq.constant_id = id;
  pq.source_precision = e.precision_digits;
  pq.terms.assign(e.terms.begin(), e.terms.begin() + static_cast<std::ptrdiff_t>(min_terms));
  pq.status = ExpansionStatus::complete;
  return {std::move(pq), {}};
}

}  // namespace dioph

#endif  // DIOPH_CACHE_HPP

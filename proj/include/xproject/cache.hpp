#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "xproject/translator.hpp"

namespace xproject::mt {

// Full cache key. Two backends never share entries even for identical text,
// so swapping the remote service for a mock cannot replay stale output.
struct CacheKey {
  std::string backend_id;
  std::string src;
  std::string tgt;
  std::string text;
};

// Returns the 64-bit hash stored alongside each record. Exposed for tests.
std::uint64_t cache_key_hash(const CacheKey& key);

// Persistent translation memory backed by an append-only JSONL log. Each
// line is one record {h, src, tgt, in, out}; `h` is the hex-encoded key hash
// (which also covers the backend id). Appending keeps a crash mid-run from
// corrupting anything already written; on open the log is compacted so the
// last write for each key wins and partial trailing lines are discarded.
//
// Lookups and stores are serialized internally; one instance may be shared
// across the threads of translate_batch.
class TranslationCache {
 public:
  explicit TranslationCache(std::filesystem::path path);

  std::optional<std::string> lookup(const CacheKey& key);
  void store(const CacheKey& key, const std::string& output);

  std::size_t size() const;

  // Lines discarded while opening the log (truncated writes, stray bytes).
  // Callers surface this as a warning; a damaged cache is never fatal.
  std::size_t dropped_lines() const { return dropped_lines_; }

  const std::filesystem::path& path() const { return path_; }

 private:
  using MapKey = std::tuple<std::uint64_t, std::string, std::string, std::string>;

  void load_and_compact();
  static std::string render_record(std::uint64_t hash, const std::string& src,
                                   const std::string& tgt,
                                   const std::string& input,
                                   const std::string& output);

  std::filesystem::path path_;
  std::map<MapKey, std::string> entries_;
  std::size_t dropped_lines_ = 0;
  std::ofstream appender_;
  mutable std::mutex mutex_;
};

// Decorator that consults the cache before delegating to the wrapped
// backend. Reports the inner backend's id so cached and fresh results are
// indistinguishable apart from the `cached` flag.
class CachingBackend : public TranslationBackend {
 public:
  CachingBackend(std::shared_ptr<TranslationBackend> inner,
                 std::shared_ptr<TranslationCache> cache);

  std::string id() const override { return inner_->id(); }

 protected:
  TranslationResult do_translate(const TranslationRequest& request) override;

 private:
  std::shared_ptr<TranslationBackend> inner_;
  std::shared_ptr<TranslationCache> cache_;
};

}  // namespace xproject::mt

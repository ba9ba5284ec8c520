#include "xproject/cache.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "xproject/errors.hpp"
#include "xproject/rng.hpp"

namespace xproject::mt {

namespace {

// Fixed-width hex keeps the log greppable and avoids 64-bit JSON number
// pitfalls in other tooling.
std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::optional<std::uint64_t> from_hex(const std::string& text) {
  if (text.size() != 16) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : text) {
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else return std::nullopt;
    value = (value << 4) | static_cast<std::uint64_t>(digit);
  }
  return value;
}

}  // namespace

std::uint64_t cache_key_hash(const CacheKey& key) {
  // '\x1f' separators keep ("ab","c") and ("a","bc") from colliding.
  std::string material;
  material.reserve(key.backend_id.size() + key.src.size() + key.tgt.size() +
                   key.text.size() + 3);
  material += key.backend_id;
  material += '\x1f';
  material += key.src;
  material += '\x1f';
  material += key.tgt;
  material += '\x1f';
  material += key.text;
  return rng::fnv1a64(material);
}

std::string TranslationCache::render_record(std::uint64_t hash,
                                            const std::string& src,
                                            const std::string& tgt,
                                            const std::string& input,
                                            const std::string& output) {
  nlohmann::json record{{"h", to_hex(hash)},
                        {"src", src},
                        {"tgt", tgt},
                        {"in", input},
                        {"out", output}};
  return record.dump();
}

TranslationCache::TranslationCache(std::filesystem::path path)
    : path_(std::move(path)) {
  if (path_.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  load_and_compact();
  appender_.open(path_, std::ios::binary | std::ios::app);
  if (!appender_) {
    throw DataError("cannot open translation cache for writing: " +
                    path_.string());
  }
}

void TranslationCache::load_and_compact() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // first run, nothing to load

  std::size_t duplicates = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (!record.is_object() || !record.contains("h") ||
        !record.contains("src") || !record.contains("tgt") ||
        !record.contains("in") || !record.contains("out") ||
        !record["h"].is_string() || !record["src"].is_string() ||
        !record["tgt"].is_string() || !record["in"].is_string() ||
        !record["out"].is_string()) {
      ++dropped_lines_;
      continue;
    }
    auto hash = from_hex(record["h"].get<std::string>());
    if (!hash) {
      ++dropped_lines_;
      continue;
    }
    MapKey key{*hash, record["src"].get<std::string>(),
               record["tgt"].get<std::string>(),
               record["in"].get<std::string>()};
    if (entries_.count(key)) ++duplicates;
    entries_[key] = record["out"].get<std::string>();
  }
  in.close();

  if (duplicates == 0 && dropped_lines_ == 0) return;

  // Rewrite through a temp file so a crash here leaves the old log intact.
  std::filesystem::path tmp = path_;
  tmp += ".compact";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot compact translation cache: " + tmp.string());
    }
    for (const auto& [key, output] : entries_) {
      out << render_record(std::get<0>(key), std::get<1>(key),
                           std::get<2>(key), std::get<3>(key), output)
          << '\n';
    }
  }
  std::filesystem::rename(tmp, path_);
}

std::optional<std::string> TranslationCache::lookup(const CacheKey& key) {
  MapKey map_key{cache_key_hash(key), key.src, key.tgt, key.text};
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(map_key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::store(const CacheKey& key, const std::string& output) {
  const std::uint64_t hash = cache_key_hash(key);
  std::lock_guard<std::mutex> lock(mutex_);
  entries_[MapKey{hash, key.src, key.tgt, key.text}] = output;
  appender_ << render_record(hash, key.src, key.tgt, key.text, output) << '\n';
  appender_.flush();
}

std::size_t TranslationCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

CachingBackend::CachingBackend(std::shared_ptr<TranslationBackend> inner,
                               std::shared_ptr<TranslationCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
  if (!inner_ || !cache_) {
    throw UsageError("caching backend needs both an inner backend and a cache");
  }
}

TranslationResult CachingBackend::do_translate(
    const TranslationRequest& request) {
  CacheKey key{inner_->id(), request.src, request.tgt, request.text};
  if (auto hit = cache_->lookup(key)) {
    return {*hit, inner_->id(), true};
  }
  TranslationResult result = inner_->translate(request);
  cache_->store(key, result.text);
  return result;
}

}  // namespace xproject::mt

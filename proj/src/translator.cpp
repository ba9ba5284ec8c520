#include "xproject/translator.hpp"

#include <atomic>
#include <thread>

#include "xproject/util.hpp"

namespace xproject::mt {

TranslationResult TranslationBackend::translate(
    const TranslationRequest& request) {
  if (util::normalize_spaces(request.text).empty()) {
    throw DataError("translation request with empty text");
  }
  if (request.src == request.tgt) {
    throw DataError("source and target locale are both '" + request.src + "'");
  }
  TranslationResult result = do_translate(request);
  if (result.text.empty()) {
    throw EmptyTranslationError("backend '" + id() +
                                "' returned an empty translation for: " +
                                request.text);
  }
  return result;
}

TranslationResult translate(TranslationBackend& backend,
                            const TranslationRequest& request) {
  return backend.translate(request);
}

std::vector<BatchItem> translate_batch(
    TranslationBackend& backend, const std::vector<TranslationRequest>& requests,
    std::size_t max_in_flight) {
  if (max_in_flight < 1) {
    throw UsageError("max_in_flight must be at least 1");
  }
  std::vector<BatchItem> items(requests.size());
  if (requests.empty()) return items;

  auto run_one = [&](std::size_t i) {
    try {
      items[i].result = backend.translate(requests[i]);
    } catch (const EmptyTranslationError& e) {
      items[i].error = e.what();
      items[i].empty_translation = true;
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  };

  const std::size_t workers = std::min(max_in_flight, requests.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < requests.size(); ++i) run_one(i);
    return items;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= requests.size()) return;
        run_one(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return items;
}

}  // namespace xproject::mt

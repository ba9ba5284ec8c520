#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xproject/errors.hpp"

namespace xproject::mt {

struct TranslationRequest {
  std::string text;
  std::string src;
  std::string tgt;
};

struct TranslationResult {
  std::string text;
  std::string backend_id;
  bool cached = false;
};

// Uniform contract every translation source implements. Implementations
// must be safely callable from multiple threads.
class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;

  virtual std::string id() const = 0;

  // Validates the request (non-empty text, src != tgt), delegates, and
  // rejects empty output. Throws DataError / BackendError.
  TranslationResult translate(const TranslationRequest& request);

 protected:
  virtual TranslationResult do_translate(const TranslationRequest& request) = 0;
};

TranslationResult translate(TranslationBackend& backend,
                            const TranslationRequest& request);

// Per-request outcome of a batch; one failure never aborts the batch.
struct BatchItem {
  std::optional<TranslationResult> result;
  std::string error;
  // True when the failure was specifically an empty translation, which
  // callers may treat differently from transport or backend trouble.
  bool empty_translation = false;

  bool ok() const { return result.has_value(); }
};

// Runs the requests with at most `max_in_flight` outstanding at any
// instant. Results are positionally aligned with the requests.
std::vector<BatchItem> translate_batch(
    TranslationBackend& backend, const std::vector<TranslationRequest>& requests,
    std::size_t max_in_flight);

}  // namespace xproject::mt

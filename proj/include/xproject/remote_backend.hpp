#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "xproject/translator.hpp"

namespace xproject::mt {

struct RemoteConfig {
  // Base URL of the translation service, e.g. "http://mt.internal:8080" or
  // "http://mt.internal:8080/api". The client posts to <base>/translate.
  std::string url;
  // Optional bearer token; sent as "Authorization: Bearer <token>" when set.
  std::string token;
  // Read/write timeout per request. Connect timeout is fixed at 10s.
  int timeout_seconds = 30;
};

// Reads XPROJECT_MT_URL (required) and XPROJECT_MT_TOKEN (optional).
RemoteConfig config_from_env();

// JSON-over-HTTP client for the translation service.
//
// Wire contract: POST <base>/translate with {"text","src","tgt"}, response
// {"text": "..."}. Transport failures and 5xx responses are retried after
// 0.5s, 1s and 2s (four attempts total); 4xx responses fail immediately with
// a body excerpt, since resending the same bad request cannot help.
//
// A fresh connection is opened per request, so one instance can serve all
// translate_batch workers concurrently.
class RemoteBackend : public TranslationBackend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  // `sleeper` exists so tests can run the retry schedule without waiting;
  // the default sleeps for real.
  explicit RemoteBackend(RemoteConfig config, Sleeper sleeper = {});

  std::string id() const override { return id_; }

  static const std::vector<std::chrono::milliseconds>& retry_delays();

 protected:
  TranslationResult do_translate(const TranslationRequest& request) override;

 private:
  RemoteConfig config_;
  std::string host_;
  int port_ = 80;
  std::string path_prefix_;
  std::string id_;
  Sleeper sleeper_;
};

}  // namespace xproject::mt

#include "xproject/remote_backend.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "xproject/errors.hpp"

namespace xproject::mt {

namespace {

std::string body_excerpt(const std::string& body) {
  constexpr std::size_t kLimit = 200;
  if (body.empty()) return "(empty body)";
  if (body.size() <= kLimit) return body;
  return body.substr(0, kLimit) + "...";
}

}  // namespace

RemoteConfig config_from_env() {
  RemoteConfig config;
  if (const char* url = std::getenv("XPROJECT_MT_URL")) config.url = url;
  if (config.url.empty()) {
    throw UsageError(
        "no translation service configured: set XPROJECT_MT_URL or pass a URL");
  }
  if (const char* token = std::getenv("XPROJECT_MT_TOKEN")) {
    config.token = token;
  }
  return config;
}

const std::vector<std::chrono::milliseconds>& RemoteBackend::retry_delays() {
  static const std::vector<std::chrono::milliseconds> delays{
      std::chrono::milliseconds(500), std::chrono::milliseconds(1000),
      std::chrono::milliseconds(2000)};
  return delays;
}

RemoteBackend::RemoteBackend(RemoteConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  }

  const std::string& url = config_.url;
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw UsageError("translation service URL must start with http://: " + url);
  }
  std::string rest = url.substr(scheme.size());
  const std::size_t slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  if (slash != std::string::npos) {
    path_prefix_ = rest.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
  const std::size_t colon = authority.find(':');
  if (colon != std::string::npos) {
    host_ = authority.substr(0, colon);
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      port_ = 0;
    }
    if (port_ <= 0 || port_ > 65535) {
      throw UsageError("bad port in translation service URL: " + url);
    }
  } else {
    host_ = authority;
    port_ = 80;
  }
  if (host_.empty()) {
    throw UsageError("no host in translation service URL: " + url);
  }
  id_ = "remote(" + host_ + ":" + std::to_string(port_) + ")";
}

TranslationResult RemoteBackend::do_translate(
    const TranslationRequest& request) {
  const std::string payload = nlohmann::json{{"text", request.text},
                                             {"src", request.src},
                                             {"tgt", request.tgt}}
                                  .dump();
  httplib::Headers headers;
  if (!config_.token.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.token);
  }
  const std::string path = path_prefix_ + "/translate";
  const auto& delays = retry_delays();

  std::string last_error;
  for (std::size_t attempt = 0; attempt <= delays.size(); ++attempt) {
    if (attempt > 0) sleeper_(delays[attempt - 1]);

    httplib::Client client(host_, port_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
      if (!parsed.is_object() || !parsed.contains("text") ||
          !parsed["text"].is_string()) {
        throw BackendError("translation service returned unexpected JSON: " +
                           body_excerpt(res->body));
      }
      return {parsed["text"].get<std::string>(), id(), false};
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + ": " +
                   body_excerpt(res->body);
      continue;
    }
    // 4xx: the request itself is bad; retrying the same payload is pointless.
    throw BackendError("translation service rejected request (HTTP " +
                       std::to_string(res->status) +
                       "): " + body_excerpt(res->body));
  }
  throw BackendError("translation service unreachable after " +
                     std::to_string(delays.size() + 1) +
                     " attempts; last error: " + last_error);
}

}  // namespace xproject::mt

// Copyright 2026 The Epiaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "epiaudit/acquisition/http.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"

namespace epiaudit {

// Vendor-neutral text completion. Implementations throw
// Error(kClientError) when no usable reply could be obtained.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  // Identifies the model in reports.
  virtual std::string model_name() const = 0;
};

struct LlmEndpoint {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  std::string api_key_env = "EPIAUDIT_API_KEY";
  int max_attempts = 3;
  std::chrono::milliseconds backoff_initial{1000};
  fs::path audit_log;  // JSONL; empty disables logging
};

// Chat-completions style client. The API key is read from the environment
// at construction and never written anywhere; the audit log records
// request and response bodies with the key replaced.
class HttpLlmClient final : public LlmClient {
 public:
  HttpLlmClient(LlmEndpoint endpoint, std::shared_ptr<HttpTransport> transport)
      : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
    if (const char* key = std::getenv(endpoint_.api_key_env.c_str()); key && *key) api_key_ = key;
  }

  std::string model_name() const override { return endpoint_.model; }

  std::string complete(const std::string& prompt) override {
    Json request;
    request["model"] = endpoint_.model;
    request["temperature"] = 0;
    request["messages"] = Json::array({Json{{"role", "user"}, {"content", prompt}}});
    const std::string body = request.dump();

    HttpHeaders headers{{"Accept", "application/json"}};
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto delay = endpoint_.backoff_initial;
    std::string last_error;
    for (int attempt = 1; attempt <= endpoint_.max_attempts; ++attempt) {
      const HttpResponse resp =
          transport_->post(endpoint_.base_url + endpoint_.path, headers, body, "application/json");
      log_exchange(body, resp);
      if (resp.status == 200) {
        try {
          const Json j = Json::parse(resp.body);
          return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const Json::exception& e) {
          throw Error(ErrorCode::kClientError, std::string("unexpected completion payload: ") + e.what());
        }
      }
      last_error = resp.status == 0 ? resp.error : "HTTP " + std::to_string(resp.status);
      const bool retryable = resp.status == 0 || resp.status == 429 || resp.status >= 500;
      if (!retryable) break;
      if (attempt < endpoint_.max_attempts) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
    }
    throw Error(ErrorCode::kClientError, "completion request failed: " + last_error);
  }

 private:
  std::string redact(std::string s) const {
    if (api_key_.empty()) return s;
    for (std::size_t pos = s.find(api_key_); pos != std::string::npos; pos = s.find(api_key_, pos)) {
      s.replace(pos, api_key_.size(), "[REDACTED]");
    }
    return s;
  }

  void log_exchange(const std::string& request_body, const HttpResponse& resp) {
    if (endpoint_.audit_log.empty()) return;
    Json entry;
    entry["time"] = utc_timestamp_now();
    entry["url"] = endpoint_.base_url + endpoint_.path;
    entry["authorization"] = api_key_.empty() ? "none" : "Bearer [REDACTED]";
    entry["request"] = redact(request_body);
    entry["status"] = resp.status;
    entry["response"] = redact(resp.body);
    if (!resp.error.empty()) entry["error"] = resp.error;
    std::lock_guard lock(log_mutex_);
    if (endpoint_.audit_log.has_parent_path()) fs::create_directories(endpoint_.audit_log.parent_path());
    std::ofstream out(endpoint_.audit_log, std::ios::app);
    out << entry.dump() << "\n";
  }

  LlmEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  std::string api_key_;
  std::mutex log_mutex_;
};

// Answers from a caller-supplied function; counts calls. Used for offline
// runs and tests.
class ScriptedClient final : public LlmClient {
 public:
  using Script = std::function<std::string(const std::string& prompt)>;

  explicit ScriptedClient(Script script, std::string name = "scripted")
      : script_(std::move(script)), name_(std::move(name)) {}

  std::string complete(const std::string& prompt) override {
    {
      std::lock_guard lock(mutex_);
      ++calls_;
    }
    return script_(prompt);
  }

  std::string model_name() const override { return name_; }

  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

 private:
  Script script_;
  std::string name_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

}  // namespace epiaudit

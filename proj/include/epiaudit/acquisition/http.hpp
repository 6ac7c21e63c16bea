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
#include <map>
#include <memory>
#include <string>

#include <httplib.h>

// <resolv.h> (pulled in by httplib) defines _res as a macro, which collides
// with parameter names inside Eigen.
#ifdef _res
#undef _res
#endif

#include "epiaudit/core/url.hpp"

namespace epiaudit {

struct HttpResponse {
  // 0 when the transport failed before a status line was received.
  int status = 0;
  std::string body;
  std::string error;
};

using HttpHeaders = std::multimap<std::string, std::string>;

// Seam between the fetch/classify logic and the wire. Tests substitute
// in-process fakes; production uses HttplibTransport.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url, const HttpHeaders& headers) = 0;
  virtual HttpResponse post(const std::string& url, const HttpHeaders& headers,
                            const std::string& body, const std::string& content_type) = 0;
};

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(30))
      : timeout_(timeout) {}

  HttpResponse get(const std::string& url, const HttpHeaders& headers) override {
    return send(url, [&](httplib::Client& cli, const std::string& path) {
      return cli.Get(path, to_httplib(headers));
    });
  }

  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                    const std::string& content_type) override {
    return send(url, [&](httplib::Client& cli, const std::string& path) {
      return cli.Post(path, to_httplib(headers), body, content_type);
    });
  }

 private:
  static httplib::Headers to_httplib(const HttpHeaders& headers) {
    return httplib::Headers(headers.begin(), headers.end());
  }

  template <class Send>
  HttpResponse send(const std::string& url, Send&& do_send) {
    const auto parts = parse_url(url);
    if (!parts) return {0, {}, "unsupported URL: " + url};
    std::string origin = parts->scheme + "://" + parts->host;
    if (parts->port != 0) origin += ":" + std::to_string(parts->port);
    httplib::Client cli(origin);
    cli.set_connection_timeout(timeout_.count());
    cli.set_read_timeout(timeout_.count());
    cli.set_follow_location(true);
    cli.set_url_encode(false);
    auto result = do_send(cli, parts->path);
    if (!result) return {0, {}, httplib::to_string(result.error())};
    return {result->status, result->body, {}};
  }

  std::chrono::seconds timeout_;
};

}  // namespace epiaudit

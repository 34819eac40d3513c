// Copyright 2026 The whatif Authors.
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

#include <string>
#include <utility>

#include "strings.h"
#include "httplib.h"
#include "whatif/service.h"
#include "whatif/status.h"

namespace whatif {

struct HttpServer::Impl {
  Service& service;
  ServeOptions options;
  httplib::Server server;
  bool bound = false;
};

HttpServer::HttpServer(Service& service, ServeOptions options)
    : impl_(new Impl{service, std::move(options), {}, false}) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpResponse r = impl_->service.Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  httplib::Server& s = impl_->server;
  const std::string api = R"(/api/.*)";
  s.Get(api, handler);
  s.Post(api, handler);
  s.Put(api, handler);
  s.Patch(api, handler);
  s.Delete(api, handler);
  if (!impl_->options.static_dir.empty()) {
    s.set_mount_point("/", impl_->options.static_dir);
  }
}

HttpServer::~HttpServer() { Stop(); }

absl::StatusOr<int> HttpServer::Bind() {
  httplib::Server& s = impl_->server;
  int port = impl_->options.port;
  if (port == 0) {
    port = s.bind_to_any_port(impl_->options.host);
    if (port < 0) port = 0;
  } else if (!s.bind_to_port(impl_->options.host, port)) {
    port = 0;
  }
  if (port == 0) {
    return MakeError(ErrorCode::kInvalidArgument,
                     strings::Cat("cannot listen on ", impl_->options.host, ":",
                                  impl_->options.port));
  }
  impl_->bound = true;
  return port;
}

void HttpServer::Listen() {
  if (impl_->bound) impl_->server.listen_after_bind();
}

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace whatif

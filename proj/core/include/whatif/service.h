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

// Stateful request/response front end over one cube and one scenario store.
// Transport-independent: Handle() takes a method, a path and a JSON body.
// ServeHttp() binds it to a socket.

#ifndef WHATIF_SERVICE_H_
#define WHATIF_SERVICE_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "whatif/cube.h"
#include "whatif/scenario_store.h"

namespace whatif {

struct HttpResponse {
  int status = 200;
  std::string body;  // always JSON
};

// Maps a library error to {"error", "message", "detail"} and an HTTP status.
HttpResponse ErrorResponse(const absl::Status& status);

class Service {
 public:
  Service();

  // Safe to call from many threads. Reads run concurrently against an
  // immutable snapshot; mutations are serialized and publish a new snapshot
  // only when they succeed.
  HttpResponse Handle(std::string_view method, std::string_view path,
                      std::string_view body);

  std::uint64_t revision() const;

 private:
  struct State {
    std::shared_ptr<const DataCube> cube;
    std::shared_ptr<const ScenarioStore> store;
    std::uint64_t revision = 0;
  };
  class Request;

  std::shared_ptr<const State> Snapshot() const;
  void Publish(std::shared_ptr<const State> next);

  HttpResponse Route(std::string_view method, std::string_view path,
                     std::string_view body);

  mutable std::shared_mutex state_mu_;
  std::shared_ptr<const State> state_;
  std::mutex write_mu_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;          // 0 picks a free port
  std::string static_dir;   // optional directory served at "/"
};

// Socket binding for a Service.
class HttpServer {
 public:
  HttpServer(Service& service, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket. Returns the bound port.
  absl::StatusOr<int> Bind();
  // Serves until Stop(). Call Bind() first.
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace whatif

#endif  // WHATIF_SERVICE_H_

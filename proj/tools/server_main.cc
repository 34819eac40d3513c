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

// HTTP front end for the service. Listen address and static asset directory
// come from flags or WHATIF_HOST, WHATIF_PORT and WHATIF_STATIC_DIR.

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "whatif/service.h"

namespace {

whatif::HttpServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  whatif::ServeOptions options;
  CLI::App app{"whatif_server: HTTP/JSON service"};
  app.add_option("--host", options.host, "Listen address")
      ->envname("WHATIF_HOST")
      ->capture_default_str();
  app.add_option("--port", options.port, "Listen port, 0 for any")
      ->envname("WHATIF_PORT")
      ->capture_default_str();
  app.add_option("--static-dir", options.static_dir,
                 "Directory served at / for the web UI")
      ->envname("WHATIF_STATIC_DIR");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  whatif::Service service;
  whatif::HttpServer server(service, options);
  auto port = server.Bind();
  if (!port.ok()) {
    std::cerr << "error: " << port.status().message() << "\n";
    return 3;
  }
  g_server = &server;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cout << "listening on " << options.host << ":" << *port << std::endl;
  server.Listen();
  return 0;
}

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iostream>

#include "rezoner/http.hpp"
#include "rezoner/service.hpp"

namespace {
httplib::Server* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario service: districts, solve jobs and outcome reports over HTTP", "rezoner-service"};
  rezoner::service::ServiceOptions options;
  std::string host = "127.0.0.1";
  int port = 8080;
  app.add_option("--data-dir", options.data_dir, "Directory holding districts/ and jobs/")->required();
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str()->check(CLI::Range(0, 65535));
  app.add_option("--max-queue", options.max_queue, "Queued jobs beyond this are refused")->capture_default_str();
  app.add_option("--speed", options.speed_kmh, "km/h for districts without a travel matrix")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    rezoner::service::ScenarioService service(options);
    httplib::Server server;
    rezoner::service::mount(server, service);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    if (port == 0) {
      port = server.bind_to_any_port(host);
    } else if (!server.bind_to_port(host, port)) {
      std::cerr << "cannot bind " << host << ":" << port << "\n";
      return 1;
    }
    std::cerr << "serving " << service.district_count() << " district(s) on http://" << host << ":" << port << "\n";
    server.listen_after_bind();
    service.stop();
  } catch (const std::exception& e) {
    std::cerr << "rezoner-service: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

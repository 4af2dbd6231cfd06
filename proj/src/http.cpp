#include "rezoner/http.hpp"

#include <httplib.h>

#include "rezoner/service.hpp"

namespace rezoner::service {

void mount(httplib::Server& server, ScenarioService& service) {
  const auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto r = service.handle({req.method, req.path, req.body});
    res.status = r.status;
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
    if (r.status != 204) res.set_content(r.body.dump(), "application/json");
  };
  server.Get(".*", route);
  server.Post(".*", route);
  server.Options(".*", route);
  server.Put(".*", route);
  server.Delete(".*", route);
}

}  // namespace rezoner::service

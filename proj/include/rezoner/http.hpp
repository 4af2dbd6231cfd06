#pragma once

namespace httplib {
class Server;
}

namespace rezoner::service {

class ScenarioService;

/// Routes every request on `server` through `service.handle()` as JSON.
void mount(httplib::Server& server, ScenarioService& service);

}  // namespace rezoner::service

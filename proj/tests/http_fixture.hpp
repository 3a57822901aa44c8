#pragma once

#include <memory>
#include <thread>

#include "httplib.h"
#include "satbot/http_api.hpp"
#include "test_support.hpp"

namespace satbot::testing {

/// Trial service behind a real HTTP server on an ephemeral localhost port.
struct LiveServer {
    Harness harness;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit LiveServer(ServiceConfig config = test_config()) : harness(std::move(config)) {
        install_routes(server, *harness.service, false);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~LiveServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(30, 0);
        return c;
    }

    static httplib::Headers bearer(const std::string& token) { return {{"Authorization", "Bearer " + token}}; }
};

}  // namespace satbot::testing

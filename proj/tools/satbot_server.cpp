#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "httplib.h"

#include "satbot/error.hpp"
#include "satbot/gateway.hpp"
#include "satbot/http_api.hpp"
#include "satbot/remote_backend.hpp"
#include "satbot/trial_service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Three-arm chat service over HTTP+JSON"};
    std::string config_path;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string script_path;
    bool debug_turns = false;
    app.add_option("--config", config_path, "Service config (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--host", host, "Bind address");
    app.add_option("--port", port, "Bind port");
    app.add_option("--script", script_path, "Scripted backend file; without it LLM_API_BASE/LLM_API_KEY/LLM_MODEL are used")
        ->check(CLI::ExistingFile);
    app.add_flag("--debug-turns", debug_turns, "Log per-turn routing details to stderr");
    CLI11_PARSE(app, argc, argv);

    try {
        auto config = satbot::ServiceConfig::load(config_path);
        config.debug_turns = config.debug_turns || debug_turns;

        std::shared_ptr<satbot::LlmBackend> backend;
        if (!script_path.empty()) {
            backend = satbot::ScriptedBackend::load(script_path);
        } else {
            backend = std::make_shared<satbot::RemoteBackend>(satbot::RemoteBackendConfig::from_env());
        }
        auto clock = std::make_shared<satbot::SystemClock>();
        // The call log would grow without bound in a long-running server.
        auto gateway = std::make_shared<satbot::Gateway>(backend, clock, false);
        satbot::TrialService service(config, gateway, clock);

        httplib::Server server;
        satbot::install_routes(server, service, config.debug_turns);
        std::cerr << "listening on " << host << ':' << port << '\n';
        if (!server.listen(host, port)) {
            std::cerr << "cannot listen on " << host << ':' << port << '\n';
            return 1;
        }
    } catch (const satbot::Error& e) {
        std::cerr << satbot::to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#pragma once

#include <string>

#include "httplib.h"

#include "satbot/error.hpp"
#include "satbot/trial_service.hpp"

namespace satbot {

/// Installs the participant and operator routes on `server`:
///
///   POST /participants                   register, returns id + bearer token
///   POST /participants/{id}/messages     {"text": ...} -> agent messages
///   POST /participants/{id}/restart
///   GET  /participants/{id}/history
///   GET  /admin/export?variant=&from=&to=   operator token, NDJSON body
///
/// Participant routes never expose the variant, FSM state or prompt text.
/// With `log_debug`, per-turn debug records go to stderr instead.
void install_routes(httplib::Server& server, TrialService& service, bool log_debug = false);

/// HTTP status for an error code (401, 404, 409, 400, 503 or 500).
int http_status(ErrorCode code) noexcept;

}  // namespace satbot

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace satbot {

enum class ErrorCode {
    InvalidInput,
    TerminalState,
    InvalidDate,
    OutOfRange,
    PreconditionViolated,
    MalformedJudgeReply,
    GatewayTimeout,
    GatewayRejected,
    ScriptExhausted,
    AlreadyCommitted,
    NotTerminal,
    UnknownSession,
    EmptyCandidateSet,
    KnowledgeBaseInvalid,
    LexiconInvalid,
    AlreadyAssigned,
    UnknownParticipant,
    Unauthorized,
    Busy,
    DegenerateInput,
    InsufficientData,
    ConfigInvalid,
    StorageError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Gateway failures are the only errors a client may retry verbatim.
    bool is_gateway_error() const noexcept {
        return code_ == ErrorCode::GatewayTimeout || code_ == ErrorCode::GatewayRejected ||
               code_ == ErrorCode::ScriptExhausted;
    }

private:
    ErrorCode code_;
};

}  // namespace satbot

#include "satbot/error.hpp"

namespace satbot {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::TerminalState: return "TerminalState";
        case ErrorCode::InvalidDate: return "InvalidDate";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::MalformedJudgeReply: return "MalformedJudgeReply";
        case ErrorCode::GatewayTimeout: return "GatewayTimeout";
        case ErrorCode::GatewayRejected: return "GatewayRejected";
        case ErrorCode::ScriptExhausted: return "ScriptExhausted";
        case ErrorCode::AlreadyCommitted: return "AlreadyCommitted";
        case ErrorCode::NotTerminal: return "NotTerminal";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
        case ErrorCode::KnowledgeBaseInvalid: return "KnowledgeBaseInvalid";
        case ErrorCode::LexiconInvalid: return "LexiconInvalid";
        case ErrorCode::AlreadyAssigned: return "AlreadyAssigned";
        case ErrorCode::UnknownParticipant: return "UnknownParticipant";
        case ErrorCode::Unauthorized: return "Unauthorized";
        case ErrorCode::Busy: return "Busy";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::StorageError: return "StorageError";
    }
    return "Unknown";
}

}  // namespace satbot

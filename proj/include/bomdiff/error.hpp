#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bomdiff {

enum class ErrorCode {
    DuplicateNodeId,
    UnknownEndpoint,
    SelfLoop,
    UnknownNode,
    EmptyNodeId,
    EmptyAttributeKey,
    MalformedDocument,
    NoSeedFound,
    InconsistentMapping,
    InvalidConfig,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::EmptyNodeId: return "EmptyNodeId";
    case ErrorCode::EmptyAttributeKey: return "EmptyAttributeKey";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::NoSeedFound: return "NoSeedFound";
    case ErrorCode::InconsistentMapping: return "InconsistentMapping";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

class BomError : public std::runtime_error {
public:
    BomError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace bomdiff

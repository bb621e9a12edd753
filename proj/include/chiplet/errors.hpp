#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chiplet {

enum class ErrorCode {
    InvalidArgument,
    OverlappingPlacements,
    Disconnected,
    NotRegular,
    TooLargeForExact,
    NoLinkArea,
    LinkInfeasible,
    Saturated,
    MissingBaseline,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this one exception type; the
// code distinguishes input errors from model infeasibility.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace chiplet

#include "chiplet/errors.hpp"

namespace chiplet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OverlappingPlacements: return "OverlappingPlacements";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::NotRegular: return "NotRegular";
        case ErrorCode::TooLargeForExact: return "TooLargeForExact";
        case ErrorCode::NoLinkArea: return "NoLinkArea";
        case ErrorCode::LinkInfeasible: return "LinkInfeasible";
        case ErrorCode::Saturated: return "Saturated";
        case ErrorCode::MissingBaseline: return "MissingBaseline";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace chiplet

#include "isogrow/error.hpp"

namespace isogrow {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::CollinearInput: return "CollinearInput";
        case ErrorCode::OffPlane: return "OffPlane";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::WrongParity: return "WrongParity";
        case ErrorCode::InvalidDomain: return "InvalidDomain";
        case ErrorCode::DegenerateCurve: return "DegenerateCurve";
        case ErrorCode::NonOrthogonal: return "NonOrthogonal";
        case ErrorCode::StarOverflow: return "StarOverflow";
        case ErrorCode::DegenerateTriple: return "DegenerateTriple";
        case ErrorCode::DegenerateEdge: return "DegenerateEdge";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::UnknownName: return "UnknownName";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::FrameDrift: return "FrameDrift";
        case ErrorCode::DegenerateMetric: return "DegenerateMetric";
        case ErrorCode::DegeneratePlane: return "DegeneratePlane";
        case ErrorCode::CollapsedPair: return "CollapsedPair";
        case ErrorCode::EmptyOverlap: return "EmptyOverlap";
        case ErrorCode::Config: return "Config";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace isogrow

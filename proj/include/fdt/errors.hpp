#pragma once

#include <stdexcept>
#include <string>

namespace fdt {

enum class Err {
    NonPlanarRotation,
    OuterNotCycle,
    InnerFaceNotTriangle,
    ChordPresent,
    SeamMismatch,
    NotRemovingOrder,
    InvalidInstance,
    InternalFailure,
    BudgetExceeded,
    ProfileInfeasible,
    NotSpanning,
    SeedNotInTree,
    DegreeTooHigh,
    SchemaError,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::NonPlanarRotation: return "NonPlanarRotation";
        case Err::OuterNotCycle: return "OuterNotCycle";
        case Err::InnerFaceNotTriangle: return "InnerFaceNotTriangle";
        case Err::ChordPresent: return "ChordPresent";
        case Err::SeamMismatch: return "SeamMismatch";
        case Err::NotRemovingOrder: return "NotRemovingOrder";
        case Err::InvalidInstance: return "InvalidInstance";
        case Err::InternalFailure: return "InternalFailure";
        case Err::BudgetExceeded: return "BudgetExceeded";
        case Err::ProfileInfeasible: return "ProfileInfeasible";
        case Err::NotSpanning: return "NotSpanning";
        case Err::SeedNotInTree: return "SeedNotInTree";
        case Err::DegreeTooHigh: return "DegreeTooHigh";
        case Err::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

// Internal-consistency check; firing one means a bug, not bad input.
inline void check_internal(bool cond, const char* what) {
    if (!cond) throw Error(Err::InternalFailure, what);
}

}  // namespace fdt

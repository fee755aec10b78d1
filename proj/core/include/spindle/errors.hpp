#pragma once
#include <stdexcept>
#include <string>

namespace spindle {

/// Base class for all toolkit errors. what() starts with the error kind.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeViolation : Error {
    explicit RangeViolation(const std::string& m) : Error("RangeViolation: " + m) {}
};
struct MonotonicityViolation : Error {
    explicit MonotonicityViolation(const std::string& m) : Error("MonotonicityViolation: " + m) {}
};
struct DegenerateCritical : Error {
    explicit DegenerateCritical(const std::string& m) : Error("DegenerateCritical: " + m) {}
};
struct ToleranceAmbiguity : Error {
    explicit ToleranceAmbiguity(const std::string& m) : Error("ToleranceAmbiguity: " + m) {}
};
struct StepFailure : Error {
    explicit StepFailure(const std::string& m) : Error("StepFailure: " + m) {}
};
struct NoReturn : Error {
    explicit NoReturn(const std::string& m) : Error("NoReturn: " + m) {}
};
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& m) : Error("QuadratureFailure: " + m) {}
};
struct InconsistentData : Error {
    explicit InconsistentData(const std::string& m) : Error("InconsistentData: " + m) {}
};
struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& m) : Error("GridTooCoarse: " + m) {}
};
struct CutoffTooSmall : Error {
    explicit CutoffTooSmall(const std::string& m) : Error("CutoffTooSmall: " + m) {}
};
struct NotADivisor : Error {
    explicit NotADivisor(const std::string& m) : Error("NotADivisor: " + m) {}
};
struct ConfigParse : Error {
    explicit ConfigParse(const std::string& m) : Error("ConfigParse: " + m) {}
};

}  // namespace spindle

#pragma once

#include <stdexcept>
#include <string>

namespace nlb {

// Base of every library error; code() is a stable machine-readable tag.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define NLB_DEFINE_ERROR(Name, Tag)                                          \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(Tag, what) {}        \
    };

NLB_DEFINE_ERROR(DerivativeSingularity, "DerivativeSingularity")
NLB_DEFINE_ERROR(InvalidRange, "InvalidRange")
NLB_DEFINE_ERROR(NotOnHyperplane, "NotOnHyperplane")
NLB_DEFINE_ERROR(ResonantDivision, "ResonantDivision")
NLB_DEFINE_ERROR(InvalidParams, "InvalidParams")
NLB_DEFINE_ERROR(InvalidInput, "InvalidInput")
NLB_DEFINE_ERROR(RegionUnsatisfiable, "RegionUnsatisfiable")
NLB_DEFINE_ERROR(MeanNotZero, "MeanNotZero")
NLB_DEFINE_ERROR(FormatError, "FormatError")
NLB_DEFINE_ERROR(ConfigError, "ConfigError")

#undef NLB_DEFINE_ERROR

// Raised by the time steppers; carries the time at which the state went bad.
class NonFiniteState : public Error {
public:
    NonFiniteState(const std::string& what, double t)
        : Error("NonFiniteState", what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace nlb

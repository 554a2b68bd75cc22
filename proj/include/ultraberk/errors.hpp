#pragma once

#include <stdexcept>
#include <string>

namespace ultraberk {

enum class Err {
    DivisionByZero,
    NegativePowerOfZero,
    AllInfinite,
    NotIntegralUnit,
    NonMonic,
    UncertifiedModulus,
    BothZero,
    NonMonicRadix,
    PredOfZero,
    InsufficientPrecision,
    ZeroValue,
    EmptyInput,
    WindowTooLarge,
    WitnessOutsideS,
    UncertifiedExtension,
    SyntaxError,
    ArityMismatch,
    Validation,
    Internal,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::DivisionByZero: return "DivisionByZero";
        case Err::NegativePowerOfZero: return "NegativePowerOfZero";
        case Err::AllInfinite: return "AllInfinite";
        case Err::NotIntegralUnit: return "NotIntegralUnit";
        case Err::NonMonic: return "NonMonic";
        case Err::UncertifiedModulus: return "UncertifiedModulus";
        case Err::BothZero: return "BothZero";
        case Err::NonMonicRadix: return "NonMonicRadix";
        case Err::PredOfZero: return "PredOfZero";
        case Err::InsufficientPrecision: return "InsufficientPrecision";
        case Err::ZeroValue: return "ZeroValue";
        case Err::EmptyInput: return "EmptyInput";
        case Err::WindowTooLarge: return "WindowTooLarge";
        case Err::WitnessOutsideS: return "WitnessOutsideS";
        case Err::UncertifiedExtension: return "UncertifiedExtension";
        case Err::SyntaxError: return "SyntaxError";
        case Err::ArityMismatch: return "ArityMismatch";
        case Err::Validation: return "Validation";
        case Err::Internal: return "Internal";
    }
    return "Unknown";
}

class UbError : public std::runtime_error {
public:
    UbError(Err code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw UbError(code, msg); }

inline void require(bool cond, Err code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

} // namespace ultraberk

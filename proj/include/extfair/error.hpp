#pragma once

#include <stdexcept>
#include <string>

namespace extfair {

enum class Errc {
    ParseError,
    NegativeValue,
    UnnormalizedWeights,
    DimensionMismatch,
    GeneralFormUnsupported,
    NotABijection,
    EnumerationCapExceeded,
    SearchCapExceeded,
    BadEpsilon,
    BadParameters,
    WrongAgentCount,
    BadConfig,
    InvariantBroken,
    InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace extfair

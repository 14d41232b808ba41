#pragma once

#include <stdexcept>
#include <string>

namespace qkm {

// Error taxonomy shared by the whole library. Every computational failure
// carries a stable code string so the CLI can emit structured diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define QKM_DEFINE_ERROR(NAME)                                       \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {} \
    };

QKM_DEFINE_ERROR(DivisionByZero)
QKM_DEFINE_ERROR(PoleAtOne)
QKM_DEFINE_ERROR(ParseError)
QKM_DEFINE_ERROR(NotGCM)
QKM_DEFINE_ERROR(NotSymmetrizable)
QKM_DEFINE_ERROR(IndexSetTooLarge)
QKM_DEFINE_ERROR(NotFiniteType)
QKM_DEFINE_ERROR(NotIndecomposable)
QKM_DEFINE_ERROR(HeightCapExceeded)
QKM_DEFINE_ERROR(DegeneratePair)
QKM_DEFINE_ERROR(InvalidCharacter)
QKM_DEFINE_ERROR(UnsupportedCase)
QKM_DEFINE_ERROR(ComponentNotFound)
QKM_DEFINE_ERROR(NoSquareRootInField)
QKM_DEFINE_ERROR(NotUnoriented)
QKM_DEFINE_ERROR(InvalidArgument)

#undef QKM_DEFINE_ERROR

} // namespace qkm

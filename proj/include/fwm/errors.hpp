#pragma once

#include <stdexcept>
#include <string>

namespace fwm {

// Exit-code category a failure maps to at the CLI boundary.
enum class ErrorKind { Config = 2, Numerical = 3, Io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define FWM_DEFINE_ERROR(Name, Kind)                                        \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
    };

FWM_DEFINE_ERROR(GridTooSmall, Config)
FWM_DEFINE_ERROR(GridMismatch, Config)
FWM_DEFINE_ERROR(DomainError, Config)
FWM_DEFINE_ERROR(UnknownPreset, Config)
FWM_DEFINE_ERROR(UnitError, Config)
FWM_DEFINE_ERROR(GeometryMismatch, Config)
FWM_DEFINE_ERROR(AliasingRisk, Numerical)
FWM_DEFINE_ERROR(NonConvergence, Numerical)
FWM_DEFINE_ERROR(DegenerateFit, Numerical)
FWM_DEFINE_ERROR(DegenerateCurve, Numerical)
FWM_DEFINE_ERROR(NoSpots, Numerical)
FWM_DEFINE_ERROR(IOFailure, Io)

#undef FWM_DEFINE_ERROR

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(ErrorKind::Config, "line " + std::to_string(line) + ", column " +
                                       std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Advisories (aliasing in warn mode, non-convergence) go through here.
// Default sink writes to stderr; tests may replace it.
using WarningSink = void (*)(const std::string&);
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace fwm

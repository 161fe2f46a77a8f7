#ifndef ASHARDS_ERROR_HPP
#define ASHARDS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ashards {

// Error categories; mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    InvalidArgument = 1,
    PreconditionFailed = 2,
    Singular = 3,
    ProtocolFailure = 4,
    IoError = 5,
    FormatError = 6,
    Internal = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace ashards

#endif

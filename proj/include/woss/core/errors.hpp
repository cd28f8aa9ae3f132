#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace woss {

// Stable error codes. Values are carried on the wire in response frames,
// so they must not be renumbered.
enum class ErrorCode : uint8_t {
    Ok = 0,
    MalformedHintValue = 1,
    ReadOnlyAttribute = 2,
    UnknownFile = 3,
    FileExists = 4,
    UnknownAttribute = 5,
    UnknownAllocation = 6,
    NoCapacity = 7,
    OutOfSpace = 8,
    NotFound = 9,
    ChecksumMismatch = 10,
    ReplicationDegraded = 11,
    FrameTooLarge = 12,
    VersionMismatch = 13,
    TruncatedFrame = 14,
    RangeError = 15,
    AllReplicasUnreachable = 16,
    InvalidState = 17,
    ConflictingAnnotations = 18,
    NoIdleNode = 19,
    TaskFailed = 20,
    Unreachable = 21,
    InvalidArgument = 22,
    IoError = 23,
    ChainBroken = 24,
    InvalidPath = 25,
};

std::string_view error_code_name(ErrorCode code);
ErrorCode error_code_from_byte(uint8_t raw);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace woss

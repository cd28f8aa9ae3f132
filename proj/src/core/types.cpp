#include "woss/core/types.hpp"

#include <vector>

namespace woss {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::MalformedHintValue: return "MalformedHintValue";
        case ErrorCode::ReadOnlyAttribute: return "ReadOnlyAttribute";
        case ErrorCode::UnknownFile: return "UnknownFile";
        case ErrorCode::FileExists: return "FileExists";
        case ErrorCode::UnknownAttribute: return "UnknownAttribute";
        case ErrorCode::UnknownAllocation: return "UnknownAllocation";
        case ErrorCode::NoCapacity: return "NoCapacity";
        case ErrorCode::OutOfSpace: return "OutOfSpace";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
        case ErrorCode::ReplicationDegraded: return "ReplicationDegraded";
        case ErrorCode::FrameTooLarge: return "FrameTooLarge";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::TruncatedFrame: return "TruncatedFrame";
        case ErrorCode::RangeError: return "RangeError";
        case ErrorCode::AllReplicasUnreachable: return "AllReplicasUnreachable";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::ConflictingAnnotations: return "ConflictingAnnotations";
        case ErrorCode::NoIdleNode: return "NoIdleNode";
        case ErrorCode::TaskFailed: return "TaskFailed";
        case ErrorCode::Unreachable: return "Unreachable";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ChainBroken: return "ChainBroken";
        case ErrorCode::InvalidPath: return "InvalidPath";
    }
    return "UnknownError";
}

ErrorCode error_code_from_byte(uint8_t raw) {
    if (raw > static_cast<uint8_t>(ErrorCode::InvalidPath)) {
        return ErrorCode::IoError;
    }
    return static_cast<ErrorCode>(raw);
}

std::string_view file_state_name(FileState state) {
    switch (state) {
        case FileState::Creating: return "Creating";
        case FileState::Committed: return "Committed";
        case FileState::Deleted: return "Deleted";
    }
    return "Unknown";
}

FileId FileId::parse(std::string_view raw) {
    if (raw.empty() || raw.front() != '/') {
        throw_error(ErrorCode::InvalidPath, "path must be absolute: '" + std::string(raw) + "'");
    }
    std::vector<std::string_view> segments;
    size_t pos = 1;
    while (pos <= raw.size()) {
        size_t next = raw.find('/', pos);
        if (next == std::string_view::npos) next = raw.size();
        std::string_view seg = raw.substr(pos, next - pos);
        if (seg.empty() || seg == ".") {
            // collapse
        } else if (seg == "..") {
            if (segments.empty()) {
                throw_error(ErrorCode::InvalidPath,
                            "path escapes root: '" + std::string(raw) + "'");
            }
            segments.pop_back();
        } else {
            segments.push_back(seg);
        }
        pos = next + 1;
    }
    std::string normalized;
    if (segments.empty()) {
        normalized = "/";
    } else {
        for (const auto& seg : segments) {
            normalized += '/';
            normalized += seg;
        }
    }
    FileId id;
    id.path = std::move(normalized);
    return id;
}

}  // namespace woss

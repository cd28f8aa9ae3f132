#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "woss/core/errors.hpp"

namespace woss {

// Identifies one storage node. Ordering is lexicographic on the id string;
// placement code relies on this to build deterministic node orderings.
struct NodeId {
    std::string id;

    NodeId() = default;
    explicit NodeId(std::string value) : id(std::move(value)) {}

    bool empty() const noexcept { return id.empty(); }
    auto operator<=>(const NodeId&) const = default;
};

// Absolute, normalized slash-separated path naming one file.
struct FileId {
    std::string path;

    FileId() = default;

    // Normalizes on construction: requires a leading slash, collapses
    // duplicate slashes, resolves `.` and `..` segments. Throws InvalidPath
    // if the path escapes the root or is relative.
    static FileId parse(std::string_view raw);

    bool empty() const noexcept { return path.empty(); }
    auto operator<=>(const FileId&) const = default;
};

// One extended attribute.
struct Hint {
    std::string key;
    std::string value;

    auto operator<=>(const Hint&) const = default;
};

// A file's extended attributes. Keys are unique; iteration and
// serialization order is always sorted by key.
class HintSet {
public:
    HintSet() = default;
    HintSet(std::initializer_list<Hint> hints) {
        for (const auto& h : hints) set(h.key, h.value);
    }

    void set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }
    void erase(const std::string& key) { entries_.erase(key); }

    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    const std::string* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

    auto operator<=>(const HintSet&) const = default;

private:
    std::map<std::string, std::string> entries_;
};

// Location of one fixed-size chunk of a file.
struct ChunkDescriptor {
    uint64_t index = 0;
    uint64_t size = 0;
    std::vector<NodeId> replicas;  // sorted, distinct

    auto operator<=>(const ChunkDescriptor&) const = default;
};

enum class FileState : uint8_t {
    Creating = 0,
    Committed = 1,
    Deleted = 2,
};

std::string_view file_state_name(FileState state);

// The manager's unit of truth for one file: block map plus attributes.
// The reserved `location` keys are computed on read and never stored here.
struct FileMetadata {
    FileId file;
    uint64_t chunk_size = 0;
    std::vector<ChunkDescriptor> chunks;  // indices contiguous from 0
    HintSet xattrs;
    FileState state = FileState::Creating;

    uint64_t total_size() const {
        uint64_t sum = 0;
        for (const auto& c : chunks) sum += c.size;
        return sum;
    }
};

struct StorageNodeStatus {
    NodeId node;
    uint64_t capacity_bytes = 0;
    uint64_t free_bytes = 0;
    std::string address;  // host:port, empty for in-process nodes
};

inline constexpr uint64_t kDefaultChunkSize = 1ull << 20;  // 1 MiB

}  // namespace woss

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "woss/core/types.hpp"

namespace woss {

struct StoredChunk {
    FileId file;
    uint64_t index = 0;
    std::vector<uint8_t> bytes;
    uint64_t checksum = 0;
};

// Backing store for one node's chunks. `mem` mirrors a RAM-disk deployment,
// `dir` keeps one file per chunk.
class ChunkStore {
public:
    virtual ~ChunkStore() = default;

    virtual void put(const FileId& file, uint64_t index, std::span<const uint8_t> bytes,
                     uint64_t checksum) = 0;
    virtual std::optional<StoredChunk> get(const FileId& file, uint64_t index) = 0;
    virtual bool contains(const FileId& file, uint64_t index) = 0;
    virtual void erase_file(const FileId& file) = 0;
    virtual uint64_t used_bytes() = 0;

    // Flips one payload byte without touching the stored digest.
    virtual void corrupt_for_test(const FileId& file, uint64_t index) = 0;
};

class MemStore : public ChunkStore {
public:
    void put(const FileId& file, uint64_t index, std::span<const uint8_t> bytes,
             uint64_t checksum) override;
    std::optional<StoredChunk> get(const FileId& file, uint64_t index) override;
    bool contains(const FileId& file, uint64_t index) override;
    void erase_file(const FileId& file) override;
    uint64_t used_bytes() override;
    void corrupt_for_test(const FileId& file, uint64_t index) override;

private:
    using Key = std::pair<FileId, uint64_t>;
    std::mutex mu_;
    std::map<Key, StoredChunk> chunks_;
    uint64_t used_ = 0;
};

// One file per chunk under a root directory. The stored digest rides in an
// 8-byte header so reads can verify without a sidecar.
class DirStore : public ChunkStore {
public:
    explicit DirStore(std::string root);

    void put(const FileId& file, uint64_t index, std::span<const uint8_t> bytes,
             uint64_t checksum) override;
    std::optional<StoredChunk> get(const FileId& file, uint64_t index) override;
    bool contains(const FileId& file, uint64_t index) override;
    void erase_file(const FileId& file) override;
    uint64_t used_bytes() override;
    void corrupt_for_test(const FileId& file, uint64_t index) override;

private:
    std::string chunk_path(const FileId& file, uint64_t index) const;
    std::string file_prefix(const FileId& file) const;

    std::string root_;
    std::mutex mu_;
};

// Parses "mem" or "dir:<path>".
std::unique_ptr<ChunkStore> make_chunk_store(const std::string& spec);

}  // namespace woss

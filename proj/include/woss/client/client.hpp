#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "woss/client/chunk_cache.hpp"
#include "woss/core/rng.hpp"
#include "woss/core/services.hpp"

namespace woss {

// Tick prices for the logical cost accounting used by the benchmark
// harness. One local chunk access costs `local_access`; touching a chunk
// on another machine costs `remote_access`; a metadata attribute round
// trip costs `xattr_roundtrip`.
struct CostModel {
    uint64_t local_access = 1;
    uint64_t remote_access = 10;
    uint64_t xattr_roundtrip = 1;
};

// Per-task accounting the harness attaches to a client while a task body
// runs. All counters are in chunk operations; ticks follow the CostModel.
class CostMeter {
public:
    void add_read(const FileId& file, bool local, uint64_t ticks) {
        auto& split = file_reads_[file];
        (local ? split.first : split.second) += 1;
        (local ? reads_local_ : reads_remote_) += 1;
        ticks_ += ticks;
    }
    void add_write(const FileId& file, bool local, uint64_t ticks) {
        (void)file;
        (local ? writes_local_ : writes_remote_) += 1;
        ticks_ += ticks;
    }
    void add_cache_hit(const FileId& file) {
        (void)file;
        cache_hits_ += 1;
    }
    void add_xattr_roundtrip(uint64_t ticks) {
        xattr_roundtrips_ += 1;
        ticks_ += ticks;
    }

    uint64_t ticks() const noexcept { return ticks_; }
    uint64_t reads_local() const noexcept { return reads_local_; }
    uint64_t reads_remote() const noexcept { return reads_remote_; }
    uint64_t writes_local() const noexcept { return writes_local_; }
    uint64_t writes_remote() const noexcept { return writes_remote_; }
    uint64_t cache_hits() const noexcept { return cache_hits_; }
    uint64_t xattr_roundtrips() const noexcept { return xattr_roundtrips_; }
    const std::map<FileId, std::pair<uint64_t, uint64_t>>& file_reads() const {
        return file_reads_;
    }

private:
    uint64_t ticks_ = 0;
    uint64_t reads_local_ = 0;
    uint64_t reads_remote_ = 0;
    uint64_t writes_local_ = 0;
    uint64_t writes_remote_ = 0;
    uint64_t cache_hits_ = 0;
    uint64_t xattr_roundtrips_ = 0;
    std::map<FileId, std::pair<uint64_t, uint64_t>> file_reads_;
};

enum class OpenMode : uint8_t { Read, Write };

// An open file. The hint snapshot is fetched once and rides on every
// request the handle sends for its whole lifetime.
class OpenHandle {
public:
    const FileId& file() const noexcept { return file_; }
    OpenMode mode() const noexcept { return mode_; }
    const HintSet& hint_snapshot() const noexcept { return snapshot_; }
    uint64_t chunk_size() const noexcept { return chunk_size_; }
    uint64_t file_size() const noexcept { return file_size_; }
    uint64_t cache_bytes() const { return cache_ ? cache_->bytes() : 0; }
    uint64_t cache_peak_bytes() const { return cache_ ? cache_->peak_bytes() : 0; }
    bool closed() const noexcept { return closed_; }

private:
    friend class Client;

    FileId file_;
    OpenMode mode_ = OpenMode::Read;
    HintSet snapshot_;
    uint64_t chunk_size_ = 0;
    uint64_t file_size_ = 0;
    std::vector<ChunkDescriptor> chunk_map_;  // read mode
    std::unique_ptr<LruChunkCache> cache_;
    std::vector<uint8_t> write_buffer_;
    uint64_t chunks_flushed_ = 0;
    ReplicationMode replication_mode_ = ReplicationMode::EagerParallel;
    bool closed_ = false;
    FileMetadata last_meta_;
};

struct ClientConfig {
    NodeId client_node;              // identity for requester fields
    NodeId colocated_node;           // storage node on this machine, may be empty
    uint64_t default_cache_bytes = 4ull << 20;
    ReplicationMode replication_mode = ReplicationMode::EagerParallel;
    uint64_t rng_seed = 1;
    uint32_t transport_retries = 2;
};

// Library stand-in for the mounted client interface: create/open/read/
// write/close plus the xattr calls, with hint snapshotting at open and a
// per-handle chunk cache.
class Client {
public:
    Client(ClientConfig config, ManagerApi& manager, StorageResolver& nodes);

    OpenHandle create(const FileId& file, const HintSet& hints_if_create,
                      uint64_t chunk_size_override = 0);
    OpenHandle open_read(const FileId& file);

    size_t write(OpenHandle& handle, std::span<const uint8_t> bytes);
    std::vector<uint8_t> read(OpenHandle& handle, uint64_t offset, uint64_t length);
    std::vector<uint8_t> read_all(OpenHandle& handle);
    FileMetadata close(OpenHandle& handle);

    void set_xattr(const FileId& file, const Hint& hint);
    std::string get_xattr(const FileId& file, const std::string& key);
    FileMetadata stat(const FileId& file);
    void remove(const FileId& file);

    void set_meter(CostMeter* meter) { meter_ = meter; }
    CostModel& cost_model() { return costs_; }
    const NodeId& colocated_node() const noexcept { return config_.colocated_node; }

private:
    NodeId requester() const {
        return config_.colocated_node.empty() ? config_.client_node : config_.colocated_node;
    }
    uint64_t access_ticks(const NodeId& serving) const {
        return serving == config_.colocated_node ? costs_.local_access : costs_.remote_access;
    }
    void flush_chunks(OpenHandle& handle, bool include_partial);
    std::vector<uint8_t> fetch_chunk(OpenHandle& handle, const ChunkDescriptor& descriptor);
    void meter_xattr();

    ClientConfig config_;
    ManagerApi& manager_;
    StorageResolver& nodes_;
    CostModel costs_;
    CostMeter* meter_ = nullptr;
    Rng rng_;
};

}  // namespace woss

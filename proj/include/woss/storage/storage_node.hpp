#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "woss/core/services.hpp"
#include "woss/storage/chunk_store.hpp"
#include "woss/storage/replication.hpp"

namespace woss {

struct StorageNodeConfig {
    NodeId id;
    uint64_t capacity_bytes = 1ull << 30;
    uint64_t max_chunk_bytes = 16ull << 20;
    RepSemantics default_semantics = RepSemantics::Optimistic;
    uint32_t replication_retries = 3;
    std::chrono::milliseconds retry_backoff{5};
};

struct StorageNodeCounters {
    uint64_t served_reads_local = 0;
    uint64_t served_reads_remote = 0;
    uint64_t served_bytes = 0;
    uint64_t chunks_stored = 0;
    uint64_t degraded_jobs = 0;
    uint64_t chain_breaks = 0;
};

// One storage node: durable chunk storage plus the replication work the
// manager's allocations fan out to it.
class StorageNode : public StorageApi {
public:
    StorageNode(StorageNodeConfig config, std::unique_ptr<ChunkStore> store);
    ~StorageNode() override;

    // Wires the node into a cluster. The executor defaults to an inline
    // one; daemons install a ThreadedExecutor.
    void connect(ManagerApi* manager, StorageResolver* peers);
    void set_executor(std::shared_ptr<ReplicationExecutor> executor);

    void put_chunk(const PutChunkArgs& args) override;
    std::vector<uint8_t> get_chunk(const GetChunkArgs& args) override;
    void replica_push(const ReplicaPushArgs& args) override;
    void delete_chunks(const FileId& file) override;

    StorageNodeStatus status() const;
    void set_address(std::string address);
    void register_with_manager();
    void heartbeat();

    StorageNodeCounters counters() const;
    // Served chunk reads of one file, local + remote.
    std::pair<uint64_t, uint64_t> served_reads_for(const FileId& file) const;

    const NodeId& id() const noexcept { return config_.id; }
    ChunkStore& store() { return *store_; }
    bool foreground_busy() const { return foreground_active_.load() > 0; }

    // Fault injection: stall every incoming replica push by this long.
    void set_replica_push_delay_for_test(std::chrono::milliseconds delay);

private:
    void store_chunk(const FileId& file, uint64_t index, std::span<const uint8_t> payload);
    void commit_to_manager(const FileId& file, uint64_t index, uint64_t size, uint64_t checksum);
    // Pushes one chunk to one peer with the retry budget. Returns true on
    // success.
    bool push_with_retries(const NodeId& target, const ReplicaPushArgs& args);

    StorageNodeConfig config_;
    std::unique_ptr<ChunkStore> store_;
    ManagerApi* manager_ = nullptr;
    StorageResolver* peers_ = nullptr;
    std::shared_ptr<ReplicationExecutor> executor_;
    std::string address_;

    std::atomic<int> foreground_active_{0};
    std::atomic<int64_t> push_delay_ms_{0};

    mutable std::mutex counters_mu_;
    StorageNodeCounters counters_;
    std::map<FileId, std::pair<uint64_t, uint64_t>> per_file_reads_;
};

}  // namespace woss

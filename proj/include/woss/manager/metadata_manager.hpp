#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "woss/core/services.hpp"
#include "woss/manager/placement.hpp"

namespace woss {

struct ManagerConfig {
    uint64_t chunk_size = kDefaultChunkSize;
    uint32_t heartbeat_misses = 3;
    // Serializes every xattr mutation behind one lock instead of per-file
    // locks. Kept so the cost of the serialized design can be measured.
    bool global_xattr_lock = false;
    bool record_placement_log = false;
};

struct ManagerCounters {
    uint64_t set_xattr_calls = 0;
    uint64_t get_xattr_calls = 0;
    uint64_t get_location_calls = 0;
    uint64_t allocations = 0;
    uint64_t chunks_allocated = 0;
};

// Centralized metadata service: block maps, extended attributes, cluster
// membership, and the dispatcher that routes allocation requests to
// hint-selected placement policies.
class MetadataManager : public ManagerApi {
public:
    explicit MetadataManager(ManagerConfig config = {},
                             PolicyRegistry policies = PolicyRegistry::standard());

    FileMetadata create_file(const FileId& file, const NodeId& creator,
                             const HintSet& initial_hints,
                             uint64_t chunk_size_override = 0) override;
    PlacementDecision allocate_chunks(const FileId& file, uint64_t count,
                                      const HintSet& hint_snapshot,
                                      const NodeId& requester) override;
    FileMetadata commit_chunk(const CommitChunkArgs& args) override;
    FileMetadata commit_file(const FileId& file) override;
    void set_xattr(const FileId& file, const Hint& hint) override;
    std::string get_xattr(const FileId& file, const std::string& key) override;
    FileMetadata get_metadata(const FileId& file) override;
    void delete_file(const FileId& file) override;
    void node_register(const StorageNodeStatus& status) override;
    void node_heartbeat(const StorageNodeStatus& status) override;
    std::vector<NodeInfo> list_nodes() override;

    // Ages every member by one missed heartbeat; members reaching the
    // configured miss budget drop out of the live set. Driven by a timer
    // in the daemon and called directly in tests.
    void heartbeat_sweep();

    // Exposes internal state bottom-up through get_xattr. The standard
    // `location` and `location.chunks` attributes are registered this way.
    using ComputedAttribute = std::function<std::string(const FileMetadata&)>;
    void register_computed_attribute(std::string key, ComputedAttribute fn);

    // Chunk reclaim on delete goes through this when set.
    void set_storage_resolver(StorageResolver* resolver) { resolver_ = resolver; }

    ManagerCounters counters() const;
    // Peak number of xattr mutations observed inside the critical section
    // at once; stays at 1 when global_xattr_lock is on.
    int max_concurrent_xattr_mutations() const { return xattr_max_concurrent_.load(); }
    void set_xattr_hold_micros_for_test(uint32_t micros) { xattr_hold_micros_ = micros; }

    std::vector<std::string> placement_log() const;

    // Replica commits for one file in arrival order (chunk index, node).
    std::vector<std::pair<uint64_t, NodeId>> commit_log(const FileId& file);

    uint64_t member_free_bytes(const NodeId& node) const;
    std::vector<StorageNodeStatus> member_statuses() const;

    uint64_t chunk_size() const noexcept { return config_.chunk_size; }

private:
    struct Allocation {
        uint64_t size = 0;  // bytes debited per node at decision time
        NodeId primary;
        std::vector<NodeId> targets;
        std::set<NodeId> committed;
        bool reconciled = false;  // true once the actual size replaced the debit
    };

    struct FileEntry {
        FileMetadata meta;
        std::map<uint64_t, Allocation> allocations;
        std::vector<std::pair<uint64_t, NodeId>> commit_log;
        uint64_t next_chunk_index = 0;
        mutable std::mutex mu;
    };

    struct MemberRecord {
        StorageNodeStatus status;
        bool alive = false;
        uint32_t missed = 0;
    };

    std::shared_ptr<FileEntry> entry_for(const FileId& file);
    std::string compute_location(const FileMetadata& meta) const;
    std::string compute_chunk_locations(const FileMetadata& meta) const;
    void credit(const NodeId& node, uint64_t bytes);
    void log_decision(const PlacementDecision& decision, uint64_t first_index);

    ManagerConfig config_;
    PolicyRegistry policies_;
    StorageResolver* resolver_ = nullptr;

    mutable std::mutex files_mu_;
    std::map<FileId, std::shared_ptr<FileEntry>> files_;

    mutable std::mutex members_mu_;
    std::map<NodeId, MemberRecord> members_;

    // Placement state: round-robin cursor and collocation anchors. One
    // allocation at a time so every decision sees a consistent snapshot.
    mutable std::mutex alloc_mu_;
    uint64_t cursor_ = 0;
    GroupTable groups_;

    std::map<std::string, ComputedAttribute> computed_attrs_;

    std::mutex global_xattr_mu_;
    std::atomic<int> xattr_active_{0};
    std::atomic<int> xattr_max_concurrent_{0};
    std::atomic<uint32_t> xattr_hold_micros_{0};

    mutable std::mutex counters_mu_;
    ManagerCounters counters_;

    mutable std::mutex log_mu_;
    std::vector<std::string> placement_log_;
};

}  // namespace woss

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "woss/core/hints.hpp"
#include "woss/core/types.hpp"

namespace woss {

enum class PlacementPolicyKind : uint8_t {
    Default = 0,
    Local = 1,
    Collocation = 2,
    Scatter = 3,
};

std::string_view placement_policy_name(PlacementPolicyKind kind);

// One chunk's placement: the node that receives the client write plus the
// extra replica targets the write fans out to.
struct ChunkAssignment {
    uint64_t index = 0;
    NodeId primary;
    std::vector<NodeId> replica_targets;  // distinct, excludes primary
    PlacementPolicyKind policy = PlacementPolicyKind::Default;

    auto operator<=>(const ChunkAssignment&) const = default;
};

// Result of one allocation request.
struct PlacementDecision {
    FileId file;
    std::vector<ChunkAssignment> chunks;
    // Dominant policy for the request; individual chunks may record
    // Default when they spilled past a full preferred node.
    PlacementPolicyKind policy = PlacementPolicyKind::Default;

    auto operator<=>(const PlacementDecision&) const = default;
};

struct NodeInfo {
    NodeId node;
    std::string address;

    auto operator<=>(const NodeInfo&) const = default;
};

struct CommitChunkArgs {
    FileId file;
    uint64_t index = 0;
    uint64_t size = 0;
    NodeId node;      // replica holder reporting the commit
    uint64_t checksum = 0;
};

// Metadata manager operations. Implemented by the in-process manager and
// by the TCP proxy; callers cannot tell them apart.
class ManagerApi {
public:
    virtual ~ManagerApi() = default;

    virtual FileMetadata create_file(const FileId& file, const NodeId& creator,
                                     const HintSet& initial_hints,
                                     uint64_t chunk_size_override = 0) = 0;
    virtual PlacementDecision allocate_chunks(const FileId& file, uint64_t count,
                                              const HintSet& hint_snapshot,
                                              const NodeId& requester) = 0;
    // Records one replica of one chunk; idempotent per (chunk, node).
    virtual FileMetadata commit_chunk(const CommitChunkArgs& args) = 0;
    virtual FileMetadata commit_file(const FileId& file) = 0;
    virtual void set_xattr(const FileId& file, const Hint& hint) = 0;
    virtual std::string get_xattr(const FileId& file, const std::string& key) = 0;
    virtual FileMetadata get_metadata(const FileId& file) = 0;
    virtual void delete_file(const FileId& file) = 0;
    virtual void node_register(const StorageNodeStatus& status) = 0;
    virtual void node_heartbeat(const StorageNodeStatus& status) = 0;
    virtual std::vector<NodeInfo> list_nodes() = 0;
};

enum class ReplicationMode : uint8_t {
    EagerParallel = 0,
    LazyChained = 1,
};

struct PutChunkArgs {
    FileId file;
    uint64_t index = 0;
    HintSet hint_snapshot;
    NodeId requester;
    std::vector<NodeId> replica_targets;  // chosen by the manager at allocation
    ReplicationMode mode = ReplicationMode::EagerParallel;
    std::vector<uint8_t> payload;
};

struct GetChunkArgs {
    FileId file;
    uint64_t index = 0;
    NodeId requester;
};

// Hop of a replication chain or fan-out, carried node to node.
struct ReplicaPushArgs {
    FileId file;
    uint64_t index = 0;
    std::vector<NodeId> forward_chain;  // remaining targets after this hop
    // Chained hops forward inline (blocking) instead of on the background
    // queue, so a pessimistic writer can wait out the whole chain.
    bool synchronous = false;
    std::vector<uint8_t> payload;
};

class StorageApi {
public:
    virtual ~StorageApi() = default;

    virtual void put_chunk(const PutChunkArgs& args) = 0;
    virtual std::vector<uint8_t> get_chunk(const GetChunkArgs& args) = 0;
    virtual void replica_push(const ReplicaPushArgs& args) = 0;
    virtual void delete_chunks(const FileId& file) = 0;
};

// Maps a node id to a channel for it. Throws Error(Unreachable) for nodes
// that are down or unknown.
class StorageResolver {
public:
    virtual ~StorageResolver() = default;
    virtual StorageApi& node(const NodeId& id) = 0;
};

// Direct-call resolver for single-process clusters. Nodes can be marked
// dead to inject unreachability.
class InProcResolver : public StorageResolver {
public:
    void add(const NodeId& id, StorageApi* api) {
        std::lock_guard lock(mu_);
        nodes_[id] = api;
    }
    void mark_dead(const NodeId& id, bool dead = true) {
        std::lock_guard lock(mu_);
        if (dead) {
            dead_.insert(id);
        } else {
            dead_.erase(id);
        }
    }
    StorageApi& node(const NodeId& id) override {
        std::lock_guard lock(mu_);
        if (dead_.count(id) != 0) {
            throw_error(ErrorCode::Unreachable, id.id + " is down");
        }
        auto it = nodes_.find(id);
        if (it == nodes_.end()) {
            throw_error(ErrorCode::Unreachable, id.id + " is not a known storage node");
        }
        return *it->second;
    }

private:
    std::mutex mu_;
    std::map<NodeId, StorageApi*> nodes_;
    std::set<NodeId> dead_;
};

}  // namespace woss

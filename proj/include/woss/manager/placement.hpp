#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "woss/core/services.hpp"
#include "woss/core/types.hpp"

namespace woss {

// Collocation groups. An anchor, once chosen, is pinned for the group's
// lifetime even if the node later fills up or dies; overflow spills to the
// default path instead of re-anchoring.
class GroupTable {
public:
    const NodeId* find(const std::string& group) const {
        auto it = anchors_.find(group);
        return it == anchors_.end() ? nullptr : &it->second;
    }
    void assign(const std::string& group, NodeId anchor) {
        anchors_.emplace(group, std::move(anchor));
    }
    const std::map<std::string, NodeId>& anchors() const { return anchors_; }

private:
    std::map<std::string, NodeId> anchors_;
};

struct AllocationRequest {
    FileId file;
    uint64_t first_index = 0;  // global index of the first chunk in this batch
    uint64_t count = 0;
    uint64_t chunk_size = 0;
    NodeId requester;
};

// What a placement policy may see and touch while choosing nodes. Backed
// by the manager's membership view under the allocation lock, so one
// request sees one consistent snapshot.
class PlacementBackend {
public:
    virtual ~PlacementBackend() = default;

    // Alive nodes, sorted by id. Fixed for the duration of one request.
    virtual const std::vector<NodeId>& live_nodes() = 0;
    virtual uint64_t free_bytes(const NodeId& node) = 0;
    // Debits if the node has room; false otherwise.
    virtual bool try_debit(const NodeId& node, uint64_t bytes) = 0;
    // Round-robin step over live nodes via the persistent cursor, skipping
    // nodes without room. Debits and returns the chosen node.
    // Throws Error(NoCapacity) when no node can hold the chunk.
    virtual NodeId default_next(uint64_t bytes) = 0;
    virtual GroupTable& groups() = 0;
};

// A hint-triggered placement policy. `preferred` names the node the policy
// wants for one chunk; the dispatcher debits it or spills to the default
// path when it lacks room.
struct RegisteredPolicy {
    std::string name;
    std::string trigger_key;
    std::function<bool(const std::string& value)> trigger;
    PlacementPolicyKind kind = PlacementPolicyKind::Default;
    std::function<NodeId(const AllocationRequest&, uint64_t global_index,
                         const std::string& hint_value, PlacementBackend&)>
        preferred;
};

class PolicyRegistry {
public:
    void register_policy(RegisteredPolicy policy) { policies_.push_back(std::move(policy)); }

    // At most one policy may match a hint set; a second match is a
    // registration bug and throws InvalidState.
    const RegisteredPolicy* match(const HintSet& hints) const;

    bool empty() const noexcept { return policies_.empty(); }

    // The stock hint vocabulary: DP=local / DP=collocation g / DP=scatter k.
    static PolicyRegistry standard();

private:
    std::vector<RegisteredPolicy> policies_;
};

}  // namespace woss

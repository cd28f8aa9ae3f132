#include "woss/manager/metadata_manager.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <thread>

#include "woss/core/hints.hpp"

namespace woss {

const RegisteredPolicy* PolicyRegistry::match(const HintSet& hints) const {
    const RegisteredPolicy* found = nullptr;
    for (const auto& policy : policies_) {
        const std::string* value = hints.find(policy.trigger_key);
        if (!value || !policy.trigger(*value)) continue;
        if (found) {
            throw_error(ErrorCode::InvalidState,
                        "policies '" + found->name + "' and '" + policy.name +
                            "' both match one hint set");
        }
        found = &policy;
    }
    return found;
}

PolicyRegistry PolicyRegistry::standard() {
    PolicyRegistry registry;
    const std::string dp_key{hints::kDataPlacement};

    RegisteredPolicy local;
    local.name = "local";
    local.trigger_key = dp_key;
    local.kind = PlacementPolicyKind::Local;
    local.trigger = [](const std::string& v) {
        auto dp = parse_dp_value(v);
        return dp && std::holds_alternative<DpLocal>(*dp);
    };
    local.preferred = [](const AllocationRequest& req, uint64_t, const std::string&,
                         PlacementBackend&) { return req.requester; };
    registry.register_policy(std::move(local));

    RegisteredPolicy collocation;
    collocation.name = "collocation";
    collocation.trigger_key = dp_key;
    collocation.kind = PlacementPolicyKind::Collocation;
    collocation.trigger = [](const std::string& v) {
        auto dp = parse_dp_value(v);
        return dp && std::holds_alternative<DpCollocation>(*dp);
    };
    collocation.preferred = [](const AllocationRequest&, uint64_t, const std::string& value,
                               PlacementBackend& backend) -> NodeId {
        auto dp = parse_dp_value(value);
        const auto& group = std::get<DpCollocation>(*dp).group;
        if (const NodeId* anchor = backend.groups().find(group)) {
            return *anchor;
        }
        // First use: anchor on the live node with the most room so the
        // whole group has the best chance of fitting. Ties go to id order.
        NodeId best;
        uint64_t best_free = 0;
        for (const NodeId& node : backend.live_nodes()) {
            uint64_t free = backend.free_bytes(node);
            if (best.empty() || free > best_free) {
                best = node;
                best_free = free;
            }
        }
        if (!best.empty()) backend.groups().assign(group, best);
        return best;
    };
    registry.register_policy(std::move(collocation));

    RegisteredPolicy scatter;
    scatter.name = "scatter";
    scatter.trigger_key = dp_key;
    scatter.kind = PlacementPolicyKind::Scatter;
    scatter.trigger = [](const std::string& v) {
        auto dp = parse_dp_value(v);
        return dp && std::holds_alternative<DpScatter>(*dp);
    };
    scatter.preferred = [](const AllocationRequest&, uint64_t global_index,
                           const std::string& value, PlacementBackend& backend) -> NodeId {
        auto dp = parse_dp_value(value);
        uint64_t group_size = std::get<DpScatter>(*dp).group_size;
        const auto& live = backend.live_nodes();
        if (live.empty()) return NodeId{};
        return live[(global_index / group_size) % live.size()];
    };
    registry.register_policy(std::move(scatter));

    return registry;
}

namespace {

// Scratch placement view. Debits and anchor assignments apply to copies
// and are committed back only if the whole request succeeds, so a failed
// allocation leaves no trace.
class ScratchBackend : public PlacementBackend {
public:
    ScratchBackend(std::vector<NodeId> live, std::map<NodeId, uint64_t> free, uint64_t cursor,
                   GroupTable groups)
        : live_(std::move(live)),
          free_(std::move(free)),
          cursor_(cursor),
          groups_(std::move(groups)) {}

    const std::vector<NodeId>& live_nodes() override { return live_; }

    uint64_t free_bytes(const NodeId& node) override {
        auto it = free_.find(node);
        return it == free_.end() ? 0 : it->second;
    }

    bool try_debit(const NodeId& node, uint64_t bytes) override {
        auto it = free_.find(node);
        if (it == free_.end() || it->second < bytes) return false;
        it->second -= bytes;
        debits_[node] += bytes;
        return true;
    }

    NodeId default_next(uint64_t bytes) override {
        if (live_.empty()) {
            throw_error(ErrorCode::NoCapacity, "no live storage nodes");
        }
        for (size_t probe = 0; probe < live_.size(); ++probe) {
            size_t idx = (cursor_ + probe) % live_.size();
            if (try_debit(live_[idx], bytes)) {
                cursor_ = (idx + 1) % live_.size();
                return live_[idx];
            }
        }
        throw_error(ErrorCode::NoCapacity,
                    "no node can hold a chunk of " + std::to_string(bytes) + " bytes");
    }

    GroupTable& groups() override { return groups_; }

    uint64_t cursor() const { return cursor_; }
    const std::map<NodeId, uint64_t>& debits() const { return debits_; }
    const GroupTable& final_groups() const { return groups_; }

private:
    std::vector<NodeId> live_;
    std::map<NodeId, uint64_t> free_;
    uint64_t cursor_;
    GroupTable groups_;
    std::map<NodeId, uint64_t> debits_;
};

}  // namespace

MetadataManager::MetadataManager(ManagerConfig config, PolicyRegistry policies)
    : config_(config), policies_(std::move(policies)) {
    register_computed_attribute(std::string(hints::kLocation),
                                [this](const FileMetadata& meta) { return compute_location(meta); });
    register_computed_attribute(
        std::string(hints::kLocationChunks),
        [this](const FileMetadata& meta) { return compute_chunk_locations(meta); });
}

void MetadataManager::register_computed_attribute(std::string key, ComputedAttribute fn) {
    computed_attrs_[std::move(key)] = std::move(fn);
}

std::shared_ptr<MetadataManager::FileEntry> MetadataManager::entry_for(const FileId& file) {
    std::lock_guard lock(files_mu_);
    auto it = files_.find(file);
    if (it == files_.end()) {
        throw_error(ErrorCode::UnknownFile, file.path);
    }
    return it->second;
}

FileMetadata MetadataManager::create_file(const FileId& file, const NodeId& creator,
                                          const HintSet& initial_hints,
                                          uint64_t chunk_size_override) {
    if (file.empty()) {
        throw_error(ErrorCode::InvalidPath, "empty file id");
    }
    HintSet validated;
    for (const auto& [key, value] : initial_hints.entries()) {
        Hint hint = parse_hint(key, value);
        validated.set(hint.key, hint.value);
    }
    auto entry = std::make_shared<FileEntry>();
    entry->meta.file = file;
    entry->meta.chunk_size = chunk_size_override != 0 ? chunk_size_override : config_.chunk_size;
    entry->meta.xattrs = std::move(validated);
    entry->meta.state = FileState::Creating;

    std::lock_guard lock(files_mu_);
    auto [it, inserted] = files_.emplace(file, std::move(entry));
    if (!inserted) {
        throw_error(ErrorCode::FileExists, file.path);
    }
    (void)creator;
    return it->second->meta;
}

PlacementDecision MetadataManager::allocate_chunks(const FileId& file, uint64_t count,
                                                   const HintSet& hint_snapshot,
                                                   const NodeId& requester) {
    if (count == 0) {
        throw_error(ErrorCode::InvalidArgument, "allocation of zero chunks");
    }
    auto entry = entry_for(file);

    std::lock_guard alloc_lock(alloc_mu_);

    uint64_t first_index = 0;
    uint64_t chunk_size = 0;
    {
        std::lock_guard file_lock(entry->mu);
        if (entry->meta.state != FileState::Creating) {
            throw_error(ErrorCode::InvalidState,
                        file.path + " is " + std::string(file_state_name(entry->meta.state)));
        }
        first_index = entry->next_chunk_index;
        chunk_size = entry->meta.chunk_size;
    }

    std::vector<NodeId> live;
    std::map<NodeId, uint64_t> free;
    {
        std::lock_guard members_lock(members_mu_);
        for (const auto& [id, record] : members_) {
            if (!record.alive) continue;
            live.push_back(id);
            free[id] = record.status.free_bytes;
        }
    }
    ScratchBackend backend(std::move(live), std::move(free), cursor_, groups_);

    const RegisteredPolicy* policy = policies_.match(hint_snapshot);
    uint64_t replication = replication_factor(hint_snapshot).value_or(1);
    const std::string* hint_value =
        policy ? hint_snapshot.find(policy->trigger_key) : nullptr;

    AllocationRequest request{file, first_index, count, chunk_size, requester};

    PlacementDecision decision;
    decision.file = file;
    decision.policy = policy ? policy->kind : PlacementPolicyKind::Default;

    const auto& nodes = backend.live_nodes();
    for (uint64_t i = 0; i < count; ++i) {
        ChunkAssignment assignment;
        assignment.index = first_index + i;

        NodeId preferred;
        if (policy) {
            preferred = policy->preferred(request, assignment.index, *hint_value, backend);
        }
        if (!preferred.empty() && backend.try_debit(preferred, chunk_size)) {
            assignment.primary = preferred;
            assignment.policy = policy->kind;
        } else {
            assignment.primary = backend.default_next(chunk_size);
            assignment.policy = PlacementPolicyKind::Default;
        }

        if (replication > 1 && !nodes.empty()) {
            auto primary_it = std::find(nodes.begin(), nodes.end(), assignment.primary);
            size_t primary_idx = static_cast<size_t>(primary_it - nodes.begin());
            for (size_t offset = 1; offset < nodes.size(); ++offset) {
                if (assignment.replica_targets.size() + 1 >= replication) break;
                const NodeId& candidate = nodes[(primary_idx + offset) % nodes.size()];
                if (candidate == assignment.primary) continue;
                if (backend.try_debit(candidate, chunk_size)) {
                    assignment.replica_targets.push_back(candidate);
                }
            }
        }
        decision.chunks.push_back(std::move(assignment));
    }

    // Commit scratch state: capacity debits, cursor, anchors, block map.
    {
        std::lock_guard members_lock(members_mu_);
        for (const auto& [node, debited] : backend.debits()) {
            auto it = members_.find(node);
            if (it != members_.end()) {
                it->second.status.free_bytes -= std::min(it->second.status.free_bytes, debited);
            }
        }
    }
    cursor_ = backend.cursor();
    groups_ = backend.final_groups();

    {
        std::lock_guard file_lock(entry->mu);
        for (const auto& assignment : decision.chunks) {
            Allocation allocation;
            allocation.size = chunk_size;
            allocation.primary = assignment.primary;
            allocation.targets = assignment.replica_targets;
            entry->allocations[assignment.index] = std::move(allocation);
            entry->meta.chunks.push_back(ChunkDescriptor{assignment.index, 0, {}});
        }
        entry->next_chunk_index = first_index + count;
    }

    {
        std::lock_guard counters_lock(counters_mu_);
        counters_.allocations += 1;
        counters_.chunks_allocated += count;
    }
    if (config_.record_placement_log) {
        log_decision(decision, first_index);
    }
    return decision;
}

void MetadataManager::log_decision(const PlacementDecision& decision, uint64_t first_index) {
    std::ostringstream line;
    line << "file=" << decision.file.path << " first=" << first_index
         << " count=" << decision.chunks.size() << " policy="
         << placement_policy_name(decision.policy) << " chunks=[";
    for (size_t i = 0; i < decision.chunks.size(); ++i) {
        const auto& chunk = decision.chunks[i];
        if (i != 0) line << ";";
        line << chunk.index << ":" << chunk.primary.id;
        for (const auto& target : chunk.replica_targets) {
            line << "+" << target.id;
        }
        if (chunk.policy != decision.policy) {
            line << "(" << placement_policy_name(chunk.policy) << ")";
        }
    }
    line << "]";
    std::lock_guard lock(log_mu_);
    placement_log_.push_back(line.str());
}

FileMetadata MetadataManager::commit_chunk(const CommitChunkArgs& args) {
    auto entry = entry_for(args.file);
    std::lock_guard file_lock(entry->mu);

    auto alloc_it = entry->allocations.find(args.index);
    if (alloc_it == entry->allocations.end()) {
        throw_error(ErrorCode::UnknownAllocation,
                    args.file.path + " chunk " + std::to_string(args.index) +
                        " was never allocated");
    }
    Allocation& allocation = alloc_it->second;
    bool in_allocation = allocation.primary == args.node ||
                         std::find(allocation.targets.begin(), allocation.targets.end(),
                                   args.node) != allocation.targets.end();
    if (!in_allocation) {
        throw_error(ErrorCode::UnknownAllocation,
                    args.node.id + " is not part of the allocation for " + args.file.path +
                        " chunk " + std::to_string(args.index));
    }
    if (args.size > allocation.size) {
        throw_error(ErrorCode::InvalidArgument, "committed size exceeds the allocated chunk size");
    }

    ChunkDescriptor& descriptor = entry->meta.chunks.at(args.index);
    if (!allocation.reconciled) {
        // First commit fixes the chunk's actual size; the slack debited at
        // decision time is returned for every node in the allocation.
        uint64_t slack = allocation.size - args.size;
        if (slack > 0) {
            credit(allocation.primary, slack);
            for (const auto& target : allocation.targets) credit(target, slack);
        }
        descriptor.size = args.size;
        allocation.reconciled = true;
    }
    if (allocation.committed.insert(args.node).second) {
        descriptor.replicas.push_back(args.node);
        std::sort(descriptor.replicas.begin(), descriptor.replicas.end());
        entry->commit_log.emplace_back(args.index, args.node);
    }
    return entry->meta;
}

std::vector<std::pair<uint64_t, NodeId>> MetadataManager::commit_log(const FileId& file) {
    auto entry = entry_for(file);
    std::lock_guard file_lock(entry->mu);
    return entry->commit_log;
}

FileMetadata MetadataManager::commit_file(const FileId& file) {
    auto entry = entry_for(file);
    std::lock_guard file_lock(entry->mu);
    if (entry->meta.state == FileState::Committed) {
        return entry->meta;  // idempotent
    }
    for (const auto& chunk : entry->meta.chunks) {
        if (chunk.replicas.empty()) {
            throw_error(ErrorCode::InvalidState,
                        file.path + " chunk " + std::to_string(chunk.index) +
                            " has no committed replica");
        }
    }
    entry->meta.state = FileState::Committed;
    return entry->meta;
}

void MetadataManager::set_xattr(const FileId& file, const Hint& hint) {
    Hint validated = parse_hint(hint.key, hint.value);
    auto entry = entry_for(file);
    {
        std::lock_guard counters_lock(counters_mu_);
        counters_.set_xattr_calls += 1;
    }

    auto apply = [&](std::mutex& mu) {
        std::lock_guard lock(mu);
        int active = xattr_active_.fetch_add(1) + 1;
        int seen = xattr_max_concurrent_.load();
        while (active > seen && !xattr_max_concurrent_.compare_exchange_weak(seen, active)) {
        }
        if (uint32_t hold = xattr_hold_micros_.load(); hold > 0) {
            std::this_thread::sleep_for(std::chrono::microseconds(hold));
        }
        entry->meta.xattrs.set(validated.key, validated.value);
        xattr_active_.fetch_sub(1);
    };

    if (config_.global_xattr_lock) {
        apply(global_xattr_mu_);
    } else {
        apply(entry->mu);
    }
}

std::string MetadataManager::compute_location(const FileMetadata& meta) const {
    std::set<NodeId> nodes;
    for (const auto& chunk : meta.chunks) {
        nodes.insert(chunk.replicas.begin(), chunk.replicas.end());
    }
    std::string out;
    for (const auto& node : nodes) {
        if (!out.empty()) out += ',';
        out += node.id;
    }
    return out;
}

std::string MetadataManager::compute_chunk_locations(const FileMetadata& meta) const {
    std::string out;
    for (size_t i = 0; i < meta.chunks.size(); ++i) {
        if (i != 0) out += ';';
        const auto& replicas = meta.chunks[i].replicas;  // kept sorted
        for (size_t j = 0; j < replicas.size(); ++j) {
            if (j != 0) out += ',';
            out += replicas[j].id;
        }
    }
    return out;
}

std::string MetadataManager::get_xattr(const FileId& file, const std::string& key) {
    auto entry = entry_for(file);
    {
        std::lock_guard counters_lock(counters_mu_);
        counters_.get_xattr_calls += 1;
        if (key == hints::kLocation || key == hints::kLocationChunks) {
            counters_.get_location_calls += 1;
        }
    }
    std::lock_guard file_lock(entry->mu);
    auto computed = computed_attrs_.find(key);
    if (computed != computed_attrs_.end()) {
        return computed->second(entry->meta);
    }
    if (const std::string* value = entry->meta.xattrs.find(key)) {
        return *value;
    }
    if (hints::is_reserved(key)) {
        return "";  // reserved but unset
    }
    throw_error(ErrorCode::UnknownAttribute, key + " on " + file.path);
}

FileMetadata MetadataManager::get_metadata(const FileId& file) {
    auto entry = entry_for(file);
    std::lock_guard file_lock(entry->mu);
    return entry->meta;
}

void MetadataManager::credit(const NodeId& node, uint64_t bytes) {
    std::lock_guard members_lock(members_mu_);
    auto it = members_.find(node);
    if (it == members_.end()) return;
    uint64_t headroom = it->second.status.capacity_bytes - it->second.status.free_bytes;
    it->second.status.free_bytes += std::min(bytes, headroom);
}

void MetadataManager::delete_file(const FileId& file) {
    std::shared_ptr<FileEntry> entry;
    {
        std::lock_guard lock(files_mu_);
        auto it = files_.find(file);
        if (it == files_.end()) {
            throw_error(ErrorCode::UnknownFile, file.path);
        }
        entry = it->second;
        files_.erase(it);
    }

    std::set<NodeId> holders;
    {
        std::lock_guard file_lock(entry->mu);
        entry->meta.state = FileState::Deleted;
        for (auto& [index, allocation] : entry->allocations) {
            uint64_t per_node = allocation.reconciled ? entry->meta.chunks.at(index).size
                                                      : allocation.size;
            credit(allocation.primary, per_node);
            for (const auto& target : allocation.targets) credit(target, per_node);
        }
        for (const auto& chunk : entry->meta.chunks) {
            holders.insert(chunk.replicas.begin(), chunk.replicas.end());
        }
    }

    if (resolver_) {
        for (const auto& node : holders) {
            try {
                resolver_->node(node).delete_chunks(file);
            } catch (const Error&) {
                // best effort: a dead holder reclaims nothing
            }
        }
    }
}

void MetadataManager::node_register(const StorageNodeStatus& status) {
    std::lock_guard lock(members_mu_);
    MemberRecord record;
    record.status = status;
    record.alive = true;
    record.missed = 0;
    members_[status.node] = std::move(record);
}

void MetadataManager::node_heartbeat(const StorageNodeStatus& status) {
    std::lock_guard lock(members_mu_);
    auto it = members_.find(status.node);
    if (it == members_.end()) {
        MemberRecord record;
        record.status = status;
        record.alive = true;
        members_[status.node] = std::move(record);
        return;
    }
    // The manager's capacity view is authoritative once a node is in; a
    // heartbeat only refreshes liveness and the transport address.
    it->second.alive = true;
    it->second.missed = 0;
    it->second.status.address = status.address;
}

void MetadataManager::heartbeat_sweep() {
    std::lock_guard lock(members_mu_);
    for (auto& [id, record] : members_) {
        if (!record.alive) continue;
        record.missed += 1;
        if (record.missed >= config_.heartbeat_misses) {
            record.alive = false;
        }
    }
}

std::vector<NodeInfo> MetadataManager::list_nodes() {
    std::lock_guard lock(members_mu_);
    std::vector<NodeInfo> nodes;
    for (const auto& [id, record] : members_) {
        if (record.alive) {
            nodes.push_back(NodeInfo{id, record.status.address});
        }
    }
    return nodes;
}

ManagerCounters MetadataManager::counters() const {
    std::lock_guard lock(counters_mu_);
    return counters_;
}

std::vector<std::string> MetadataManager::placement_log() const {
    std::lock_guard lock(log_mu_);
    return placement_log_;
}

uint64_t MetadataManager::member_free_bytes(const NodeId& node) const {
    std::lock_guard lock(members_mu_);
    auto it = members_.find(node);
    if (it == members_.end()) {
        throw_error(ErrorCode::Unreachable, node.id + " is not registered");
    }
    return it->second.status.free_bytes;
}

std::vector<StorageNodeStatus> MetadataManager::member_statuses() const {
    std::lock_guard lock(members_mu_);
    std::vector<StorageNodeStatus> out;
    for (const auto& [id, record] : members_) {
        if (record.alive) out.push_back(record.status);
    }
    return out;
}

}  // namespace woss

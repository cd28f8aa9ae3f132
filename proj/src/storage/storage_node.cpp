#include "woss/storage/storage_node.hpp"

#include <algorithm>
#include <thread>

#include "woss/core/checksum.hpp"
#include "woss/core/hints.hpp"

namespace woss {

namespace {

// Scope guard for the foreground-activity gauge.
class ForegroundScope {
public:
    explicit ForegroundScope(std::atomic<int>& gauge) : gauge_(gauge) { gauge_.fetch_add(1); }
    ~ForegroundScope() { gauge_.fetch_sub(1); }

private:
    std::atomic<int>& gauge_;
};

}  // namespace

StorageNode::StorageNode(StorageNodeConfig config, std::unique_ptr<ChunkStore> store)
    : config_(std::move(config)),
      store_(std::move(store)),
      executor_(std::make_shared<InlineExecutor>()) {}

StorageNode::~StorageNode() = default;

void StorageNode::connect(ManagerApi* manager, StorageResolver* peers) {
    manager_ = manager;
    peers_ = peers;
}

void StorageNode::set_executor(std::shared_ptr<ReplicationExecutor> executor) {
    executor_ = std::move(executor);
}

void StorageNode::set_address(std::string address) { address_ = std::move(address); }

StorageNodeStatus StorageNode::status() const {
    StorageNodeStatus s;
    s.node = config_.id;
    s.capacity_bytes = config_.capacity_bytes;
    uint64_t used = const_cast<StorageNode*>(this)->store_->used_bytes();
    s.free_bytes = used >= config_.capacity_bytes ? 0 : config_.capacity_bytes - used;
    s.address = address_;
    return s;
}

void StorageNode::register_with_manager() {
    if (manager_) manager_->node_register(status());
}

void StorageNode::heartbeat() {
    if (manager_) manager_->node_heartbeat(status());
}

void StorageNode::store_chunk(const FileId& file, uint64_t index,
                              std::span<const uint8_t> payload) {
    if (payload.size() > config_.max_chunk_bytes) {
        throw_error(ErrorCode::InvalidArgument,
                    "chunk of " + std::to_string(payload.size()) + " bytes exceeds node limit");
    }
    uint64_t used = store_->used_bytes();
    if (used + payload.size() > config_.capacity_bytes) {
        throw_error(ErrorCode::OutOfSpace,
                    config_.id.id + " has " + std::to_string(config_.capacity_bytes - used) +
                        " bytes free, chunk needs " + std::to_string(payload.size()));
    }
    store_->put(file, index, payload, fnv1a64(payload));
    std::lock_guard lock(counters_mu_);
    counters_.chunks_stored += 1;
}

void StorageNode::commit_to_manager(const FileId& file, uint64_t index, uint64_t size,
                                    uint64_t checksum) {
    if (!manager_) return;
    CommitChunkArgs args;
    args.file = file;
    args.index = index;
    args.size = size;
    args.node = config_.id;
    args.checksum = checksum;
    manager_->commit_chunk(args);
}

bool StorageNode::push_with_retries(const NodeId& target, const ReplicaPushArgs& args) {
    if (!peers_) return false;
    auto backoff = config_.retry_backoff;
    for (uint32_t attempt = 0; attempt <= config_.replication_retries; ++attempt) {
        try {
            peers_->node(target).replica_push(args);
            return true;
        } catch (const Error&) {
            if (attempt == config_.replication_retries) break;
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    return false;
}

void StorageNode::put_chunk(const PutChunkArgs& args) {
    ForegroundScope fg(foreground_active_);

    store_chunk(args.file, args.index, args.payload);
    commit_to_manager(args.file, args.index, args.payload.size(), fnv1a64(args.payload));

    if (args.replica_targets.empty()) return;

    RepSemantics semantics =
        rep_semantics(args.hint_snapshot).value_or(config_.default_semantics);

    if (args.mode == ReplicationMode::LazyChained) {
        // Chained: hand the payload to the first hop; each hop forwards the
        // remainder of the chain after committing locally.
        ReplicaPushArgs push;
        push.file = args.file;
        push.index = args.index;
        push.payload = args.payload;
        push.forward_chain.assign(args.replica_targets.begin() + 1, args.replica_targets.end());
        push.synchronous = semantics == RepSemantics::Pessimistic;
        NodeId first = args.replica_targets.front();
        auto broke = std::make_shared<std::atomic<bool>>(false);
        auto hop = [this, first, broke, push = std::move(push)]() {
            if (!push_with_retries(first, push)) {
                broke->store(true);
                std::lock_guard lock(counters_mu_);
                counters_.chain_breaks += 1;
                counters_.degraded_jobs += 1;
            }
        };
        if (semantics == RepSemantics::Pessimistic) {
            hop();
            if (broke->load()) {
                throw_error(ErrorCode::ReplicationDegraded, "replication chain broke at hop 0");
            }
        } else {
            executor_->run_detached(false, std::move(hop));
        }
        return;
    }

    // Eager parallel: fan out to every target at once, while the file is
    // still being written.
    auto failures = std::make_shared<std::atomic<int>>(0);
    std::vector<std::function<void()>> pushes;
    pushes.reserve(args.replica_targets.size());
    for (const NodeId& target : args.replica_targets) {
        ReplicaPushArgs push;
        push.file = args.file;
        push.index = args.index;
        push.payload = args.payload;
        pushes.push_back([this, target, failures, push = std::move(push)]() {
            if (!push_with_retries(target, push)) {
                failures->fetch_add(1);
            }
        });
    }

    if (semantics == RepSemantics::Pessimistic) {
        executor_->run_all(std::move(pushes));
        if (failures->load() > 0) {
            std::lock_guard lock(counters_mu_);
            counters_.degraded_jobs += 1;
            throw_error(ErrorCode::ReplicationDegraded,
                        std::to_string(failures->load()) + " replica targets unreachable");
        }
    } else {
        // Ack now; one background job fans the pushes out and records
        // degradation once the retries are spent.
        executor_->run_detached(true, [this, failures, pushes = std::move(pushes)]() mutable {
            executor_->run_all(std::move(pushes));
            if (failures->load() > 0) {
                std::lock_guard lock(counters_mu_);
                counters_.degraded_jobs += 1;
            }
        });
    }
}

std::vector<uint8_t> StorageNode::get_chunk(const GetChunkArgs& args) {
    ForegroundScope fg(foreground_active_);

    auto chunk = store_->get(args.file, args.index);
    if (!chunk) {
        throw_error(ErrorCode::NotFound,
                    args.file.path + " chunk " + std::to_string(args.index) + " not on " +
                        config_.id.id);
    }
    if (fnv1a64(chunk->bytes) != chunk->checksum) {
        throw_error(ErrorCode::ChecksumMismatch,
                    args.file.path + " chunk " + std::to_string(args.index) + " on " +
                        config_.id.id);
    }

    bool local = args.requester == config_.id;
    {
        std::lock_guard lock(counters_mu_);
        (local ? counters_.served_reads_local : counters_.served_reads_remote) += 1;
        counters_.served_bytes += chunk->bytes.size();
        auto& per_file = per_file_reads_[args.file];
        (local ? per_file.first : per_file.second) += 1;
    }
    return std::move(chunk->bytes);
}

void StorageNode::replica_push(const ReplicaPushArgs& args) {
    if (int64_t delay = push_delay_ms_.load(); delay > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    store_chunk(args.file, args.index, args.payload);
    commit_to_manager(args.file, args.index, args.payload.size(), fnv1a64(args.payload));

    if (!args.forward_chain.empty()) {
        ReplicaPushArgs next;
        next.file = args.file;
        next.index = args.index;
        next.payload = args.payload;
        next.forward_chain.assign(args.forward_chain.begin() + 1, args.forward_chain.end());
        next.synchronous = args.synchronous;
        NodeId target = args.forward_chain.front();
        auto forward = [this, target, next = std::move(next)]() {
            if (!push_with_retries(target, next)) {
                std::lock_guard lock(counters_mu_);
                counters_.chain_breaks += 1;
            }
        };
        if (args.synchronous) {
            forward();
        } else {
            executor_->run_detached(false, std::move(forward));
        }
    }
}

void StorageNode::delete_chunks(const FileId& file) {
    store_->erase_file(file);
    std::lock_guard lock(counters_mu_);
    per_file_reads_.erase(file);
}

StorageNodeCounters StorageNode::counters() const {
    std::lock_guard lock(counters_mu_);
    return counters_;
}

std::pair<uint64_t, uint64_t> StorageNode::served_reads_for(const FileId& file) const {
    std::lock_guard lock(counters_mu_);
    auto it = per_file_reads_.find(file);
    if (it == per_file_reads_.end()) return {0, 0};
    return it->second;
}

void StorageNode::set_replica_push_delay_for_test(std::chrono::milliseconds delay) {
    push_delay_ms_.store(delay.count());
}

}  // namespace woss

#include "woss/client/client.hpp"

#include <algorithm>
#include <cstring>

#include "woss/core/hints.hpp"

namespace woss {

Client::Client(ClientConfig config, ManagerApi& manager, StorageResolver& nodes)
    : config_(std::move(config)),
      manager_(manager),
      nodes_(nodes),
      rng_(derive_seed(config_.rng_seed, config_.client_node.id)) {}

void Client::meter_xattr() {
    if (meter_) meter_->add_xattr_roundtrip(costs_.xattr_roundtrip);
}

OpenHandle Client::create(const FileId& file, const HintSet& hints_if_create,
                          uint64_t chunk_size_override) {
    FileMetadata meta = manager_.create_file(file, requester(), hints_if_create,
                                             chunk_size_override);
    OpenHandle handle;
    handle.file_ = file;
    handle.mode_ = OpenMode::Write;
    handle.snapshot_ = meta.xattrs;  // snapshot taken once, reused for the handle's lifetime
    handle.chunk_size_ = meta.chunk_size;
    handle.replication_mode_ = config_.replication_mode;
    handle.last_meta_ = meta;
    return handle;
}

OpenHandle Client::open_read(const FileId& file) {
    FileMetadata meta = manager_.get_metadata(file);
    if (meta.state != FileState::Committed) {
        throw_error(ErrorCode::InvalidState,
                    file.path + " is " + std::string(file_state_name(meta.state)) +
                        ", not readable");
    }
    OpenHandle handle;
    handle.file_ = file;
    handle.mode_ = OpenMode::Read;
    handle.snapshot_ = meta.xattrs;
    handle.chunk_size_ = meta.chunk_size;
    handle.file_size_ = meta.total_size();
    handle.chunk_map_ = meta.chunks;
    uint64_t cache_bytes =
        cache_size_bytes(handle.snapshot_).value_or(config_.default_cache_bytes);
    handle.cache_ = std::make_unique<LruChunkCache>(cache_bytes);
    handle.last_meta_ = meta;
    return handle;
}

size_t Client::write(OpenHandle& handle, std::span<const uint8_t> bytes) {
    if (handle.mode_ != OpenMode::Write || handle.closed_) {
        throw_error(ErrorCode::InvalidState, "handle is not open for writing");
    }
    handle.write_buffer_.insert(handle.write_buffer_.end(), bytes.begin(), bytes.end());
    if (handle.write_buffer_.size() >= handle.chunk_size_) {
        flush_chunks(handle, false);
    }
    return bytes.size();
}

void Client::flush_chunks(OpenHandle& handle, bool include_partial) {
    uint64_t chunk_size = handle.chunk_size_;
    uint64_t full = handle.write_buffer_.size() / chunk_size;
    uint64_t count = full;
    if (include_partial && handle.write_buffer_.size() % chunk_size != 0) {
        count += 1;
    }
    if (count == 0) return;

    PlacementDecision decision =
        manager_.allocate_chunks(handle.file_, count, handle.snapshot_, requester());

    for (uint64_t i = 0; i < count; ++i) {
        const ChunkAssignment& assignment = decision.chunks.at(i);
        uint64_t begin = i * chunk_size;
        uint64_t end = std::min<uint64_t>(begin + chunk_size, handle.write_buffer_.size());

        PutChunkArgs args;
        args.file = handle.file_;
        args.index = assignment.index;
        args.hint_snapshot = handle.snapshot_;
        args.requester = requester();
        args.replica_targets = assignment.replica_targets;
        args.mode = handle.replication_mode_;
        args.payload.assign(handle.write_buffer_.begin() + static_cast<ptrdiff_t>(begin),
                            handle.write_buffer_.begin() + static_cast<ptrdiff_t>(end));

        uint32_t attempts = 0;
        for (;;) {
            try {
                nodes_.node(assignment.primary).put_chunk(args);
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Unreachable || attempts >= config_.transport_retries) {
                    throw;
                }
                attempts += 1;
            }
        }
        if (meter_) {
            bool local = assignment.primary == config_.colocated_node;
            meter_->add_write(handle.file_, local, access_ticks(assignment.primary));
        }
        handle.chunks_flushed_ += 1;
    }
    handle.write_buffer_.erase(handle.write_buffer_.begin(),
                               handle.write_buffer_.begin() +
                                   static_cast<ptrdiff_t>(std::min<uint64_t>(
                                       count * chunk_size, handle.write_buffer_.size())));
}

std::vector<uint8_t> Client::fetch_chunk(OpenHandle& handle, const ChunkDescriptor& descriptor) {
    if (handle.cache_) {
        if (const std::vector<uint8_t>* cached = handle.cache_->get(descriptor.index)) {
            if (meter_) meter_->add_cache_hit(handle.file_);
            return *cached;
        }
    }

    GetChunkArgs args;
    args.file = handle.file_;
    args.index = descriptor.index;
    args.requester = requester();

    std::vector<NodeId> candidates = descriptor.replicas;
    bool refreshed = false;
    while (true) {
        if (candidates.empty()) {
            if (refreshed) {
                throw_error(ErrorCode::AllReplicasUnreachable,
                            handle.file_.path + " chunk " + std::to_string(descriptor.index));
            }
            // One metadata refresh: replication may have added replicas
            // since the handle opened.
            FileMetadata meta = manager_.get_metadata(handle.file_);
            if (descriptor.index < meta.chunks.size()) {
                candidates = meta.chunks[descriptor.index].replicas;
            }
            refreshed = true;
            if (candidates.empty()) {
                throw_error(ErrorCode::AllReplicasUnreachable,
                            handle.file_.path + " chunk " + std::to_string(descriptor.index));
            }
        }

        // Local replica first; otherwise a seeded uniform pick keeps load
        // spread across the replica set.
        NodeId chosen;
        auto local_it =
            std::find(candidates.begin(), candidates.end(), config_.colocated_node);
        if (!config_.colocated_node.empty() && local_it != candidates.end()) {
            chosen = *local_it;
        } else {
            chosen = candidates[rng_.bounded(candidates.size())];
        }

        try {
            std::vector<uint8_t> bytes = nodes_.node(chosen).get_chunk(args);
            if (meter_) {
                bool local = chosen == config_.colocated_node;
                meter_->add_read(handle.file_, local, access_ticks(chosen));
            }
            if (handle.cache_) {
                handle.cache_->put(descriptor.index, bytes);
            }
            return bytes;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Unreachable && e.code() != ErrorCode::NotFound) {
                throw;
            }
            candidates.erase(std::remove(candidates.begin(), candidates.end(), chosen),
                             candidates.end());
        }
    }
}

std::vector<uint8_t> Client::read(OpenHandle& handle, uint64_t offset, uint64_t length) {
    if (handle.mode_ != OpenMode::Read || handle.closed_) {
        throw_error(ErrorCode::InvalidState, "handle is not open for reading");
    }
    if (offset + length > handle.file_size_) {
        throw_error(ErrorCode::RangeError,
                    "read [" + std::to_string(offset) + ", " + std::to_string(offset + length) +
                        ") beyond size " + std::to_string(handle.file_size_));
    }
    std::vector<uint8_t> out;
    out.reserve(length);
    uint64_t chunk_size = handle.chunk_size_;
    uint64_t position = offset;
    while (position < offset + length) {
        uint64_t chunk_index = position / chunk_size;
        const ChunkDescriptor& descriptor = handle.chunk_map_.at(chunk_index);
        std::vector<uint8_t> chunk = fetch_chunk(handle, descriptor);
        uint64_t within = position - chunk_index * chunk_size;
        uint64_t take = std::min<uint64_t>(chunk.size() - within, offset + length - position);
        out.insert(out.end(), chunk.begin() + static_cast<ptrdiff_t>(within),
                   chunk.begin() + static_cast<ptrdiff_t>(within + take));
        position += take;
    }
    return out;
}

std::vector<uint8_t> Client::read_all(OpenHandle& handle) {
    return read(handle, 0, handle.file_size_);
}

FileMetadata Client::close(OpenHandle& handle) {
    if (handle.closed_) {
        return handle.last_meta_;  // idempotent
    }
    if (handle.mode_ == OpenMode::Write) {
        flush_chunks(handle, true);
        handle.last_meta_ = manager_.commit_file(handle.file_);
    } else if (handle.cache_) {
        handle.cache_->clear();
    }
    handle.closed_ = true;
    return handle.last_meta_;
}

void Client::set_xattr(const FileId& file, const Hint& hint) {
    manager_.set_xattr(file, hint);
    meter_xattr();
}

std::string Client::get_xattr(const FileId& file, const std::string& key) {
    std::string value = manager_.get_xattr(file, key);
    meter_xattr();
    return value;
}

FileMetadata Client::stat(const FileId& file) { return manager_.get_metadata(file); }

void Client::remove(const FileId& file) { manager_.delete_file(file); }

}  // namespace woss

#include "woss/net/remote.hpp"

#include "woss/core/frame.hpp"
#include "woss/net/proto.hpp"

namespace woss::net {

std::vector<uint8_t> FrameChannel::call(Opcode op, const FileId& file, const HintSet& hints,
                                        std::vector<uint8_t> payload) {
    std::lock_guard lock(mu_);
    TaggedRequest request;
    request.opcode = op;
    request.file = file;
    request.hint_snapshot = hints;
    request.payload = std::move(payload);

    for (int attempt = 0; attempt < 2; ++attempt) {
        if (!conn_.open()) {
            conn_ = FrameConn::connect(endpoint_);
            next_request_id_ = 1;
        }
        request.request_id = next_request_id_;
        try {
            conn_.send_bytes(encode_frame(request));
            std::vector<uint8_t> raw = conn_.recv_frame();
            next_request_id_ += 1;
            ResponseFrame response = decode_response(raw);
            if (response.status != ErrorCode::Ok) {
                throw Error(response.status,
                            std::string(response.payload.begin(), response.payload.end()));
            }
            return std::move(response.payload);
        } catch (const Error& e) {
            // One reconnect attempt on transport failure; everything else
            // is the peer's verdict and propagates.
            if (e.code() == ErrorCode::Unreachable && attempt == 0) {
                conn_.close();
                continue;
            }
            throw;
        }
    }
    throw_error(ErrorCode::Unreachable, "unreachable endpoint " + endpoint_);
}

namespace {

wire::Reader reader_over(const std::vector<uint8_t>& bytes) {
    return wire::Reader(std::span<const uint8_t>(bytes.data(), bytes.size()));
}

}  // namespace

FileMetadata RemoteManager::create_file(const FileId& file, const NodeId& creator,
                                        const HintSet& initial_hints,
                                        uint64_t chunk_size_override) {
    auto payload = channel_.call(Opcode::CreateFile, file, initial_hints,
                                 proto::encode_create(creator, chunk_size_override));
    auto r = reader_over(payload);
    return proto::decode_metadata(r);
}

PlacementDecision RemoteManager::allocate_chunks(const FileId& file, uint64_t count,
                                                 const HintSet& hint_snapshot,
                                                 const NodeId& requester) {
    auto payload = channel_.call(Opcode::AllocateChunks, file, hint_snapshot,
                                 proto::encode_allocate(count, requester));
    auto r = reader_over(payload);
    return proto::decode_decision(r);
}

FileMetadata RemoteManager::commit_chunk(const CommitChunkArgs& args) {
    auto payload = channel_.call(Opcode::CommitChunk, args.file, HintSet{},
                                 proto::encode_commit_chunk(args));
    auto r = reader_over(payload);
    return proto::decode_metadata(r);
}

FileMetadata RemoteManager::commit_file(const FileId& file) {
    auto payload = channel_.call(Opcode::CommitFile, file, HintSet{}, {});
    auto r = reader_over(payload);
    return proto::decode_metadata(r);
}

void RemoteManager::set_xattr(const FileId& file, const Hint& hint) {
    channel_.call(Opcode::SetXattr, file, HintSet{}, proto::encode_hint(hint));
}

std::string RemoteManager::get_xattr(const FileId& file, const std::string& key) {
    auto payload = channel_.call(Opcode::GetXattr, file, HintSet{}, proto::encode_key(key));
    auto r = reader_over(payload);
    return proto::decode_value(r);
}

FileMetadata RemoteManager::get_metadata(const FileId& file) {
    auto payload = channel_.call(Opcode::GetMetadata, file, HintSet{}, {});
    auto r = reader_over(payload);
    return proto::decode_metadata(r);
}

void RemoteManager::delete_file(const FileId& file) {
    channel_.call(Opcode::DeleteFile, file, HintSet{}, {});
}

void RemoteManager::node_register(const StorageNodeStatus& status) {
    channel_.call(Opcode::NodeRegister, FileId{}, HintSet{}, proto::encode_status(status));
}

void RemoteManager::node_heartbeat(const StorageNodeStatus& status) {
    channel_.call(Opcode::NodeHeartbeat, FileId{}, HintSet{}, proto::encode_status(status));
}

std::vector<NodeInfo> RemoteManager::list_nodes() {
    auto payload = channel_.call(Opcode::ListNodes, FileId{}, HintSet{}, {});
    auto r = reader_over(payload);
    return proto::decode_node_list(r);
}

void RemoteStorage::put_chunk(const PutChunkArgs& args) {
    channel_.call(Opcode::PutChunk, args.file, args.hint_snapshot,
                  proto::encode_put_chunk(args));
}

std::vector<uint8_t> RemoteStorage::get_chunk(const GetChunkArgs& args) {
    return channel_.call(Opcode::GetChunk, args.file, HintSet{}, proto::encode_get_chunk(args));
}

void RemoteStorage::replica_push(const ReplicaPushArgs& args) {
    channel_.call(Opcode::ReplicaPush, args.file, HintSet{}, proto::encode_replica_push(args));
}

void RemoteStorage::delete_chunks(const FileId& file) {
    channel_.call(Opcode::DeleteChunks, file, HintSet{}, {});
}

StorageApi& RemoteResolver::node(const NodeId& id) {
    {
        std::lock_guard lock(mu_);
        auto it = channels_.find(id);
        if (it != channels_.end()) return *it->second;
    }
    // Miss: refresh the node table from the manager.
    for (const auto& info : manager_.list_nodes()) {
        if (info.node == id) {
            if (info.address.empty()) {
                throw_error(ErrorCode::Unreachable, id.id + " has no transport address");
            }
            std::lock_guard lock(mu_);
            auto [it, inserted] =
                channels_.emplace(id, std::make_unique<RemoteStorage>(info.address));
            return *it->second;
        }
    }
    throw_error(ErrorCode::Unreachable, id.id + " is not in the manager's node table");
}

}  // namespace woss::net

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "woss/core/frame.hpp"
#include "woss/core/services.hpp"
#include "woss/net/frame_socket.hpp"

namespace woss::net {

// One request/response channel to a frame-protocol peer. Reconnects lazily
// after transport failures; one request in flight at a time.
class FrameChannel {
public:
    explicit FrameChannel(std::string endpoint) : endpoint_(std::move(endpoint)) {}

    // Sends the request (stamping a fresh per-connection id) and decodes
    // the response, converting error statuses back into thrown Errors.
    std::vector<uint8_t> call(Opcode op, const FileId& file, const HintSet& hints,
                              std::vector<uint8_t> payload);

    const std::string& endpoint() const noexcept { return endpoint_; }

private:
    std::string endpoint_;
    std::mutex mu_;
    FrameConn conn_;
    uint64_t next_request_id_ = 1;
};

class RemoteManager : public ManagerApi {
public:
    explicit RemoteManager(std::string endpoint) : channel_(std::move(endpoint)) {}

    FileMetadata create_file(const FileId& file, const NodeId& creator,
                             const HintSet& initial_hints,
                             uint64_t chunk_size_override) override;
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

private:
    FrameChannel channel_;
};

class RemoteStorage : public StorageApi {
public:
    explicit RemoteStorage(std::string endpoint) : channel_(std::move(endpoint)) {}

    void put_chunk(const PutChunkArgs& args) override;
    std::vector<uint8_t> get_chunk(const GetChunkArgs& args) override;
    void replica_push(const ReplicaPushArgs& args) override;
    void delete_chunks(const FileId& file) override;

private:
    FrameChannel channel_;
};

// Resolves node ids to TCP channels using the manager's node table.
class RemoteResolver : public StorageResolver {
public:
    explicit RemoteResolver(ManagerApi& manager) : manager_(manager) {}

    StorageApi& node(const NodeId& id) override;

private:
    ManagerApi& manager_;
    std::mutex mu_;
    std::map<NodeId, std::unique_ptr<RemoteStorage>> channels_;
};

}  // namespace woss::net

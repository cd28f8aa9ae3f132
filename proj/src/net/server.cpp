#include "woss/net/server.hpp"

#include <sys/socket.h>

#include "woss/net/proto.hpp"

namespace woss::net {

FrameServer::FrameServer(const std::string& listen_endpoint, Handler handler)
    : listener_(TcpListener::bind(listen_endpoint)), handler_(std::move(handler)) {}

FrameServer::~FrameServer() { stop(); }

void FrameServer::start() {
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void FrameServer::stop() {
    if (stopping_.exchange(true)) return;
    listener_.close();
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> drains;
    {
        std::lock_guard lock(conn_mu_);
        // Connections sit in blocking reads; shutting the sockets down
        // unblocks them so the threads can exit.
        for (int fd : active_fds_) {
            ::shutdown(fd, SHUT_RDWR);
        }
        drains.swap(conn_threads_);
    }
    for (auto& t : drains) {
        if (t.joinable()) t.join();
    }
}

void FrameServer::accept_loop() {
    while (!stopping_.load()) {
        int fd = listener_.accept_fd();
        if (fd < 0) {
            if (stopping_.load()) return;
            continue;
        }
        std::lock_guard lock(conn_mu_);
        conn_threads_.emplace_back([this, fd] { serve_connection(fd); });
    }
}

void FrameServer::serve_connection(int fd) {
    FrameConn conn(fd);
    {
        std::lock_guard lock(conn_mu_);
        active_fds_.insert(fd);
    }
    // Deregisters before the connection closes, so stop() never touches a
    // recycled descriptor.
    struct Deregister {
        FrameServer* server;
        int fd;
        ~Deregister() {
            std::lock_guard lock(server->conn_mu_);
            server->active_fds_.erase(fd);
        }
    } deregister{this, fd};

    while (!stopping_.load()) {
        TaggedRequest request;
        try {
            std::vector<uint8_t> raw = conn.recv_frame();
            request = decode_frame(raw);
        } catch (const Error&) {
            return;  // hangup or garbage framing; drop the connection
        }

        ResponseFrame response;
        response.request_id = request.request_id;
        try {
            response.payload = handler_(request);
            response.status = ErrorCode::Ok;
        } catch (const Error& e) {
            response.status = e.code();
            std::string message = e.what();
            response.payload.assign(message.begin(), message.end());
        } catch (const std::exception& e) {
            response.status = ErrorCode::IoError;
            std::string message = e.what();
            response.payload.assign(message.begin(), message.end());
        }
        try {
            conn.send_bytes(encode_response(response));
        } catch (const Error&) {
            return;
        }
    }
}

FrameServer::Handler manager_handler(ManagerApi& manager) {
    return [&manager](const TaggedRequest& request) -> std::vector<uint8_t> {
        wire::Reader r(std::span<const uint8_t>(request.payload.data(), request.payload.size()));
        switch (request.opcode) {
            case Opcode::Ping:
                return {};
            case Opcode::CreateFile: {
                NodeId creator;
                uint64_t chunk_size_override = 0;
                proto::decode_create(r, creator, chunk_size_override);
                FileMetadata meta = manager.create_file(request.file, creator,
                                                        request.hint_snapshot,
                                                        chunk_size_override);
                return proto::encode_metadata(meta);
            }
            case Opcode::AllocateChunks: {
                uint64_t count = 0;
                NodeId requester;
                proto::decode_allocate(r, count, requester);
                PlacementDecision decision =
                    manager.allocate_chunks(request.file, count, request.hint_snapshot,
                                            requester);
                return proto::encode_decision(decision);
            }
            case Opcode::CommitChunk: {
                CommitChunkArgs args = proto::decode_commit_chunk(r, request.file);
                return proto::encode_metadata(manager.commit_chunk(args));
            }
            case Opcode::CommitFile:
                return proto::encode_metadata(manager.commit_file(request.file));
            case Opcode::SetXattr: {
                Hint hint = proto::decode_hint(r);
                manager.set_xattr(request.file, hint);
                return {};
            }
            case Opcode::GetXattr: {
                std::string key = proto::decode_key(r);
                return proto::encode_value(manager.get_xattr(request.file, key));
            }
            case Opcode::GetMetadata:
                return proto::encode_metadata(manager.get_metadata(request.file));
            case Opcode::DeleteFile:
                manager.delete_file(request.file);
                return {};
            case Opcode::NodeRegister:
                manager.node_register(proto::decode_status(r));
                return {};
            case Opcode::NodeHeartbeat:
                manager.node_heartbeat(proto::decode_status(r));
                return {};
            case Opcode::ListNodes:
                return proto::encode_node_list(manager.list_nodes());
            default:
                throw_error(ErrorCode::InvalidArgument,
                            "manager cannot serve opcode " +
                                std::string(opcode_name(request.opcode)));
        }
    };
}

FrameServer::Handler storage_handler(StorageApi& node) {
    return [&node](const TaggedRequest& request) -> std::vector<uint8_t> {
        wire::Reader r(std::span<const uint8_t>(request.payload.data(), request.payload.size()));
        switch (request.opcode) {
            case Opcode::Ping:
                return {};
            case Opcode::PutChunk: {
                PutChunkArgs args =
                    proto::decode_put_chunk(r, request.file, request.hint_snapshot);
                node.put_chunk(args);
                return {};
            }
            case Opcode::GetChunk: {
                GetChunkArgs args = proto::decode_get_chunk(r, request.file);
                return node.get_chunk(args);
            }
            case Opcode::ReplicaPush: {
                ReplicaPushArgs args = proto::decode_replica_push(r, request.file);
                node.replica_push(args);
                return {};
            }
            case Opcode::DeleteChunks:
                node.delete_chunks(request.file);
                return {};
            default:
                throw_error(ErrorCode::InvalidArgument,
                            "storage node cannot serve opcode " +
                                std::string(opcode_name(request.opcode)));
        }
    };
}

}  // namespace woss::net

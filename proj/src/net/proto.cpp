#include "woss/net/proto.hpp"

namespace woss::net::proto {

using wire::put_bytes;
using wire::put_string;
using wire::put_u16;
using wire::put_u64;
using wire::put_u8;

std::vector<uint8_t> encode_create(const NodeId& creator, uint64_t chunk_size_override) {
    std::vector<uint8_t> out;
    put_string(out, creator.id);
    put_u64(out, chunk_size_override);
    return out;
}

void decode_create(wire::Reader& r, NodeId& creator, uint64_t& chunk_size_override) {
    creator.id = r.string();
    chunk_size_override = r.u64();
}

std::vector<uint8_t> encode_allocate(uint64_t count, const NodeId& requester) {
    std::vector<uint8_t> out;
    put_u64(out, count);
    put_string(out, requester.id);
    return out;
}

void decode_allocate(wire::Reader& r, uint64_t& count, NodeId& requester) {
    count = r.u64();
    requester.id = r.string();
}

std::vector<uint8_t> encode_commit_chunk(const CommitChunkArgs& args) {
    std::vector<uint8_t> out;
    put_u64(out, args.index);
    put_u64(out, args.size);
    put_string(out, args.node.id);
    put_u64(out, args.checksum);
    return out;
}

CommitChunkArgs decode_commit_chunk(wire::Reader& r, const FileId& file) {
    CommitChunkArgs args;
    args.file = file;
    args.index = r.u64();
    args.size = r.u64();
    args.node.id = r.string();
    args.checksum = r.u64();
    return args;
}

std::vector<uint8_t> encode_hint(const Hint& hint) {
    std::vector<uint8_t> out;
    put_string(out, hint.key);
    put_string(out, hint.value);
    return out;
}

Hint decode_hint(wire::Reader& r) {
    Hint hint;
    hint.key = r.string();
    hint.value = r.string();
    return hint;
}

std::vector<uint8_t> encode_key(const std::string& key) {
    std::vector<uint8_t> out;
    put_string(out, key);
    return out;
}

std::string decode_key(wire::Reader& r) { return r.string(); }

std::vector<uint8_t> encode_status(const StorageNodeStatus& status) {
    std::vector<uint8_t> out;
    put_string(out, status.node.id);
    put_u64(out, status.capacity_bytes);
    put_u64(out, status.free_bytes);
    put_string(out, status.address);
    return out;
}

StorageNodeStatus decode_status(wire::Reader& r) {
    StorageNodeStatus status;
    status.node.id = r.string();
    status.capacity_bytes = r.u64();
    status.free_bytes = r.u64();
    status.address = r.string();
    return status;
}

std::vector<uint8_t> encode_put_chunk(const PutChunkArgs& args) {
    std::vector<uint8_t> out;
    put_u64(out, args.index);
    put_string(out, args.requester.id);
    put_u8(out, static_cast<uint8_t>(args.mode));
    put_u16(out, static_cast<uint16_t>(args.replica_targets.size()));
    for (const auto& target : args.replica_targets) put_string(out, target.id);
    put_bytes(out, args.payload);
    return out;
}

PutChunkArgs decode_put_chunk(wire::Reader& r, const FileId& file, const HintSet& hints) {
    PutChunkArgs args;
    args.file = file;
    args.hint_snapshot = hints;
    args.index = r.u64();
    args.requester.id = r.string();
    args.mode = static_cast<ReplicationMode>(r.u8());
    uint16_t targets = r.u16();
    for (uint16_t i = 0; i < targets; ++i) {
        args.replica_targets.emplace_back(r.string());
    }
    args.payload = r.rest();
    return args;
}

std::vector<uint8_t> encode_get_chunk(const GetChunkArgs& args) {
    std::vector<uint8_t> out;
    put_u64(out, args.index);
    put_string(out, args.requester.id);
    return out;
}

GetChunkArgs decode_get_chunk(wire::Reader& r, const FileId& file) {
    GetChunkArgs args;
    args.file = file;
    args.index = r.u64();
    args.requester.id = r.string();
    return args;
}

std::vector<uint8_t> encode_replica_push(const ReplicaPushArgs& args) {
    std::vector<uint8_t> out;
    put_u64(out, args.index);
    put_u8(out, args.synchronous ? 1 : 0);
    put_u16(out, static_cast<uint16_t>(args.forward_chain.size()));
    for (const auto& node : args.forward_chain) put_string(out, node.id);
    put_bytes(out, args.payload);
    return out;
}

ReplicaPushArgs decode_replica_push(wire::Reader& r, const FileId& file) {
    ReplicaPushArgs args;
    args.file = file;
    args.index = r.u64();
    args.synchronous = r.u8() != 0;
    uint16_t chain = r.u16();
    for (uint16_t i = 0; i < chain; ++i) {
        args.forward_chain.emplace_back(r.string());
    }
    args.payload = r.rest();
    return args;
}

std::vector<uint8_t> encode_metadata(const FileMetadata& meta) {
    std::vector<uint8_t> out;
    put_string(out, meta.file.path);
    put_u64(out, meta.chunk_size);
    put_u8(out, static_cast<uint8_t>(meta.state));
    put_u16(out, static_cast<uint16_t>(meta.xattrs.size()));
    for (const auto& [key, value] : meta.xattrs.entries()) {
        put_string(out, key);
        put_string(out, value);
    }
    put_u64(out, meta.chunks.size());
    for (const auto& chunk : meta.chunks) {
        put_u64(out, chunk.index);
        put_u64(out, chunk.size);
        put_u16(out, static_cast<uint16_t>(chunk.replicas.size()));
        for (const auto& replica : chunk.replicas) put_string(out, replica.id);
    }
    return out;
}

FileMetadata decode_metadata(wire::Reader& r) {
    FileMetadata meta;
    meta.file.path = r.string();
    meta.chunk_size = r.u64();
    meta.state = static_cast<FileState>(r.u8());
    uint16_t xattrs = r.u16();
    for (uint16_t i = 0; i < xattrs; ++i) {
        std::string key = r.string();
        std::string value = r.string();
        meta.xattrs.set(std::move(key), std::move(value));
    }
    uint64_t chunks = r.u64();
    for (uint64_t i = 0; i < chunks; ++i) {
        ChunkDescriptor chunk;
        chunk.index = r.u64();
        chunk.size = r.u64();
        uint16_t replicas = r.u16();
        for (uint16_t j = 0; j < replicas; ++j) {
            chunk.replicas.emplace_back(r.string());
        }
        meta.chunks.push_back(std::move(chunk));
    }
    return meta;
}

std::vector<uint8_t> encode_decision(const PlacementDecision& decision) {
    std::vector<uint8_t> out;
    put_string(out, decision.file.path);
    put_u8(out, static_cast<uint8_t>(decision.policy));
    put_u64(out, decision.chunks.size());
    for (const auto& chunk : decision.chunks) {
        put_u64(out, chunk.index);
        put_string(out, chunk.primary.id);
        put_u8(out, static_cast<uint8_t>(chunk.policy));
        put_u16(out, static_cast<uint16_t>(chunk.replica_targets.size()));
        for (const auto& target : chunk.replica_targets) put_string(out, target.id);
    }
    return out;
}

PlacementDecision decode_decision(wire::Reader& r) {
    PlacementDecision decision;
    decision.file.path = r.string();
    decision.policy = static_cast<PlacementPolicyKind>(r.u8());
    uint64_t chunks = r.u64();
    for (uint64_t i = 0; i < chunks; ++i) {
        ChunkAssignment chunk;
        chunk.index = r.u64();
        chunk.primary.id = r.string();
        chunk.policy = static_cast<PlacementPolicyKind>(r.u8());
        uint16_t targets = r.u16();
        for (uint16_t j = 0; j < targets; ++j) {
            chunk.replica_targets.emplace_back(r.string());
        }
        decision.chunks.push_back(std::move(chunk));
    }
    return decision;
}

std::vector<uint8_t> encode_node_list(const std::vector<NodeInfo>& nodes) {
    std::vector<uint8_t> out;
    put_u16(out, static_cast<uint16_t>(nodes.size()));
    for (const auto& node : nodes) {
        put_string(out, node.node.id);
        put_string(out, node.address);
    }
    return out;
}

std::vector<NodeInfo> decode_node_list(wire::Reader& r) {
    std::vector<NodeInfo> nodes;
    uint16_t count = r.u16();
    for (uint16_t i = 0; i < count; ++i) {
        NodeInfo info;
        info.node.id = r.string();
        info.address = r.string();
        nodes.push_back(std::move(info));
    }
    return nodes;
}

std::vector<uint8_t> encode_value(const std::string& value) {
    std::vector<uint8_t> out;
    put_string(out, value);
    return out;
}

std::string decode_value(wire::Reader& r) { return r.string(); }

}  // namespace woss::net::proto

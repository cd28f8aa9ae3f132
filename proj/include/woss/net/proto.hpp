#pragma once

#include <vector>

#include "woss/core/frame.hpp"
#include "woss/core/services.hpp"

namespace woss::net::proto {

// Op payload codecs. The frame header already carries the opcode, file id,
// hint snapshot, and request id; these handle everything op-specific.

// CreateFile: [str creator][u64 chunkSizeOverride]
std::vector<uint8_t> encode_create(const NodeId& creator, uint64_t chunk_size_override);
void decode_create(wire::Reader& r, NodeId& creator, uint64_t& chunk_size_override);

// AllocateChunks: [u64 count][str requester]
std::vector<uint8_t> encode_allocate(uint64_t count, const NodeId& requester);
void decode_allocate(wire::Reader& r, uint64_t& count, NodeId& requester);

// CommitChunk: [u64 index][u64 size][str node][u64 checksum]
std::vector<uint8_t> encode_commit_chunk(const CommitChunkArgs& args);
CommitChunkArgs decode_commit_chunk(wire::Reader& r, const FileId& file);

// SetXattr: [str key][str value]; GetXattr: [str key]
std::vector<uint8_t> encode_hint(const Hint& hint);
Hint decode_hint(wire::Reader& r);
std::vector<uint8_t> encode_key(const std::string& key);
std::string decode_key(wire::Reader& r);

// NodeRegister / NodeHeartbeat: status
std::vector<uint8_t> encode_status(const StorageNodeStatus& status);
StorageNodeStatus decode_status(wire::Reader& r);

// PutChunk: [u64 index][str requester][u8 mode][u16 targetCount][str]*[bytes payload]
std::vector<uint8_t> encode_put_chunk(const PutChunkArgs& args);
PutChunkArgs decode_put_chunk(wire::Reader& r, const FileId& file, const HintSet& hints);

// GetChunk: [u64 index][str requester]
std::vector<uint8_t> encode_get_chunk(const GetChunkArgs& args);
GetChunkArgs decode_get_chunk(wire::Reader& r, const FileId& file);

// ReplicaPush: [u64 index][u8 synchronous][u16 chainCount][str]*[bytes payload]
std::vector<uint8_t> encode_replica_push(const ReplicaPushArgs& args);
ReplicaPushArgs decode_replica_push(wire::Reader& r, const FileId& file);

// Response payloads.
std::vector<uint8_t> encode_metadata(const FileMetadata& meta);
FileMetadata decode_metadata(wire::Reader& r);
std::vector<uint8_t> encode_decision(const PlacementDecision& decision);
PlacementDecision decode_decision(wire::Reader& r);
std::vector<uint8_t> encode_node_list(const std::vector<NodeInfo>& nodes);
std::vector<NodeInfo> decode_node_list(wire::Reader& r);
std::vector<uint8_t> encode_value(const std::string& value);
std::string decode_value(wire::Reader& r);

}  // namespace woss::net::proto

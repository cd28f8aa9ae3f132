#include "woss/core/frame.hpp"

#include <cstring>

namespace woss {

std::string_view opcode_name(Opcode op) {
    switch (op) {
        case Opcode::Ping: return "Ping";
        case Opcode::CreateFile: return "CreateFile";
        case Opcode::AllocateChunks: return "AllocateChunks";
        case Opcode::CommitChunk: return "CommitChunk";
        case Opcode::CommitFile: return "CommitFile";
        case Opcode::SetXattr: return "SetXattr";
        case Opcode::GetXattr: return "GetXattr";
        case Opcode::DeleteFile: return "DeleteFile";
        case Opcode::NodeRegister: return "NodeRegister";
        case Opcode::NodeHeartbeat: return "NodeHeartbeat";
        case Opcode::GetMetadata: return "GetMetadata";
        case Opcode::ListNodes: return "ListNodes";
        case Opcode::PutChunk: return "PutChunk";
        case Opcode::GetChunk: return "GetChunk";
        case Opcode::ReplicaPush: return "ReplicaPush";
        case Opcode::DeleteChunks: return "DeleteChunks";
    }
    return "Unknown";
}

namespace wire {

void put_u8(std::vector<uint8_t>& buf, uint8_t v) { buf.push_back(v); }

void put_u16(std::vector<uint8_t>& buf, uint16_t v) {
    buf.push_back(static_cast<uint8_t>(v));
    buf.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& buf, uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        buf.push_back(static_cast<uint8_t>(v >> shift));
    }
}

void put_u64(std::vector<uint8_t>& buf, uint64_t v) {
    for (int shift = 0; shift < 64; shift += 8) {
        buf.push_back(static_cast<uint8_t>(v >> shift));
    }
}

void put_string(std::vector<uint8_t>& buf, std::string_view s) {
    put_u32(buf, static_cast<uint32_t>(s.size()));
    buf.insert(buf.end(), s.begin(), s.end());
}

void put_bytes(std::vector<uint8_t>& buf, std::span<const uint8_t> bytes) {
    buf.insert(buf.end(), bytes.begin(), bytes.end());
}

void Reader::need(size_t count) const {
    if (pos_ + count > data_.size()) {
        throw_error(ErrorCode::TruncatedFrame, "frame body ends mid-field");
    }
}

uint8_t Reader::u8() {
    need(1);
    return data_[pos_++];
}

uint16_t Reader::u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_]) |
                 static_cast<uint16_t>(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
}

uint32_t Reader::u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
}

uint64_t Reader::u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
}

std::string Reader::string() {
    uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
    pos_ += len;
    return s;
}

std::vector<uint8_t> Reader::bytes(size_t count) {
    need(count);
    std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + count);
    pos_ += count;
    return out;
}

std::vector<uint8_t> Reader::rest() { return bytes(remaining()); }

}  // namespace wire

namespace {

// Prepends the u32 length header to an assembled frame body.
std::vector<uint8_t> seal(std::vector<uint8_t> body) {
    if (body.size() > kMaxFrameBytes) {
        throw_error(ErrorCode::FrameTooLarge,
                    "frame body of " + std::to_string(body.size()) + " bytes exceeds cap");
    }
    std::vector<uint8_t> out;
    out.reserve(4 + body.size());
    wire::put_u32(out, static_cast<uint32_t>(body.size()));
    wire::put_bytes(out, body);
    return out;
}

// Strips and validates the length header, returning the body span.
std::span<const uint8_t> unseal(std::span<const uint8_t> bytes) {
    if (bytes.size() < 4) {
        throw_error(ErrorCode::TruncatedFrame, "frame shorter than its length header");
    }
    wire::Reader header(bytes.subspan(0, 4));
    uint32_t len = header.u32();
    if (len > kMaxFrameBytes) {
        throw_error(ErrorCode::FrameTooLarge,
                    "declared frame length " + std::to_string(len) + " exceeds cap");
    }
    if (bytes.size() - 4 < len) {
        throw_error(ErrorCode::TruncatedFrame, "frame body shorter than declared length");
    }
    return bytes.subspan(4, len);
}

}  // namespace

std::vector<uint8_t> encode_frame(const TaggedRequest& req) {
    std::vector<uint8_t> body;
    body.reserve(32 + req.file.path.size() + req.payload.size());
    wire::put_u8(body, kProtocolVersion);
    wire::put_u8(body, static_cast<uint8_t>(req.opcode));
    wire::put_u64(body, req.request_id);
    wire::put_string(body, req.file.path);
    wire::put_u16(body, static_cast<uint16_t>(req.hint_snapshot.size()));
    for (const auto& [key, value] : req.hint_snapshot.entries()) {
        wire::put_string(body, key);
        wire::put_string(body, value);
    }
    wire::put_bytes(body, req.payload);
    return seal(std::move(body));
}

TaggedRequest decode_frame(std::span<const uint8_t> bytes) {
    wire::Reader r(unseal(bytes));
    uint8_t version = r.u8();
    if (version != kProtocolVersion) {
        throw_error(ErrorCode::VersionMismatch,
                    "frame version " + std::to_string(version) + ", expected " +
                        std::to_string(kProtocolVersion));
    }
    TaggedRequest req;
    req.opcode = static_cast<Opcode>(r.u8());
    req.request_id = r.u64();
    req.file.path = r.string();
    uint16_t hint_count = r.u16();
    for (uint16_t i = 0; i < hint_count; ++i) {
        std::string key = r.string();
        std::string value = r.string();
        req.hint_snapshot.set(std::move(key), std::move(value));
    }
    req.payload = r.rest();
    return req;
}

std::vector<uint8_t> encode_response(const ResponseFrame& resp) {
    std::vector<uint8_t> body;
    body.reserve(16 + resp.payload.size());
    wire::put_u8(body, kProtocolVersion);
    wire::put_u8(body, static_cast<uint8_t>(resp.status));
    wire::put_u64(body, resp.request_id);
    wire::put_bytes(body, resp.payload);
    return seal(std::move(body));
}

ResponseFrame decode_response(std::span<const uint8_t> bytes) {
    wire::Reader r(unseal(bytes));
    uint8_t version = r.u8();
    if (version != kProtocolVersion) {
        throw_error(ErrorCode::VersionMismatch,
                    "response version " + std::to_string(version) + ", expected " +
                        std::to_string(kProtocolVersion));
    }
    ResponseFrame resp;
    resp.status = error_code_from_byte(r.u8());
    resp.request_id = r.u64();
    resp.payload = r.rest();
    return resp;
}

}  // namespace woss

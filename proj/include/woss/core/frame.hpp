#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "woss/core/errors.hpp"
#include "woss/core/types.hpp"

namespace woss {

inline constexpr uint8_t kProtocolVersion = 1;
inline constexpr uint32_t kMaxFrameBytes = 64u << 20;  // cap on the length field

// Protocol operations. Values are wire-stable.
enum class Opcode : uint8_t {
    Ping = 0,
    CreateFile = 1,
    AllocateChunks = 2,
    CommitChunk = 3,
    CommitFile = 4,
    SetXattr = 5,
    GetXattr = 6,
    DeleteFile = 7,
    NodeRegister = 8,
    NodeHeartbeat = 9,
    GetMetadata = 10,
    ListNodes = 11,
    PutChunk = 12,
    GetChunk = 13,
    ReplicaPush = 14,
    DeleteChunks = 15,
};

std::string_view opcode_name(Opcode op);

// Every request carries the sender's cached hint snapshot for the file it
// touches, so any component on the path can trigger hint-directed handling
// without a metadata round trip.
struct TaggedRequest {
    Opcode opcode = Opcode::Ping;
    FileId file;
    HintSet hint_snapshot;
    std::vector<uint8_t> payload;
    uint64_t request_id = 0;  // monotone per connection

    auto operator<=>(const TaggedRequest&) const = default;
};

struct ResponseFrame {
    ErrorCode status = ErrorCode::Ok;
    uint64_t request_id = 0;
    std::vector<uint8_t> payload;  // error message bytes when status != Ok

    auto operator<=>(const ResponseFrame&) const = default;
};

// Wire layout (all integers little-endian, strings u32-length-prefixed
// UTF-8; documented in docs/protocol.md and pinned by golden-frame tests):
//   request:  [u32 len][u8 version][u8 opcode][u64 requestId]
//             [str fileId][u16 hintCount]([str key][str value])*[payload...]
//   response: [u32 len][u8 version][u8 status][u64 requestId][payload...]
// `len` counts every byte after the length field itself.
std::vector<uint8_t> encode_frame(const TaggedRequest& req);
TaggedRequest decode_frame(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_response(const ResponseFrame& resp);
ResponseFrame decode_response(std::span<const uint8_t> bytes);

// Low-level append/read helpers shared by the op payload codecs.
namespace wire {

void put_u8(std::vector<uint8_t>& buf, uint8_t v);
void put_u16(std::vector<uint8_t>& buf, uint16_t v);
void put_u32(std::vector<uint8_t>& buf, uint32_t v);
void put_u64(std::vector<uint8_t>& buf, uint64_t v);
void put_string(std::vector<uint8_t>& buf, std::string_view s);
void put_bytes(std::vector<uint8_t>& buf, std::span<const uint8_t> bytes);

// Cursor over a received frame body. Reads throw TruncatedFrame when the
// data runs out.
class Reader {
public:
    explicit Reader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8();
    uint16_t u16();
    uint32_t u32();
    uint64_t u64();
    std::string string();
    std::vector<uint8_t> bytes(size_t count);
    std::vector<uint8_t> rest();

    size_t remaining() const noexcept { return data_.size() - pos_; }
    bool done() const noexcept { return pos_ == data_.size(); }

private:
    void need(size_t count) const;

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace wire
}  // namespace woss

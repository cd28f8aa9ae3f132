#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "woss/core/types.hpp"

namespace woss {
namespace hints {

// Reserved hint vocabulary. Any other key is stored and propagated
// untouched and triggers no optimization.
inline constexpr std::string_view kDataPlacement = "DP";
inline constexpr std::string_view kReplication = "Replication";
inline constexpr std::string_view kRepSemantics = "RepSmntc";
inline constexpr std::string_view kCacheSize = "CacheSize";
inline constexpr std::string_view kLocation = "location";
inline constexpr std::string_view kLocationChunks = "location.chunks";

bool is_reserved(std::string_view key);

}  // namespace hints

// Parsed forms of the `DP` placement hint.
struct DpLocal {};
struct DpCollocation {
    std::string group;
};
struct DpScatter {
    uint64_t group_size = 0;  // chunks per node before rotating
};
using DpDirective = std::variant<DpLocal, DpCollocation, DpScatter>;

enum class RepSemantics : uint8_t {
    Optimistic = 0,   // ack after the first replica is durable
    Pessimistic = 1,  // ack only once every requested replica committed
};

// Validates a <key, value> pair against the reserved vocabulary.
// Unknown keys pass through untouched. `location` is read-only and is
// rejected here so no caller can ever store it.
// Throws Error(MalformedHintValue) / Error(ReadOnlyAttribute).
Hint parse_hint(std::string_view key, std::string_view value);

// Parses a raw `DP` value; nullopt when malformed.
std::optional<DpDirective> parse_dp_value(std::string_view value);

// Accessors over a validated HintSet. They re-parse defensively and
// return nullopt for absent keys.
std::optional<DpDirective> dp_directive(const HintSet& hints);
std::optional<uint64_t> replication_factor(const HintSet& hints);
std::optional<RepSemantics> rep_semantics(const HintSet& hints);
std::optional<uint64_t> cache_size_bytes(const HintSet& hints);

}  // namespace woss

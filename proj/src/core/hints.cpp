#include "woss/core/hints.hpp"

#include "woss/core/services.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace woss {
namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<uint64_t> parse_u64(std::string_view s) {
    if (s.empty()) return std::nullopt;
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

// Splits "collocation g1" into ("collocation", "g1"). The argument keeps
// any embedded spaces; only the first separator splits.
std::pair<std::string_view, std::string_view> split_word(std::string_view s) {
    size_t space = s.find(' ');
    if (space == std::string_view::npos) return {s, {}};
    std::string_view rest = s.substr(space + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    return {s.substr(0, space), rest};
}

DpDirective parse_dp(std::string_view value) {
    auto [word, arg] = split_word(value);
    if (word == "local") {
        if (!arg.empty()) {
            throw_error(ErrorCode::MalformedHintValue, "DP local takes no argument");
        }
        return DpLocal{};
    }
    if (word == "collocation") {
        if (arg.empty()) {
            throw_error(ErrorCode::MalformedHintValue, "DP collocation needs a group name");
        }
        return DpCollocation{std::string(arg)};
    }
    if (word == "scatter") {
        auto n = parse_u64(arg);
        if (!n || *n == 0) {
            throw_error(ErrorCode::MalformedHintValue,
                        "DP scatter needs a positive chunk-group size");
        }
        return DpScatter{*n};
    }
    throw_error(ErrorCode::MalformedHintValue, "unknown DP mode '" + std::string(value) + "'");
}

}  // namespace

namespace hints {

bool is_reserved(std::string_view key) {
    return key == kDataPlacement || key == kReplication || key == kRepSemantics ||
           key == kCacheSize || key == kLocation || key == kLocationChunks;
}

}  // namespace hints

Hint parse_hint(std::string_view key, std::string_view value) {
    if (key.empty()) {
        throw_error(ErrorCode::MalformedHintValue, "empty hint key");
    }
    if (key == hints::kLocation || key == hints::kLocationChunks) {
        throw_error(ErrorCode::ReadOnlyAttribute, std::string(key) + " is computed by the store");
    }
    if (key == hints::kDataPlacement) {
        parse_dp(value);  // validation only
    } else if (key == hints::kReplication) {
        auto n = parse_u64(value);
        if (!n || *n < 1) {
            throw_error(ErrorCode::MalformedHintValue,
                        "Replication needs an integer >= 1, got '" + std::string(value) + "'");
        }
    } else if (key == hints::kRepSemantics) {
        std::string lowered = lowercase(value);
        if (lowered != "optimistic" && lowered != "pessimistic") {
            throw_error(ErrorCode::MalformedHintValue,
                        "RepSmntc must be optimistic or pessimistic, got '" + std::string(value) +
                            "'");
        }
    } else if (key == hints::kCacheSize) {
        // 0 is accepted and disables caching for the file.
        if (!parse_u64(value)) {
            throw_error(ErrorCode::MalformedHintValue,
                        "CacheSize needs a byte count, got '" + std::string(value) + "'");
        }
    }
    return Hint{std::string(key), std::string(value)};
}

std::optional<DpDirective> parse_dp_value(std::string_view value) {
    try {
        return parse_dp(value);
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::optional<DpDirective> dp_directive(const HintSet& hints) {
    const std::string* value = hints.find(std::string(hints::kDataPlacement));
    if (!value) return std::nullopt;
    return parse_dp(*value);
}

std::optional<uint64_t> replication_factor(const HintSet& hints) {
    const std::string* value = hints.find(std::string(hints::kReplication));
    if (!value) return std::nullopt;
    auto n = parse_u64(*value);
    if (!n || *n < 1) {
        throw_error(ErrorCode::MalformedHintValue, "bad Replication value '" + *value + "'");
    }
    return n;
}

std::optional<RepSemantics> rep_semantics(const HintSet& hints) {
    const std::string* value = hints.find(std::string(hints::kRepSemantics));
    if (!value) return std::nullopt;
    std::string lowered = lowercase(*value);
    if (lowered == "optimistic") return RepSemantics::Optimistic;
    if (lowered == "pessimistic") return RepSemantics::Pessimistic;
    throw_error(ErrorCode::MalformedHintValue, "bad RepSmntc value '" + *value + "'");
}

std::optional<uint64_t> cache_size_bytes(const HintSet& hints) {
    const std::string* value = hints.find(std::string(hints::kCacheSize));
    if (!value) return std::nullopt;
    auto n = parse_u64(*value);
    if (!n) {
        throw_error(ErrorCode::MalformedHintValue, "bad CacheSize value '" + *value + "'");
    }
    return n;
}

std::string_view placement_policy_name(PlacementPolicyKind kind) {
    switch (kind) {
        case PlacementPolicyKind::Default: return "default";
        case PlacementPolicyKind::Local: return "local";
        case PlacementPolicyKind::Collocation: return "collocation";
        case PlacementPolicyKind::Scatter: return "scatter";
    }
    return "unknown";
}

}  // namespace woss

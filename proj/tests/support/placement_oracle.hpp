#pragma once

// Independent brute-force model of the placement rules, written directly
// from their plain-language statement and kept free of any production
// placement code. Tests replay identical workloads through this model and
// the manager and demand identical decisions.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

struct Cluster {
    std::map<std::string, uint64_t> free_bytes;  // live nodes only
    uint64_t cursor = 0;
    std::map<std::string, std::string> anchors;  // collocation group -> node

    std::vector<std::string> live() const {
        std::vector<std::string> nodes;
        for (const auto& [id, free] : free_bytes) nodes.push_back(id);
        return nodes;  // map order is already sorted
    }
};

struct Assignment {
    uint64_t index = 0;
    std::string primary;
    std::vector<std::string> targets;
};

struct Request {
    uint64_t first_index = 0;
    uint64_t count = 0;
    uint64_t chunk_size = 0;
    std::string requester;
    // raw hints
    std::string dp;           // "", "local", "collocation <g>", "scatter <k>"
    uint64_t replication = 1;
};

// nullopt = no node can hold some chunk; the cluster is left untouched.
inline std::optional<std::vector<Assignment>> allocate(Cluster& cluster, const Request& req) {
    Cluster scratch = cluster;
    std::vector<std::string> live = scratch.live();
    std::vector<Assignment> out;

    auto debit = [&](const std::string& node, uint64_t bytes) {
        auto it = scratch.free_bytes.find(node);
        if (it == scratch.free_bytes.end() || it->second < bytes) return false;
        it->second -= bytes;
        return true;
    };
    auto round_robin = [&]() -> std::optional<std::string> {
        if (live.empty()) return std::nullopt;
        for (size_t probe = 0; probe < live.size(); ++probe) {
            size_t idx = (scratch.cursor + probe) % live.size();
            if (debit(live[idx], req.chunk_size)) {
                scratch.cursor = (idx + 1) % live.size();
                return live[idx];
            }
        }
        return std::nullopt;
    };

    // parse dp
    std::string mode, arg;
    if (!req.dp.empty()) {
        size_t space = req.dp.find(' ');
        mode = req.dp.substr(0, space);
        if (space != std::string::npos) arg = req.dp.substr(space + 1);
    }

    for (uint64_t i = 0; i < req.count; ++i) {
        uint64_t global = req.first_index + i;
        Assignment assignment;
        assignment.index = global;

        std::string preferred;
        if (mode == "local") {
            preferred = req.requester;
        } else if (mode == "collocation") {
            auto it = scratch.anchors.find(arg);
            if (it != scratch.anchors.end()) {
                preferred = it->second;
            } else {
                // first use: live node with the most free bytes, ties by id
                uint64_t best = 0;
                for (const auto& node : live) {
                    if (preferred.empty() || scratch.free_bytes[node] > best) {
                        preferred = node;
                        best = scratch.free_bytes[node];
                    }
                }
                if (!preferred.empty()) scratch.anchors[arg] = preferred;
            }
        } else if (mode == "scatter") {
            uint64_t k = std::stoull(arg);
            if (!live.empty()) preferred = live[(global / k) % live.size()];
        }

        if (!preferred.empty() && debit(preferred, req.chunk_size)) {
            assignment.primary = preferred;
        } else {
            auto spilled = round_robin();
            if (!spilled) return std::nullopt;
            assignment.primary = *spilled;
        }

        if (req.replication > 1 && !live.empty()) {
            size_t primary_idx = 0;
            for (size_t j = 0; j < live.size(); ++j) {
                if (live[j] == assignment.primary) primary_idx = j;
            }
            for (size_t offset = 1; offset < live.size(); ++offset) {
                if (assignment.targets.size() + 1 >= req.replication) break;
                const std::string& candidate = live[(primary_idx + offset) % live.size()];
                if (candidate == assignment.primary) continue;
                if (debit(candidate, req.chunk_size)) {
                    assignment.targets.push_back(candidate);
                }
            }
        }
        out.push_back(std::move(assignment));
    }

    cluster = std::move(scratch);
    return out;
}

}  // namespace oracle

#include "woss/wf/scheduler.hpp"

#include <algorithm>

#include "woss/core/hints.hpp"

namespace woss::wf {

std::string_view schedule_reason_name(ScheduleReason reason) {
    return reason == ScheduleReason::LocationHit ? "LocationHit" : "Fallback";
}

std::vector<NodeId> parse_location_value(const std::string& value) {
    std::vector<NodeId> nodes;
    size_t pos = 0;
    while (pos < value.size()) {
        size_t comma = value.find(',', pos);
        if (comma == std::string::npos) comma = value.size();
        if (comma > pos) nodes.emplace_back(value.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return nodes;
}

std::vector<std::vector<NodeId>> parse_chunk_locations_value(const std::string& value) {
    std::vector<std::vector<NodeId>> chunks;
    size_t pos = 0;
    if (value.empty()) return chunks;
    while (pos <= value.size()) {
        size_t semi = value.find(';', pos);
        if (semi == std::string::npos) semi = value.size();
        chunks.push_back(parse_location_value(value.substr(pos, semi - pos)));
        pos = semi + 1;
    }
    return chunks;
}

std::map<NodeId, uint64_t> LocationScheduler::score_inputs(const TaskSpec& task,
                                                           uint64_t* lookups) {
    std::map<NodeId, uint64_t> scores;
    for (const auto& input : task.inputs) {
        if (input.chunk_range) {
            // Region read: only the nodes holding chunks of the region count.
            std::string raw =
                manager_.get_xattr(input.file, std::string(hints::kLocationChunks));
            *lookups += 1;
            auto per_chunk = parse_chunk_locations_value(raw);
            std::map<NodeId, uint64_t> holders;  // node -> chunks of region held
            auto [begin, end] = *input.chunk_range;
            for (uint64_t c = begin; c < end && c < per_chunk.size(); ++c) {
                for (const auto& node : per_chunk[c]) holders[node] += 1;
            }
            for (const auto& [node, held] : holders) {
                scores[node] +=
                    config_.scoring == ScoringMode::ByteWeighted ? held : (held > 0 ? 1 : 0);
            }
        } else {
            std::string raw = manager_.get_xattr(input.file, std::string(hints::kLocation));
            *lookups += 1;
            for (const auto& node : parse_location_value(raw)) {
                scores[node] += 1;
            }
        }
    }
    return scores;
}

NodeId LocationScheduler::argmax_node(const std::map<NodeId, uint64_t>& scores) {
    NodeId best;
    uint64_t best_score = 0;
    for (const auto& [node, score] : scores) {  // id order; first max wins ties
        if (score > best_score) {
            best = node;
            best_score = score;
        }
    }
    return best;
}

ScheduleDecision LocationScheduler::schedule(const TaskSpec& task, const ClusterView& view) {
    ScheduleDecision decision;
    decision.task_id = task.id;

    auto idle = [&](const NodeId& node) {
        auto it = view.running.find(node);
        int running = it == view.running.end() ? 0 : it->second;
        return running < view.slots_per_node;
    };

    std::map<NodeId, uint64_t> scores;
    if (config_.location_aware && !task.inputs.empty()) {
        scores = score_inputs(task, &decision.lookup_roundtrips);
        for (const auto& [node, score] : scores) {
            (void)score;
            decision.candidates.push_back(node);
        }
    }

    if (config_.location_aware && config_.use_location_for_choice) {
        // Keep only scores of schedulable workers; a location outside the
        // worker pool (say the staging target) can never run a task.
        std::map<NodeId, uint64_t> eligible;
        for (const auto& node : view.workers) {
            auto it = scores.find(node);
            if (it != scores.end() && it->second > 0) eligible[node] = it->second;
        }
        NodeId best = argmax_node(eligible);
        if (!best.empty() && idle(best)) {
            decision.node = best;
            decision.reason = ScheduleReason::LocationHit;
            return decision;
        }
    }

    // Fallback: least-loaded idle worker, ties by id order.
    NodeId chosen;
    int chosen_load = 0;
    for (const auto& node : view.workers) {
        if (!idle(node)) continue;
        auto it = view.running.find(node);
        int load = it == view.running.end() ? 0 : it->second;
        if (chosen.empty() || load < chosen_load) {
            chosen = node;
            chosen_load = load;
        }
    }
    if (chosen.empty()) {
        throw_error(ErrorCode::NoIdleNode, "all workers busy for task '" + task.id + "'");
    }
    decision.node = chosen;
    decision.reason = ScheduleReason::Fallback;
    return decision;
}

}  // namespace woss::wf

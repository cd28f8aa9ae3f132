#pragma once

#include <map>
#include <string>
#include <vector>

#include "woss/core/services.hpp"
#include "woss/wf/dag.hpp"

namespace woss::wf {

enum class ScheduleReason : uint8_t { LocationHit, Fallback };

std::string_view schedule_reason_name(ScheduleReason reason);

struct ScheduleDecision {
    std::string task_id;
    NodeId node;
    ScheduleReason reason = ScheduleReason::Fallback;
    std::vector<NodeId> candidates;      // locations consulted
    uint64_t lookup_roundtrips = 0;      // metadata queries issued deciding
};

enum class ScoringMode : uint8_t { FileCount, ByteWeighted };

struct SchedulerConfig {
    // Query the store for input locations at all. Off reproduces a plain
    // locality-blind scheduler.
    bool location_aware = true;
    // Consult locations but ignore them for the choice; isolates the
    // lookup overhead from the benefit.
    bool use_location_for_choice = true;
    ScoringMode scoring = ScoringMode::FileCount;
};

struct ClusterView {
    std::vector<NodeId> workers;       // sorted
    std::map<NodeId, int> running;     // tasks currently on each node
    int slots_per_node = 1;
};

// Location-aware task placement: each candidate node scores one point per
// input file it holds a replica of (or the held bytes when byte-weighted),
// the argmax wins if it has an idle slot, and everything else falls back
// to the least-loaded idle node. Ties always break by node id.
class LocationScheduler {
public:
    LocationScheduler(SchedulerConfig config, ManagerApi& manager)
        : config_(config), manager_(manager) {}

    // Throws Error(NoIdleNode) when every worker is saturated.
    ScheduleDecision schedule(const TaskSpec& task, const ClusterView& view);

    // Argmax with id-order tie break, exposed for property tests.
    static NodeId argmax_node(const std::map<NodeId, uint64_t>& scores);

private:
    std::map<NodeId, uint64_t> score_inputs(const TaskSpec& task, uint64_t* lookups);

    SchedulerConfig config_;
    ManagerApi& manager_;
};

// Parses the comma-joined node list form of the `location` attribute.
std::vector<NodeId> parse_location_value(const std::string& value);
// Parses the per-chunk `location.chunks` form (`;` between chunks).
std::vector<std::vector<NodeId>> parse_chunk_locations_value(const std::string& value);

}  // namespace woss::wf

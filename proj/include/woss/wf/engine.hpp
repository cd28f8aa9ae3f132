#pragma once

#include <map>
#include <string>
#include <vector>

#include "woss/client/client.hpp"
#include "woss/core/services.hpp"
#include "woss/wf/dag.hpp"
#include "woss/wf/scheduler.hpp"

namespace woss::wf {

// The cluster a workflow runs on: worker nodes, the intermediate store's
// manager, and per-worker clients (plus clients for the staging backend
// when one exists).
class ClusterContext {
public:
    virtual ~ClusterContext() = default;

    virtual const std::vector<NodeId>& workers() = 0;  // sorted
    virtual ManagerApi& manager() = 0;
    virtual Client& client_on(const NodeId& worker) = 0;
    virtual Client* backend_client_on(const NodeId& worker) = 0;  // null without a backend
};

struct EngineConfig {
    uint64_t seed = 1;
    int slots_per_node = 1;
    // Pattern annotations become create-time hints. Off for baseline runs.
    bool apply_hints = true;
    SchedulerConfig scheduler;
    // Charge one attribute round trip per hinted file created.
    CostModel costs;
    // Overhead probes: tag every produced file with a random non-reserved
    // key, and/or query input locations without using them.
    bool useless_tagging = false;
    bool useless_get_location = false;
    // Replay the tick schedule against the wall clock.
    bool realtime = false;
    uint64_t tick_micros = 200;
};

struct TaskRecord {
    std::string task_id;
    std::string stage;
    NodeId node;
    ScheduleReason reason = ScheduleReason::Fallback;
    uint64_t start_tick = 0;
    uint64_t end_tick = 0;
    uint64_t reads_local = 0;
    uint64_t reads_remote = 0;
    uint64_t writes_local = 0;
    uint64_t writes_remote = 0;
    uint64_t cache_hits = 0;
    uint64_t xattr_roundtrips = 0;
    uint64_t lookup_roundtrips = 0;
    double body_wall_ms = 0;
    bool failed = false;
    bool aborted = false;
    std::string error;
    std::map<FileId, std::pair<uint64_t, uint64_t>> file_reads;  // local/remote per file
};

struct ExecutionTrace {
    std::vector<TaskRecord> tasks;  // ordered by (start_tick, task id)
    uint64_t makespan_ticks = 0;
    double wall_ms = 0;
    uint64_t location_hits = 0;
    uint64_t fallbacks = 0;
    bool any_failed = false;

    const TaskRecord* find(const std::string& task_id) const;
};

// Deterministic discrete-event runner: tasks execute with maximum
// parallelism over single- (or k-) slot workers, bodies perform real
// storage operations, and durations come from the metered tick costs.
class Engine {
public:
    explicit Engine(EngineConfig config) : config_(std::move(config)) {}

    ExecutionTrace run(const WorkflowDag& dag, ClusterContext& cluster);

private:
    EngineConfig config_;
};

// Deterministic content for synthetic kernels: depends only on the label
// and size, never on placement, so runs compare byte-identical across
// configurations.
std::vector<uint8_t> synth_bytes(std::string_view label, uint64_t size);

}  // namespace woss::wf

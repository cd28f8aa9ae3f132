#pragma once

#include <memory>
#include <string>
#include <vector>

#include "woss/bench/cluster.hpp"
#include "woss/bench/report.hpp"
#include "woss/wf/dag.hpp"
#include "woss/wf/engine.hpp"

namespace woss::bench {

enum class BenchMode : uint8_t { Remote, Dss, Woss };
enum class BenchKind : uint8_t { Pipeline, Broadcast, Reduce, Scatter, Overhead };

std::string_view bench_mode_name(BenchMode mode);
BenchMode bench_mode_from_name(std::string_view name);
std::string_view bench_kind_name(BenchKind kind);
BenchKind bench_kind_from_name(std::string_view name);

struct BenchConfig {
    BenchKind bench = BenchKind::Pipeline;
    BenchMode mode = BenchMode::Woss;
    int nodes = 20;  // one manager machine + N-1 workers
    uint64_t seed = 1;
    uint64_t chunk_size = 256 * 1024;
    uint64_t file_chunks = 4;     // per-stage file size, in chunks
    uint64_t shared_chunks = 16;  // broadcast shared file
    uint64_t replication = 8;     // broadcast replication factor
    uint64_t scatter_group = 4;   // chunks per scatter region
    uint64_t remote_cost = 10;
    uint64_t node_capacity = 1ull << 30;
    bool realtime = false;
    uint64_t tick_micros = 200;
    bool record_placement_log = false;
    bool empty_policy_registry = false;

    int workers() const { return nodes > 1 ? nodes - 1 : 1; }
};

// A benchmark workload: the DAG plus what the harness needs around it.
struct BenchWorkload {
    wf::WorkflowDag dag;
    std::vector<std::pair<FileId, uint64_t>> backend_inputs;  // pre-staged file -> bytes
    std::vector<FileId> staged_out;                           // backend results
    FileId shared_file;      // broadcast
    FileId scatter_file;     // scatter
    std::string collocation_group;  // reduce
};

BenchWorkload build_pipeline_workload(const BenchConfig& cfg);
BenchWorkload build_broadcast_workload(const BenchConfig& cfg);
BenchWorkload build_reduce_workload(const BenchConfig& cfg);
BenchWorkload build_scatter_workload(const BenchConfig& cfg);
BenchWorkload build_workload(const BenchConfig& cfg);

// Outcome of one benchmark execution, with everything the acceptance
// checks poke at.
struct BenchResult {
    RunReport report;
    wf::ExecutionTrace trace;
    std::shared_ptr<SimCluster> cluster;  // kept alive for inspection
    BenchWorkload workload;
};

BenchResult run_benchmark(const BenchConfig& cfg);
BenchResult run_workload(const BenchConfig& cfg, BenchWorkload workload);

// Derive staging requirements from a loaded DAG file (stage-in sizes come
// from the kernels' outputBytes).
BenchWorkload workload_from_dag(wf::WorkflowDag dag);

// The overhead ladder: the pipeline workload rerun under stepwise
// configurations from the plain baseline up to the fully hinted run.
BenchResult run_overhead_ladder(const BenchConfig& cfg);

// Engine configuration for a mode, shared by the CLI and tests.
wf::EngineConfig engine_config_for(const BenchConfig& cfg);

}  // namespace woss::bench

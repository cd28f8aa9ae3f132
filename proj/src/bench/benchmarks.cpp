#include "woss/bench/benchmarks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include "woss/bench/verify.hpp"
#include "woss/core/checksum.hpp"
#include "woss/core/hints.hpp"

namespace woss::bench {

namespace {

std::string pad(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%02d", i);
    return buf;
}

FileId path(const std::string& p) { return FileId::parse(p); }

std::string now_rfc3339() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string_view bench_mode_name(BenchMode mode) {
    switch (mode) {
        case BenchMode::Remote: return "remote";
        case BenchMode::Dss: return "dss";
        case BenchMode::Woss: return "woss";
    }
    return "unknown";
}

BenchMode bench_mode_from_name(std::string_view name) {
    if (name == "remote") return BenchMode::Remote;
    if (name == "dss") return BenchMode::Dss;
    if (name == "woss") return BenchMode::Woss;
    throw_error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

std::string_view bench_kind_name(BenchKind kind) {
    switch (kind) {
        case BenchKind::Pipeline: return "pipeline";
        case BenchKind::Broadcast: return "broadcast";
        case BenchKind::Reduce: return "reduce";
        case BenchKind::Scatter: return "scatter";
        case BenchKind::Overhead: return "overhead";
    }
    return "unknown";
}

BenchKind bench_kind_from_name(std::string_view name) {
    if (name == "pipeline") return BenchKind::Pipeline;
    if (name == "broadcast") return BenchKind::Broadcast;
    if (name == "reduce") return BenchKind::Reduce;
    if (name == "scatter") return BenchKind::Scatter;
    if (name == "overhead") return BenchKind::Overhead;
    throw_error(ErrorCode::InvalidArgument, "unknown benchmark '" + std::string(name) + "'");
}

BenchWorkload build_pipeline_workload(const BenchConfig& cfg) {
    BenchWorkload workload;
    workload.dag.name = "pipeline";
    uint64_t file_bytes = cfg.file_chunks * cfg.chunk_size;
    std::vector<FileId> pipeline_files;

    for (int p = 0; p < cfg.workers(); ++p) {
        std::string tag = pad(p);
        FileId in = path("/in-" + tag);
        FileId t1 = path("/t1-" + tag);
        FileId t2 = path("/t2-" + tag);
        FileId out = path("/out-" + tag);
        FileId staged_in = path("/stage/in-" + tag);
        FileId staged_out = path("/stage/out-" + tag);

        wf::TaskSpec stage_in;
        stage_in.id = "si-" + tag;
        stage_in.stage = "stage-in";
        stage_in.kernel.type = wf::KernelType::StageIn;
        stage_in.kernel.backend_source = staged_in;
        stage_in.kernel.output_bytes = file_bytes;  // size of the pre-staged input
        stage_in.outputs.push_back({in, "stagein", {}});

        wf::TaskSpec s1;
        s1.id = "s1-" + tag;
        s1.stage = "s1";
        s1.kernel.type = wf::KernelType::Transform;
        s1.kernel.output_bytes = file_bytes;
        s1.inputs.push_back({in, std::nullopt});
        s1.outputs.push_back({t1, "intermediate", {}});

        wf::TaskSpec s2;
        s2.id = "s2-" + tag;
        s2.stage = "s2";
        s2.kernel.type = wf::KernelType::Transform;
        s2.kernel.output_bytes = file_bytes;
        s2.inputs.push_back({t1, std::nullopt});
        s2.outputs.push_back({t2, "intermediate", {}});

        wf::TaskSpec s3;
        s3.id = "s3-" + tag;
        s3.stage = "s3";
        s3.kernel.type = wf::KernelType::Transform;
        s3.kernel.output_bytes = file_bytes;
        s3.inputs.push_back({t2, std::nullopt});
        s3.outputs.push_back({out, "output", {}});

        wf::TaskSpec stage_out;
        stage_out.id = "so-" + tag;
        stage_out.stage = "stage-out";
        stage_out.kernel.type = wf::KernelType::StageOut;
        stage_out.kernel.backend_dest = staged_out;
        stage_out.inputs.push_back({out, std::nullopt});

        workload.dag.tasks.push_back(std::move(stage_in));
        workload.dag.tasks.push_back(std::move(s1));
        workload.dag.tasks.push_back(std::move(s2));
        workload.dag.tasks.push_back(std::move(s3));
        workload.dag.tasks.push_back(std::move(stage_out));

        pipeline_files.insert(pipeline_files.end(), {in, t1, t2, out});
        workload.backend_inputs.emplace_back(staged_in, file_bytes);
        workload.staged_out.push_back(staged_out);
    }

    wf::PatternAnnotation pipeline;
    pipeline.type = wf::PatternType::Pipeline;
    pipeline.files = std::move(pipeline_files);
    workload.dag.patterns.push_back(std::move(pipeline));
    return workload;
}

BenchWorkload build_broadcast_workload(const BenchConfig& cfg) {
    BenchWorkload workload;
    workload.dag.name = "broadcast";
    uint64_t file_bytes = cfg.file_chunks * cfg.chunk_size;
    uint64_t shared_bytes = cfg.shared_chunks * cfg.chunk_size;
    FileId staged_in = path("/stage/bcast-in");
    FileId bcast_in = path("/bcast-in");
    FileId shared = path("/shared");
    workload.shared_file = shared;

    wf::TaskSpec stage_in;
    stage_in.id = "si-b";
    stage_in.stage = "stage-in";
    stage_in.kernel.type = wf::KernelType::StageIn;
    stage_in.kernel.backend_source = staged_in;
    stage_in.kernel.output_bytes = file_bytes;
    stage_in.outputs.push_back({bcast_in, "stagein", {}});
    workload.dag.tasks.push_back(std::move(stage_in));
    workload.backend_inputs.emplace_back(staged_in, file_bytes);

    wf::TaskSpec producer;
    producer.id = "produce";
    producer.stage = "produce";
    producer.kernel.type = wf::KernelType::Transform;
    producer.kernel.output_bytes = shared_bytes;
    producer.inputs.push_back({bcast_in, std::nullopt});
    producer.outputs.push_back({shared, "shared", {}});
    workload.dag.tasks.push_back(std::move(producer));

    for (int p = 0; p < cfg.workers(); ++p) {
        std::string tag = pad(p);
        FileId out = path("/cout-" + tag);
        FileId staged_out = path("/stage/cout-" + tag);

        wf::TaskSpec consumer;
        consumer.id = "c-" + tag;
        consumer.stage = "consume";
        consumer.kernel.type = wf::KernelType::Transform;
        consumer.kernel.output_bytes = file_bytes;
        consumer.inputs.push_back({shared, std::nullopt});
        consumer.outputs.push_back({out, "output", {}});
        workload.dag.tasks.push_back(std::move(consumer));

        wf::TaskSpec stage_out;
        stage_out.id = "so-" + tag;
        stage_out.stage = "stage-out";
        stage_out.kernel.type = wf::KernelType::StageOut;
        stage_out.kernel.backend_dest = staged_out;
        stage_out.inputs.push_back({out, std::nullopt});
        workload.dag.tasks.push_back(std::move(stage_out));
        workload.staged_out.push_back(staged_out);
    }

    // The producer writes its output like any pipeline stage, so the
    // replicated file starts from one whole copy; replication then fans
    // it out.
    wf::PatternAnnotation pipeline;
    pipeline.type = wf::PatternType::Pipeline;
    pipeline.files = {bcast_in, shared};
    workload.dag.patterns.push_back(std::move(pipeline));

    wf::PatternAnnotation broadcast;
    broadcast.type = wf::PatternType::Broadcast;
    broadcast.files = {shared};
    broadcast.replication = cfg.replication;
    workload.dag.patterns.push_back(std::move(broadcast));
    return workload;
}

BenchWorkload build_reduce_workload(const BenchConfig& cfg) {
    BenchWorkload workload;
    workload.dag.name = "reduce";
    workload.collocation_group = "g1";
    uint64_t file_bytes = cfg.file_chunks * cfg.chunk_size;

    std::vector<FileId> staged_files;
    std::vector<FileId> reduce_inputs;
    wf::TaskSpec reduce;
    reduce.id = "reduce";
    reduce.stage = "reduce";
    reduce.kernel.type = wf::KernelType::Transform;
    reduce.kernel.output_bytes = file_bytes;
    FileId final_file = path("/final");
    reduce.outputs.push_back({final_file, "output", {}});

    for (int p = 0; p < cfg.workers(); ++p) {
        std::string tag = pad(p);
        FileId staged_in = path("/stage/rin-" + tag);
        FileId in = path("/rin-" + tag);
        FileId red = path("/red-" + tag);

        wf::TaskSpec stage_in;
        stage_in.id = "si-" + tag;
        stage_in.stage = "stage-in";
        stage_in.kernel.type = wf::KernelType::StageIn;
        stage_in.kernel.backend_source = staged_in;
        stage_in.kernel.output_bytes = file_bytes;
        stage_in.outputs.push_back({in, "stagein", {}});
        workload.dag.tasks.push_back(std::move(stage_in));
        workload.backend_inputs.emplace_back(staged_in, file_bytes);

        wf::TaskSpec producer;
        producer.id = "p-" + tag;
        producer.stage = "produce";
        producer.kernel.type = wf::KernelType::Transform;
        producer.kernel.output_bytes = file_bytes;
        producer.inputs.push_back({in, std::nullopt});
        producer.outputs.push_back({red, "intermediate", {}});
        workload.dag.tasks.push_back(std::move(producer));

        reduce.inputs.push_back({red, std::nullopt});
        staged_files.push_back(in);
        reduce_inputs.push_back(red);
    }
    workload.dag.tasks.push_back(std::move(reduce));

    wf::TaskSpec stage_out;
    stage_out.id = "so";
    stage_out.stage = "stage-out";
    stage_out.kernel.type = wf::KernelType::StageOut;
    FileId staged_final = path("/stage/final");
    stage_out.kernel.backend_dest = staged_final;
    stage_out.inputs.push_back({final_file, std::nullopt});
    workload.dag.tasks.push_back(std::move(stage_out));
    workload.staged_out.push_back(staged_final);

    staged_files.push_back(final_file);
    wf::PatternAnnotation pipeline;
    pipeline.type = wf::PatternType::Pipeline;
    pipeline.files = std::move(staged_files);
    workload.dag.patterns.push_back(std::move(pipeline));

    wf::PatternAnnotation reduce_pattern;
    reduce_pattern.type = wf::PatternType::Reduce;
    reduce_pattern.files = std::move(reduce_inputs);
    reduce_pattern.group = workload.collocation_group;
    workload.dag.patterns.push_back(std::move(reduce_pattern));
    return workload;
}

BenchWorkload build_scatter_workload(const BenchConfig& cfg) {
    BenchWorkload workload;
    workload.dag.name = "scatter";
    uint64_t region_chunks = cfg.scatter_group;
    uint64_t scatter_bytes =
        static_cast<uint64_t>(cfg.workers()) * region_chunks * cfg.chunk_size;
    uint64_t file_bytes = cfg.file_chunks * cfg.chunk_size;

    FileId staged_in = path("/stage/scatter-in");
    FileId sc_in = path("/sc-in");
    FileId scatter = path("/scatter");
    workload.scatter_file = scatter;

    wf::TaskSpec stage_in;
    stage_in.id = "si";
    stage_in.stage = "stage-in";
    stage_in.kernel.type = wf::KernelType::StageIn;
    stage_in.kernel.backend_source = staged_in;
    stage_in.kernel.output_bytes = scatter_bytes;
    stage_in.outputs.push_back({sc_in, "stagein", {}});
    workload.dag.tasks.push_back(std::move(stage_in));
    workload.backend_inputs.emplace_back(staged_in, scatter_bytes);

    wf::TaskSpec writer;
    writer.id = "writer";
    writer.stage = "produce";
    writer.kernel.type = wf::KernelType::Transform;
    writer.kernel.output_bytes = scatter_bytes;
    writer.inputs.push_back({sc_in, std::nullopt});
    writer.outputs.push_back({scatter, "scatter", {}});
    workload.dag.tasks.push_back(std::move(writer));

    for (int p = 0; p < cfg.workers(); ++p) {
        std::string tag = pad(p);
        FileId out = path("/sout-" + tag);
        FileId staged_out = path("/stage/sout-" + tag);

        wf::TaskSpec reader;
        reader.id = "r-" + tag;
        reader.stage = "read";
        reader.kernel.type = wf::KernelType::Transform;
        reader.kernel.output_bytes = file_bytes;
        reader.inputs.push_back(
            {scatter, std::make_pair(static_cast<uint64_t>(p) * region_chunks,
                                     static_cast<uint64_t>(p + 1) * region_chunks)});
        reader.outputs.push_back({out, "output", {}});
        workload.dag.tasks.push_back(std::move(reader));

        wf::TaskSpec stage_out;
        stage_out.id = "so-" + tag;
        stage_out.stage = "stage-out";
        stage_out.kernel.type = wf::KernelType::StageOut;
        stage_out.kernel.backend_dest = staged_out;
        stage_out.inputs.push_back({out, std::nullopt});
        workload.dag.tasks.push_back(std::move(stage_out));
        workload.staged_out.push_back(staged_out);
    }

    wf::PatternAnnotation pipeline;
    pipeline.type = wf::PatternType::Pipeline;
    pipeline.files = {sc_in};
    workload.dag.patterns.push_back(std::move(pipeline));

    wf::PatternAnnotation scatter_pattern;
    scatter_pattern.type = wf::PatternType::Scatter;
    scatter_pattern.files = {scatter};
    scatter_pattern.scatter_chunks = region_chunks;
    workload.dag.patterns.push_back(std::move(scatter_pattern));
    return workload;
}

BenchWorkload build_workload(const BenchConfig& cfg) {
    switch (cfg.bench) {
        case BenchKind::Pipeline: return build_pipeline_workload(cfg);
        case BenchKind::Broadcast: return build_broadcast_workload(cfg);
        case BenchKind::Reduce: return build_reduce_workload(cfg);
        case BenchKind::Scatter: return build_scatter_workload(cfg);
        case BenchKind::Overhead: return build_pipeline_workload(cfg);
    }
    throw_error(ErrorCode::InvalidArgument, "bad benchmark kind");
}

wf::EngineConfig engine_config_for(const BenchConfig& cfg) {
    wf::EngineConfig engine;
    engine.seed = cfg.seed;
    engine.costs.remote_access = cfg.remote_cost;
    engine.realtime = cfg.realtime;
    engine.tick_micros = cfg.tick_micros;
    if (cfg.mode == BenchMode::Woss) {
        engine.apply_hints = true;
        engine.scheduler.location_aware = true;
        engine.scheduler.use_location_for_choice = true;
    } else {
        engine.apply_hints = false;
        engine.scheduler.location_aware = false;
        engine.scheduler.use_location_for_choice = false;
    }
    return engine;
}

namespace {

ClusterOptions cluster_options_for(const BenchConfig& cfg) {
    ClusterOptions opts;
    opts.workers = cfg.workers();
    opts.chunk_size = cfg.chunk_size;
    opts.node_capacity = cfg.node_capacity;
    opts.seed = cfg.seed;
    opts.remote_cost = cfg.remote_cost;
    opts.single_backend_store = cfg.mode == BenchMode::Remote;
    opts.empty_policy_registry = cfg.empty_policy_registry;
    opts.record_placement_log = cfg.record_placement_log;
    return opts;
}

void stage_inputs(SimCluster& cluster, const BenchWorkload& workload) {
    Client& setup = cluster.backend_setup_client();
    for (const auto& [file, bytes] : workload.backend_inputs) {
        OpenHandle handle = setup.create(file, HintSet{});
        auto content = wf::synth_bytes(file.path, bytes);
        setup.write(handle, content);
        setup.close(handle);
    }
}

std::string digest_staged_out(SimCluster& cluster, const BenchWorkload& workload) {
    Client& setup = cluster.backend_setup_client();
    std::vector<FileId> files = workload.staged_out;
    std::sort(files.begin(), files.end());
    uint64_t digest = 0xcbf29ce484222325ull;
    for (const auto& file : files) {
        OpenHandle handle = setup.open_read(file);
        auto bytes = setup.read_all(handle);
        setup.close(handle);
        digest ^= fnv1a64(bytes);
        digest *= 0x100000001b3ull;
        for (char c : file.path) {
            digest ^= static_cast<uint8_t>(c);
            digest *= 0x100000001b3ull;
        }
    }
    std::ostringstream out;
    out << std::hex << digest;
    return out.str();
}

RunReport assemble_report(const BenchConfig& cfg, SimCluster& cluster,
                          const BenchWorkload& workload, const wf::ExecutionTrace& trace) {
    RunReport report;
    report.benchmark = std::string(bench_kind_name(cfg.bench));
    report.mode = std::string(bench_mode_name(cfg.mode));
    report.nodes = cfg.nodes;
    report.seed = cfg.seed;
    report.chunk_size = cfg.chunk_size;
    report.remote_cost = cfg.remote_cost;
    report.replication = cfg.replication;
    report.scatter_group = cfg.scatter_group;
    report.makespan_ticks = trace.makespan_ticks;
    report.wall_ms = trace.wall_ms;
    report.location_hits = trace.location_hits;
    report.fallbacks = trace.fallbacks;
    report.generated_at = now_rfc3339();

    // Stage rollups, in first-start order.
    std::vector<std::string> stage_order;
    std::map<std::string, StageStat> stages;
    for (const auto& task : trace.tasks) {
        if (task.aborted) continue;
        auto [it, inserted] = stages.emplace(task.stage, StageStat{});
        StageStat& stat = it->second;
        if (inserted) {
            stat.name = task.stage;
            stat.start_tick = task.start_tick;
            stat.end_tick = task.end_tick;
            stage_order.push_back(task.stage);
        }
        stat.start_tick = std::min(stat.start_tick, task.start_tick);
        stat.end_tick = std::max(stat.end_tick, task.end_tick);
        stat.reads_local += task.reads_local;
        stat.reads_remote += task.reads_remote;
        stat.cache_hits += task.cache_hits;
        stat.wall_ms += task.body_wall_ms;
        (task.reason == wf::ScheduleReason::LocationHit ? stat.location_hits : stat.fallbacks) +=
            1;
    }
    for (const auto& name : stage_order) {
        report.stages.push_back(stages.at(name));
    }

    // Per-class read splits from the per-task, per-file counters.
    auto classes = workload.dag.file_classes();
    for (const auto& task : trace.tasks) {
        for (const auto& [file, split] : task.file_reads) {
            auto it = classes.find(file);
            std::string file_class = it == classes.end() ? "staging" : it->second;
            auto& stat = report.classes[file_class];
            stat.reads_local += split.first;
            stat.reads_remote += split.second;
        }
    }

    for (const auto& id : cluster.storage_ids()) {
        StorageNode& node = cluster.storage_node(id);
        auto counters = node.counters();
        auto status = node.status();
        NodeStat stat;
        stat.node = id.id;
        stat.served_local = counters.served_reads_local;
        stat.served_remote = counters.served_reads_remote;
        stat.served_bytes = counters.served_bytes;
        stat.capacity_bytes = status.capacity_bytes;
        stat.free_bytes = cluster.metadata_manager().member_free_bytes(id);
        report.node_stats.push_back(stat);
    }

    if (!workload.shared_file.empty()) {
        FileMetadata meta = cluster.metadata_manager().get_metadata(workload.shared_file);
        uint64_t chunks = meta.chunks.empty() ? 1 : meta.chunks.size();
        uint64_t min_replicas = UINT64_MAX;
        uint64_t max_replicas = 0;
        for (const auto& chunk : meta.chunks) {
            min_replicas = std::min<uint64_t>(min_replicas, chunk.replicas.size());
            max_replicas = std::max<uint64_t>(max_replicas, chunk.replicas.size());
        }
        report.shared_replicas_min = meta.chunks.empty() ? 0 : min_replicas;
        report.shared_replicas_max = max_replicas;
        for (const auto& id : cluster.storage_ids()) {
            auto [local, remote] = cluster.storage_node(id).served_reads_for(workload.shared_file);
            double load = static_cast<double>(local + remote) / static_cast<double>(chunks);
            if (load > 0) report.shared_load[id.id] = load;
            report.shared_max_load = std::max(report.shared_max_load, load);
        }
    }

    if (!workload.collocation_group.empty()) {
        // Collocation health: every pre-reduce chunk on one anchor node.
        std::set<NodeId> anchors;
        bool degraded = false;
        for (const auto& task : workload.dag.tasks) {
            for (const auto& output : task.outputs) {
                if (output.file_class != "intermediate") continue;
                FileMetadata meta = cluster.metadata_manager().get_metadata(output.file);
                for (const auto& chunk : meta.chunks) {
                    if (chunk.replicas.empty()) continue;
                    anchors.insert(chunk.replicas.front());
                }
            }
        }
        if (anchors.size() > 1) degraded = true;
        report.collocation_degraded = degraded;
        if (!anchors.empty()) report.collocation_anchor = anchors.begin()->id;
    }

    report.output_digest = digest_staged_out(cluster, workload);
    return report;
}

}  // namespace

BenchResult run_workload(const BenchConfig& cfg, BenchWorkload workload) {
    BenchResult result;
    result.cluster = std::make_shared<SimCluster>(cluster_options_for(cfg));
    result.workload = std::move(workload);
    result.workload.dag.validate();
    stage_inputs(*result.cluster, result.workload);

    wf::Engine engine(engine_config_for(cfg));
    result.trace = engine.run(result.workload.dag, *result.cluster);

    result.report = assemble_report(cfg, *result.cluster, result.workload, result.trace);
    result.report.violations =
        verify_run(*result.cluster, result.trace, result.workload.dag);
    if (result.trace.any_failed) {
        result.report.violations.push_back("one or more tasks failed");
    }
    return result;
}

BenchResult run_benchmark(const BenchConfig& cfg) {
    return run_workload(cfg, build_workload(cfg));
}

BenchWorkload workload_from_dag(wf::WorkflowDag dag) {
    BenchWorkload workload;
    for (const auto& task : dag.tasks) {
        if (task.kernel.type == wf::KernelType::StageIn) {
            workload.backend_inputs.emplace_back(task.kernel.backend_source,
                                                 task.kernel.output_bytes);
        }
        if (task.kernel.type == wf::KernelType::StageOut) {
            workload.staged_out.push_back(task.kernel.backend_dest);
        }
    }
    workload.dag = std::move(dag);
    return workload;
}

BenchResult run_overhead_ladder(const BenchConfig& cfg) {
    struct Rung {
        std::string label;
        bool useless_tagging = false;
        bool useless_get_location = false;
        bool scheduler_lookups = false;
        bool woss = false;
    };
    const std::vector<Rung> rungs = {
        {"dss", false, false, false, false},
        {"dss+fork", false, false, false, false},  // placeholder rung, adds nothing
        {"dss+fork+tagging", true, false, false, false},
        {"dss+fork+tagging+getlocation", true, true, false, false},
        {"dss+fork+tagging+getlocation+scheduling", true, true, true, false},
        {"woss", false, false, false, true},
    };

    BenchConfig base = cfg;
    base.bench = BenchKind::Overhead;

    BenchResult last_woss;
    RunReport ladder_report;
    uint64_t base_makespan = 0;
    std::vector<LadderRow> rows;

    for (const auto& rung : rungs) {
        BenchConfig rung_cfg = base;
        rung_cfg.mode = rung.woss ? BenchMode::Woss : BenchMode::Dss;

        auto cluster = std::make_shared<SimCluster>(cluster_options_for(rung_cfg));
        BenchWorkload workload = build_pipeline_workload(rung_cfg);
        workload.dag.name = "overhead";
        stage_inputs(*cluster, workload);

        wf::EngineConfig engine_cfg = engine_config_for(rung_cfg);
        engine_cfg.useless_tagging = rung.useless_tagging;
        engine_cfg.useless_get_location = rung.useless_get_location;
        if (rung.scheduler_lookups) {
            engine_cfg.scheduler.location_aware = true;
            engine_cfg.scheduler.use_location_for_choice = false;
        }
        wf::Engine engine(engine_cfg);
        wf::ExecutionTrace trace = engine.run(workload.dag, *cluster);

        LadderRow row;
        row.label = rung.label;
        row.makespan_ticks = trace.makespan_ticks;
        auto counters = cluster->metadata_manager().counters();
        row.set_xattr_calls = counters.set_xattr_calls;
        row.get_location_calls = counters.get_location_calls;
        for (const auto& task : workload.dag.tasks) {
            row.files_produced += task.outputs.size();
        }
        if (rung.label == "dss") {
            base_makespan = trace.makespan_ticks;
        }
        row.delta_vs_base_pct =
            base_makespan == 0
                ? 0.0
                : 100.0 * (static_cast<double>(row.makespan_ticks) -
                           static_cast<double>(base_makespan)) /
                      static_cast<double>(base_makespan);
        rows.push_back(row);

        if (rung.woss) {
            last_woss.cluster = cluster;
            last_woss.trace = trace;
            last_woss.workload = workload;
            ladder_report = assemble_report(rung_cfg, *cluster, workload, trace);
            ladder_report.violations = verify_run(*cluster, trace, workload.dag);
        }
    }

    ladder_report.benchmark = "overhead";
    ladder_report.mode = std::string(bench_mode_name(cfg.mode));
    ladder_report.ladder = std::move(rows);
    last_woss.report = std::move(ladder_report);
    return last_woss;
}

}  // namespace woss::bench

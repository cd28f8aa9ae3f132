#include <doctest.h>

#include <functional>

#include "woss/bench/benchmarks.hpp"
#include "woss/bench/cluster.hpp"
#include "woss/core/rng.hpp"
#include "woss/wf/dag.hpp"
#include "woss/wf/engine.hpp"
#include "woss/wf/scheduler.hpp"

using namespace woss;
using namespace woss::wf;

namespace {

FileId fid(const std::string& path) { return FileId::parse(path); }

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

TaskSpec produce(const std::string& id, const std::string& file, uint64_t bytes,
                 const std::string& file_class = "intermediate") {
    TaskSpec task;
    task.id = id;
    task.stage = id;
    task.kernel.type = KernelType::Produce;
    task.kernel.output_bytes = bytes;
    task.outputs.push_back({fid(file), file_class, {}});
    return task;
}

TaskSpec transform(const std::string& id, const std::vector<std::string>& inputs,
                   const std::string& output, uint64_t bytes) {
    TaskSpec task;
    task.id = id;
    task.stage = id;
    task.kernel.type = KernelType::Transform;
    task.kernel.output_bytes = bytes;
    for (const auto& input : inputs) task.inputs.push_back({fid(input), std::nullopt});
    if (!output.empty()) task.outputs.push_back({fid(output), "intermediate", {}});
    return task;
}

}  // namespace

TEST_CASE("dag validation") {
    WorkflowDag dag;
    dag.name = "bad";
    dag.tasks.push_back(transform("a", {"/x"}, "/y", 10));
    dag.tasks.push_back(transform("b", {"/y"}, "/x", 10));
    CHECK(code_of([&] { dag.validate(); }) == ErrorCode::InvalidArgument);  // cycle

    WorkflowDag orphan;
    orphan.tasks.push_back(transform("a", {"/nowhere"}, "/y", 10));
    CHECK(code_of([&] { orphan.validate(); }) == ErrorCode::InvalidArgument);

    WorkflowDag dup;
    dup.tasks.push_back(produce("p1", "/same", 1));
    dup.tasks.push_back(produce("p2", "/same", 1));
    CHECK(code_of([&] { dup.producer_index(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("dag json round-trip") {
    bench::BenchConfig cfg;
    cfg.nodes = 5;
    auto workload = bench::build_scatter_workload(cfg);
    std::string text = workload.dag.to_json_string();
    WorkflowDag parsed = WorkflowDag::from_json_string(text);
    CHECK(parsed.to_json_string() == text);
    CHECK(parsed.tasks.size() == workload.dag.tasks.size());
    CHECK(parsed.patterns.size() == workload.dag.patterns.size());
    // region inputs survive
    bool found_range = false;
    for (const auto& task : parsed.tasks) {
        for (const auto& input : task.inputs) {
            if (input.chunk_range) found_range = true;
        }
    }
    CHECK(found_range);
}

TEST_CASE("pattern annotations become hints") {
    WorkflowDag dag;
    dag.tasks.push_back(produce("p", "/mid", 10));
    dag.tasks.push_back(produce("q", "/shared", 10));
    dag.tasks.push_back(produce("r", "/red-0", 10));
    dag.tasks.push_back(produce("s", "/scat", 10));

    dag.patterns.push_back({PatternType::Pipeline, {fid("/mid")}, 0, "", 0});
    dag.patterns.push_back({PatternType::Broadcast, {fid("/shared")}, 8, "", 0});
    dag.patterns.push_back({PatternType::Reduce, {fid("/red-0")}, 0, "g1", 0});
    dag.patterns.push_back({PatternType::Scatter, {fid("/scat")}, 0, "", 4});

    WorkflowDag hinted = apply_pattern_hints(dag);
    auto hint_of = [&](const std::string& file, const std::string& key) {
        for (const auto& task : hinted.tasks) {
            for (const auto& output : task.outputs) {
                if (output.file.path == file) {
                    const std::string* v = output.hints.find(key);
                    return v ? *v : std::string{};
                }
            }
        }
        return std::string{};
    };
    CHECK(hint_of("/mid", "DP") == "local");
    CHECK(hint_of("/shared", "Replication") == "8");
    CHECK(hint_of("/red-0", "DP") == "collocation g1");
    CHECK(hint_of("/scat", "DP") == "scatter 4");

    SUBCASE("unannotated dag emits no reserved hints") {
        WorkflowDag plain;
        plain.tasks.push_back(produce("p", "/solo", 10));
        WorkflowDag result = apply_pattern_hints(plain);
        CHECK(result.tasks[0].outputs[0].hints.empty());
    }

    SUBCASE("incompatible placements on one file conflict") {
        WorkflowDag conflicted = dag;
        conflicted.patterns.push_back({PatternType::Reduce, {fid("/mid")}, 0, "g2", 0});
        CHECK(code_of([&] { apply_pattern_hints(conflicted); }) ==
              ErrorCode::ConflictingAnnotations);
    }

    SUBCASE("pipeline plus broadcast compose") {
        WorkflowDag combo;
        combo.tasks.push_back(produce("p", "/both", 10));
        combo.patterns.push_back({PatternType::Pipeline, {fid("/both")}, 0, "", 0});
        combo.patterns.push_back({PatternType::Broadcast, {fid("/both")}, 4, "", 0});
        WorkflowDag result = apply_pattern_hints(combo);
        CHECK(*result.tasks[0].outputs[0].hints.find("DP") == "local");
        CHECK(*result.tasks[0].outputs[0].hints.find("Replication") == "4");
    }
}

TEST_CASE("scheduler picks the node holding the inputs") {
    bench::ClusterOptions opts;
    opts.workers = 5;
    opts.chunk_size = 1024;
    bench::SimCluster cluster(opts);

    // place two files on w004, one on w001
    Client& c4 = cluster.client_on(NodeId{"w004"});
    Client& c1 = cluster.client_on(NodeId{"w001"});
    for (const auto& [client, path] : std::vector<std::pair<Client*, std::string>>{
             {&c4, "/a"}, {&c4, "/b"}, {&c1, "/c"}}) {
        auto handle = client->create(fid(path), HintSet{{"DP", "local"}});
        client->write(handle, std::vector<uint8_t>(1024, 1));
        client->close(handle);
    }

    SchedulerConfig config;
    LocationScheduler scheduler(config, cluster.manager());
    ClusterView view;
    view.workers = cluster.workers();
    for (const auto& w : view.workers) view.running[w] = 0;

    SUBCASE("single input, holder idle") {
        TaskSpec task = transform("t", {"/a"}, "", 0);
        auto decision = scheduler.schedule(task, view);
        CHECK(decision.node.id == "w004");
        CHECK(decision.reason == ScheduleReason::LocationHit);
        CHECK(decision.lookup_roundtrips == 1);
    }
    SUBCASE("majority holder wins") {
        TaskSpec task = transform("t", {"/a", "/b", "/c"}, "", 0);
        auto decision = scheduler.schedule(task, view);
        CHECK(decision.node.id == "w004");  // holds 2 of 3
        CHECK(decision.reason == ScheduleReason::LocationHit);
    }
    SUBCASE("busy argmax falls back to least-loaded idle") {
        view.running[NodeId{"w004"}] = 1;
        TaskSpec task = transform("t", {"/a"}, "", 0);
        auto decision = scheduler.schedule(task, view);
        CHECK(decision.reason == ScheduleReason::Fallback);
        CHECK(decision.node.id == "w000");
    }
    SUBCASE("no idle node requeues") {
        for (const auto& w : view.workers) view.running[w] = 1;
        TaskSpec task = transform("t", {"/a"}, "", 0);
        CHECK(code_of([&] { scheduler.schedule(task, view); }) == ErrorCode::NoIdleNode);
    }
    SUBCASE("inputless tasks are fallback by definition") {
        TaskSpec task = produce("p", "/new", 10);
        auto decision = scheduler.schedule(task, view);
        CHECK(decision.reason == ScheduleReason::Fallback);
        CHECK(decision.lookup_roundtrips == 0);
    }
}

TEST_CASE("argmax scaling invariance") {
    Rng rng(0xa7);
    for (int trial = 0; trial < 200; ++trial) {
        std::map<NodeId, uint64_t> scores;
        int nodes = 1 + static_cast<int>(rng.bounded(8));
        for (int i = 0; i < nodes; ++i) {
            scores[NodeId{"n" + std::to_string(i)}] = rng.bounded(5);
        }
        uint64_t factor = 1 + rng.bounded(9);
        std::map<NodeId, uint64_t> scaled;
        for (const auto& [node, score] : scores) scaled[node] = score * factor;
        CHECK(LocationScheduler::argmax_node(scores) ==
              LocationScheduler::argmax_node(scaled));
    }
}

TEST_CASE("three-stage pipeline stays on one node with hints on") {
    bench::ClusterOptions opts;
    opts.workers = 4;
    opts.chunk_size = 1024;
    bench::SimCluster cluster(opts);

    WorkflowDag dag;
    dag.name = "one-pipeline";
    dag.tasks.push_back(produce("s1", "/p/t1", 2048));
    dag.tasks.push_back(transform("s2", {"/p/t1"}, "/p/t2", 2048));
    dag.tasks.push_back(transform("s3", {"/p/t2"}, "/p/t3", 2048));
    dag.patterns.push_back(
        {PatternType::Pipeline, {fid("/p/t1"), fid("/p/t2"), fid("/p/t3")}, 0, "", 0});

    EngineConfig config;
    Engine engine(config);
    auto trace = engine.run(dag, cluster);

    REQUIRE(trace.tasks.size() == 3);
    NodeId home = trace.find("s1")->node;
    CHECK(trace.find("s2")->node == home);
    CHECK(trace.find("s3")->node == home);
    CHECK(trace.find("s2")->reason == ScheduleReason::LocationHit);
    CHECK(trace.find("s3")->reason == ScheduleReason::LocationHit);
    CHECK(trace.find("s2")->reads_remote == 0);
    CHECK(trace.find("s3")->reads_remote == 0);
}

TEST_CASE("diamond dag runs in topological order in any mode") {
    bench::ClusterOptions opts;
    opts.workers = 3;
    opts.chunk_size = 1024;
    bench::SimCluster cluster(opts);

    WorkflowDag dag;
    dag.tasks.push_back(produce("root", "/d/a", 1024));
    dag.tasks.push_back(transform("left", {"/d/a"}, "/d/l", 1024));
    dag.tasks.push_back(transform("right", {"/d/a"}, "/d/r", 1024));
    dag.tasks.push_back(transform("join", {"/d/l", "/d/r"}, "/d/out", 1024));

    EngineConfig config;
    config.apply_hints = false;
    config.scheduler.location_aware = false;
    Engine engine(config);
    auto trace = engine.run(dag, cluster);

    CHECK(!trace.any_failed);
    auto tick_of = [&](const char* id) { return trace.find(id)->start_tick; };
    CHECK(tick_of("left") >= trace.find("root")->end_tick);
    CHECK(tick_of("right") >= trace.find("root")->end_tick);
    CHECK(tick_of("join") >= trace.find("left")->end_tick);
    CHECK(tick_of("join") >= trace.find("right")->end_tick);
}

TEST_CASE("reduce task lands on the collocation anchor") {
    bench::BenchConfig cfg;
    cfg.bench = bench::BenchKind::Reduce;
    cfg.mode = bench::BenchMode::Woss;
    cfg.nodes = 6;
    cfg.chunk_size = 1024;
    cfg.file_chunks = 2;
    auto result = bench::run_benchmark(cfg);
    const auto* reduce_task = result.trace.find("reduce");
    REQUIRE(reduce_task != nullptr);
    CHECK(reduce_task->reason == ScheduleReason::LocationHit);
    CHECK(reduce_task->reads_remote == 0);
    CHECK(reduce_task->node.id == result.report.collocation_anchor);
}

TEST_CASE("hints-off execution produces byte-identical outputs") {
    bench::BenchConfig cfg;
    cfg.bench = bench::BenchKind::Pipeline;
    cfg.nodes = 5;
    cfg.chunk_size = 1024;
    cfg.file_chunks = 2;

    cfg.mode = bench::BenchMode::Woss;
    auto with_hints = bench::run_benchmark(cfg);
    cfg.mode = bench::BenchMode::Dss;
    auto without_hints = bench::run_benchmark(cfg);

    CHECK(with_hints.report.output_digest == without_hints.report.output_digest);
    CHECK(!with_hints.report.output_digest.empty());
}

TEST_CASE("a failing task aborts dependents and spares independents") {
    bench::ClusterOptions opts;
    opts.workers = 3;
    opts.chunk_size = 1024;
    bench::SimCluster cluster(opts);

    WorkflowDag dag;
    TaskSpec bad;
    bad.id = "bad";
    bad.stage = "bad";
    bad.kernel.type = KernelType::Fail;
    bad.outputs.push_back({fid("/w/doomed"), "intermediate", {}});
    dag.tasks.push_back(bad);
    dag.tasks.push_back(transform("downstream", {"/w/doomed"}, "/w/never", 10));
    dag.tasks.push_back(produce("independent", "/w/fine", 10));

    EngineConfig config;
    Engine engine(config);
    auto trace = engine.run(dag, cluster);

    CHECK(trace.any_failed);
    CHECK(trace.find("bad")->failed);
    CHECK(trace.find("downstream")->aborted);
    CHECK(!trace.find("independent")->failed);
    CHECK(!trace.find("independent")->aborted);
    CHECK(cluster.manager().get_metadata(fid("/w/fine")).state == FileState::Committed);
}

TEST_CASE("multi-slot nodes overlap tasks") {
    bench::ClusterOptions opts;
    opts.workers = 1;
    opts.chunk_size = 1024;
    bench::SimCluster cluster(opts);

    WorkflowDag dag;
    dag.tasks.push_back(produce("a", "/m/a", 1024));
    dag.tasks.push_back(produce("b", "/m/b", 1024));

    EngineConfig config;
    config.slots_per_node = 2;
    config.apply_hints = false;
    Engine engine(config);
    auto trace = engine.run(dag, cluster);
    CHECK(trace.find("a")->start_tick == trace.find("b")->start_tick);
}

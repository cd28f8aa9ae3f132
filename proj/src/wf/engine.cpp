#include "woss/wf/engine.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <set>
#include <thread>

#include "woss/core/checksum.hpp"
#include "woss/core/hints.hpp"
#include "woss/core/rng.hpp"

namespace woss::wf {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (int shift = 60; shift >= 0; shift -= 4) {
        out += digits[(v >> shift) & 0xf];
    }
    return out;
}

struct KernelIo {
    Client& store;
    Client* backend;
    CostMeter& meter;
    const EngineConfig& config;
    Rng& tag_rng;
};

std::vector<uint8_t> read_input(Client& client, const InputRef& input) {
    OpenHandle handle = client.open_read(input.file);
    std::vector<uint8_t> bytes;
    if (input.chunk_range) {
        uint64_t chunk_size = handle.chunk_size();
        uint64_t begin = input.chunk_range->first * chunk_size;
        uint64_t end = std::min<uint64_t>(input.chunk_range->second * chunk_size,
                                          handle.file_size());
        if (begin > end) begin = end;
        bytes = client.read(handle, begin, end - begin);
    } else {
        bytes = client.read_all(handle);
    }
    client.close(handle);
    return bytes;
}

void write_output(KernelIo& io, const OutputSpec& output, std::span<const uint8_t> bytes) {
    OpenHandle handle = io.store.create(output.file, output.hints);
    if (!output.hints.empty()) {
        // Tagging a file costs one manager round trip, whether the tags
        // ride the create or a separate attribute call.
        io.meter.add_xattr_roundtrip(io.config.costs.xattr_roundtrip);
    }
    io.store.write(handle, bytes);
    io.store.close(handle);
    if (io.config.useless_tagging) {
        std::string key = "probe." + hex64(io.tag_rng.next());
        io.store.set_xattr(output.file, Hint{key, "1"});
    }
}

void execute_kernel(const TaskSpec& task, KernelIo& io) {
    if (io.config.useless_get_location) {
        for (const auto& input : task.inputs) {
            io.store.get_xattr(input.file, std::string(hints::kLocation));
        }
    }

    switch (task.kernel.type) {
        case KernelType::Produce: {
            for (const auto& output : task.outputs) {
                auto bytes = synth_bytes(output.file.path, task.kernel.output_bytes);
                write_output(io, output, bytes);
            }
            break;
        }
        case KernelType::Transform: {
            uint64_t digest = 0xcbf29ce484222325ull;
            for (const auto& input : task.inputs) {
                auto bytes = read_input(io.store, input);
                digest ^= fnv1a64(bytes);
                digest *= 0x100000001b3ull;
            }
            for (const auto& output : task.outputs) {
                auto bytes = synth_bytes(hex64(digest) + output.file.path,
                                         task.kernel.output_bytes);
                write_output(io, output, bytes);
            }
            break;
        }
        case KernelType::Consume: {
            for (const auto& input : task.inputs) {
                read_input(io.store, input);
            }
            break;
        }
        case KernelType::StageIn: {
            if (!io.backend) {
                throw_error(ErrorCode::InvalidState, "stage-in without a backend store");
            }
            OpenHandle src = io.backend->open_read(task.kernel.backend_source);
            std::vector<uint8_t> bytes = io.backend->read_all(src);
            io.backend->close(src);
            for (const auto& output : task.outputs) {
                write_output(io, output, bytes);
            }
            break;
        }
        case KernelType::StageOut: {
            if (!io.backend) {
                throw_error(ErrorCode::InvalidState, "stage-out without a backend store");
            }
            if (task.inputs.size() != 1) {
                throw_error(ErrorCode::InvalidArgument,
                            "stage-out '" + task.id + "' needs exactly one input");
            }
            std::vector<uint8_t> bytes = read_input(io.store, task.inputs[0]);
            OpenHandle dst = io.backend->create(task.kernel.backend_dest, HintSet{});
            io.backend->write(dst, bytes);
            io.backend->close(dst);
            break;
        }
        case KernelType::Fail:
            throw_error(ErrorCode::TaskFailed, "task '" + task.id + "' is a planned failure");
    }
}

}  // namespace

std::vector<uint8_t> synth_bytes(std::string_view label, uint64_t size) {
    std::vector<uint8_t> out;
    out.resize(size);
    Rng rng(derive_seed(0x5157a7e5u, label));
    uint64_t word = 0;
    for (uint64_t i = 0; i < size; ++i) {
        if (i % 8 == 0) word = rng.next();
        out[i] = static_cast<uint8_t>(word >> ((i % 8) * 8));
    }
    return out;
}

const TaskRecord* ExecutionTrace::find(const std::string& task_id) const {
    for (const auto& record : tasks) {
        if (record.task_id == task_id) return &record;
    }
    return nullptr;
}

ExecutionTrace Engine::run(const WorkflowDag& input_dag, ClusterContext& cluster) {
    WorkflowDag dag =
        config_.apply_hints ? apply_pattern_hints(input_dag) : strip_patterns(input_dag);
    dag.validate();

    auto producers = dag.producer_index();
    size_t n = dag.tasks.size();
    std::vector<size_t> pending(n, 0);
    std::vector<std::vector<size_t>> dependents(n);
    for (size_t i = 0; i < n; ++i) {
        for (const auto& in : dag.tasks[i].inputs) {
            size_t producer = producers.at(in.file);
            pending[i] += 1;
            dependents[producer].push_back(i);
        }
    }

    LocationScheduler scheduler(config_.scheduler, cluster.manager());
    ClusterView view;
    view.workers = cluster.workers();
    view.slots_per_node = config_.slots_per_node;
    for (const auto& worker : view.workers) view.running[worker] = 0;

    struct Event {
        uint64_t end_tick;
        uint64_t seq;
        size_t task;
        bool operator>(const Event& other) const {
            return std::tie(end_tick, seq) > std::tie(other.end_tick, other.seq);
        }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
    std::set<size_t> ready;  // dag order keeps scheduling deterministic
    for (size_t i = 0; i < n; ++i) {
        if (pending[i] == 0) ready.insert(i);
    }

    std::vector<TaskRecord> records(n);
    std::vector<bool> done(n, false);
    std::vector<bool> started(n, false);
    uint64_t clock = 0;
    uint64_t seq = 0;
    Rng tag_rng(derive_seed(config_.seed, "useless-tags"));
    ExecutionTrace trace;
    auto wall_start = Clock::now();

    auto schedule_pass = [&]() {
        auto it = ready.begin();
        while (it != ready.end()) {
            size_t idx = *it;
            const TaskSpec& task = dag.tasks[idx];
            ScheduleDecision decision;
            try {
                decision = scheduler.schedule(task, view);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::NoIdleNode) {
                    break;  // nothing else can place either; wait for an event
                }
                throw;
            }
            it = ready.erase(it);
            started[idx] = true;
            view.running[decision.node] += 1;

            TaskRecord& record = records[idx];
            record.task_id = task.id;
            record.stage = task.stage;
            record.node = decision.node;
            record.reason = decision.reason;
            record.start_tick = clock;
            record.lookup_roundtrips = decision.lookup_roundtrips;
            (decision.reason == ScheduleReason::LocationHit ? trace.location_hits
                                                            : trace.fallbacks) += 1;

            CostMeter meter;
            Client& client = cluster.client_on(decision.node);
            Client* backend = cluster.backend_client_on(decision.node);
            client.set_meter(&meter);
            if (backend) backend->set_meter(&meter);
            auto body_start = Clock::now();
            try {
                KernelIo io{client, backend, meter, config_, tag_rng};
                execute_kernel(task, io);
            } catch (const std::exception& e) {
                record.failed = true;
                record.error = e.what();
                trace.any_failed = true;
            }
            client.set_meter(nullptr);
            if (backend) backend->set_meter(nullptr);

            record.body_wall_ms = ms_since(body_start);
            record.reads_local = meter.reads_local();
            record.reads_remote = meter.reads_remote();
            record.writes_local = meter.writes_local();
            record.writes_remote = meter.writes_remote();
            record.cache_hits = meter.cache_hits();
            record.xattr_roundtrips = meter.xattr_roundtrips();
            record.file_reads = meter.file_reads();

            uint64_t ticks = meter.ticks() +
                             decision.lookup_roundtrips * config_.costs.xattr_roundtrip;
            if (ticks == 0) ticks = 1;
            record.end_tick = clock + ticks;
            events.push(Event{record.end_tick, seq++, idx});
        }
    };

    schedule_pass();
    while (!events.empty()) {
        Event event = events.top();
        events.pop();
        if (config_.realtime && event.end_tick > clock) {
            std::this_thread::sleep_for(
                std::chrono::microseconds((event.end_tick - clock) * config_.tick_micros));
        }
        clock = event.end_tick;
        size_t idx = event.task;
        done[idx] = true;
        view.running[records[idx].node] -= 1;
        if (!records[idx].failed) {
            for (size_t dep : dependents[idx]) {
                if (--pending[dep] == 0) ready.insert(dep);
            }
        }
        schedule_pass();
    }

    // Whatever never started sits downstream of a failure.
    for (size_t i = 0; i < n; ++i) {
        if (started[i]) continue;
        records[i].task_id = dag.tasks[i].id;
        records[i].stage = dag.tasks[i].stage;
        records[i].aborted = true;
    }

    trace.makespan_ticks = clock;
    trace.wall_ms = ms_since(wall_start);
    std::sort(records.begin(), records.end(), [](const TaskRecord& a, const TaskRecord& b) {
        return std::tie(a.start_tick, a.task_id) < std::tie(b.start_tick, b.task_id);
    });
    trace.tasks = std::move(records);
    return trace;
}

}  // namespace woss::wf

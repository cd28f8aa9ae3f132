// Benchmark harness CLI: spins up an in-process cluster, runs one of the
// synthetic workloads (or the overhead ladder, or a DAG file) and writes
// the report. Exits nonzero when a run violates a store invariant.

#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "woss/bench/benchmarks.hpp"

namespace {

void add_common_options(CLI::App* cmd, woss::bench::BenchConfig& cfg, std::string& bench,
                        std::string& mode) {
    cmd->add_option("--bench", bench, "pipeline|broadcast|reduce|scatter|overhead");
    cmd->add_option("--mode", mode, "remote|dss|woss");
    cmd->add_option("--nodes", cfg.nodes, "cluster size (one manager + N-1 workers)");
    cmd->add_option("--seed", cfg.seed, "run seed");
    cmd->add_option("--chunk-size", cfg.chunk_size, "chunk size, bytes");
    cmd->add_option("--file-chunks", cfg.file_chunks, "stage file size, chunks");
    cmd->add_option("--shared-chunks", cfg.shared_chunks, "broadcast shared file size, chunks");
    cmd->add_option("--replication", cfg.replication, "broadcast replication factor");
    cmd->add_option("--scatter-k", cfg.scatter_group, "chunks per scatter region");
    cmd->add_option("--remote-cost", cfg.remote_cost, "ticks per remote chunk access");
    cmd->add_option("--node-capacity", cfg.node_capacity, "per-node capacity, bytes");
    cmd->add_flag("--realtime", cfg.realtime, "replay the tick schedule against the wall clock");
    cmd->add_option("--tick-micros", cfg.tick_micros, "wall microseconds per tick in realtime");
    cmd->add_flag("--placement-log", cfg.record_placement_log, "record placement decisions");
}

void print_summary(const woss::bench::RunReport& report) {
    std::cout << report.benchmark << " mode=" << report.mode << " nodes=" << report.nodes
              << " seed=" << report.seed << " makespan=" << report.makespan_ticks << " ticks"
              << " locationHitRate=" << report.location_hit_rate() << "\n";
    for (const auto& [name, stat] : report.classes) {
        std::cout << "  class " << name << ": local=" << stat.reads_local
                  << " remote=" << stat.reads_remote << " fraction=" << stat.local_fraction()
                  << "\n";
    }
    for (const auto& row : report.ladder) {
        std::cout << "  ladder " << row.label << ": " << row.makespan_ticks << " ticks ("
                  << (row.delta_vs_base_pct >= 0 ? "+" : "") << row.delta_vs_base_pct << "%)\n";
    }
    for (const auto& violation : report.violations) {
        std::cout << "  VIOLATION: " << violation << "\n";
    }
}

int finish(const woss::bench::RunReport& report, const std::string& out_json,
           const std::string& out_csv, bool quiet) {
    if (!quiet) print_summary(report);
    woss::bench::write_report_files(report, out_json, out_csv);
    return report.violations.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    // `run` is the default subcommand: bare `wossbench --bench ...` works.
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args[0].rfind("--", 0) == 0) {
        args.insert(args.begin(), "run");
    }

    CLI::App app{"woss benchmark harness"};
    app.require_subcommand(1);
    woss::bench::BenchConfig cfg;
    std::string bench = "pipeline";
    std::string mode = "woss";
    std::string out_json, out_csv, dag_file;
    bool quiet = false;

    auto* run_cmd = app.add_subcommand("run", "run a synthetic benchmark");
    add_common_options(run_cmd, cfg, bench, mode);
    run_cmd->add_option("--out", out_json, "report JSON path");
    run_cmd->add_option("--csv", out_csv, "report CSV path");
    run_cmd->add_flag("--quiet", quiet, "suppress the summary");

    auto* dag_cmd = app.add_subcommand("dag", "run a workflow DAG file");
    add_common_options(dag_cmd, cfg, bench, mode);
    dag_cmd->add_option("--file", dag_file, "DAG JSON file")->required();
    dag_cmd->add_option("--out", out_json, "report JSON path");
    dag_cmd->add_option("--csv", out_csv, "report CSV path");
    dag_cmd->add_flag("--quiet", quiet, "suppress the summary");

    auto* emit_cmd = app.add_subcommand("emit-dag", "write a benchmark DAG as JSON");
    add_common_options(emit_cmd, cfg, bench, mode);
    std::string emit_out;
    emit_cmd->add_option("--out", emit_out, "output path")->required();

    std::vector<const char*> argv2;
    std::string prog = argv[0];
    argv2.push_back(prog.c_str());
    for (const auto& a : args) argv2.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        cfg.bench = woss::bench::bench_kind_from_name(bench);
        cfg.mode = woss::bench::bench_mode_from_name(mode);

        if (emit_cmd->parsed()) {
            auto workload = woss::bench::build_workload(cfg);
            workload.dag.save_file(emit_out);
            std::cout << "wrote " << emit_out << "\n";
            return 0;
        }
        if (dag_cmd->parsed()) {
            auto dag = woss::wf::WorkflowDag::load_file(dag_file);
            auto result =
                woss::bench::run_workload(cfg, woss::bench::workload_from_dag(std::move(dag)));
            return finish(result.report, out_json, out_csv, quiet);
        }
        auto result = cfg.bench == woss::bench::BenchKind::Overhead
                          ? woss::bench::run_overhead_ladder(cfg)
                          : woss::bench::run_benchmark(cfg);
        return finish(result.report, out_json, out_csv, quiet);
    } catch (const woss::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace woss::bench {

struct StageStat {
    std::string name;
    uint64_t start_tick = 0;
    uint64_t end_tick = 0;
    uint64_t reads_local = 0;
    uint64_t reads_remote = 0;
    uint64_t cache_hits = 0;
    uint64_t location_hits = 0;
    uint64_t fallbacks = 0;
    double wall_ms = 0;

    double location_hit_rate() const {
        uint64_t total = location_hits + fallbacks;
        return total == 0 ? 0.0 : static_cast<double>(location_hits) / total;
    }
};

struct NodeStat {
    std::string node;
    uint64_t served_local = 0;
    uint64_t served_remote = 0;
    uint64_t served_bytes = 0;
    uint64_t capacity_bytes = 0;
    uint64_t free_bytes = 0;
};

struct ClassStat {
    uint64_t reads_local = 0;
    uint64_t reads_remote = 0;

    double local_fraction() const {
        uint64_t total = reads_local + reads_remote;
        return total == 0 ? 0.0 : static_cast<double>(reads_local) / total;
    }
};

struct LadderRow {
    std::string label;
    uint64_t makespan_ticks = 0;
    double delta_vs_base_pct = 0;
    uint64_t set_xattr_calls = 0;
    uint64_t get_location_calls = 0;
    uint64_t files_produced = 0;
};

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
    int schema_version = kReportSchemaVersion;
    std::string benchmark;
    std::string mode;
    int nodes = 0;
    uint64_t seed = 0;
    uint64_t chunk_size = 0;
    uint64_t remote_cost = 0;
    uint64_t replication = 0;
    uint64_t scatter_group = 0;

    uint64_t makespan_ticks = 0;
    double wall_ms = 0;
    std::vector<StageStat> stages;
    std::vector<NodeStat> node_stats;
    std::map<std::string, ClassStat> classes;

    uint64_t location_hits = 0;
    uint64_t fallbacks = 0;

    // Broadcast: per-node served reads of the shared file in whole-file
    // equivalents (chunk reads divided by the file's chunk count).
    std::map<std::string, double> shared_load;
    double shared_max_load = 0;
    uint64_t shared_replicas_min = 0;
    uint64_t shared_replicas_max = 0;

    bool collocation_degraded = false;
    std::string collocation_anchor;

    std::string output_digest;

    std::vector<LadderRow> ladder;
    std::vector<std::string> violations;
    std::string generated_at;

    double location_hit_rate() const {
        uint64_t total = location_hits + fallbacks;
        return total == 0 ? 0.0 : static_cast<double>(location_hits) / total;
    }
    const StageStat* stage(const std::string& name) const;
    double class_local_fraction(const std::string& file_class) const;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// Structural check of an emitted report document. Returns problems;
// empty means the schema holds.
std::vector<std::string> report_schema_errors(const nlohmann::json& doc);

void write_report_files(const RunReport& report, const std::string& json_path,
                        const std::string& csv_path);

}  // namespace woss::bench

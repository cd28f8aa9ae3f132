#include "woss/bench/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "woss/core/errors.hpp"

using nlohmann::json;

namespace woss::bench {

const StageStat* RunReport::stage(const std::string& name) const {
    for (const auto& s : stages) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

double RunReport::class_local_fraction(const std::string& file_class) const {
    auto it = classes.find(file_class);
    return it == classes.end() ? 0.0 : it->second.local_fraction();
}

json RunReport::to_json() const {
    json doc;
    doc["schemaVersion"] = schema_version;
    doc["benchmark"] = benchmark;
    doc["mode"] = mode;
    doc["nodes"] = nodes;
    doc["seed"] = seed;
    doc["chunkSize"] = chunk_size;
    doc["remoteCost"] = remote_cost;
    doc["replication"] = replication;
    doc["scatterGroup"] = scatter_group;
    doc["makespanTicks"] = makespan_ticks;
    doc["wallMs"] = wall_ms;
    doc["locationHits"] = location_hits;
    doc["fallbacks"] = fallbacks;
    doc["locationHitRate"] = location_hit_rate();

    doc["stages"] = json::array();
    for (const auto& s : stages) {
        json row;
        row["name"] = s.name;
        row["startTick"] = s.start_tick;
        row["endTick"] = s.end_tick;
        row["readsLocal"] = s.reads_local;
        row["readsRemote"] = s.reads_remote;
        row["cacheHits"] = s.cache_hits;
        row["locationHits"] = s.location_hits;
        row["fallbacks"] = s.fallbacks;
        row["locationHitRate"] = s.location_hit_rate();
        row["wallMs"] = s.wall_ms;
        doc["stages"].push_back(row);
    }

    doc["nodeStats"] = json::array();
    for (const auto& n : node_stats) {
        json row;
        row["node"] = n.node;
        row["servedLocal"] = n.served_local;
        row["servedRemote"] = n.served_remote;
        row["servedBytes"] = n.served_bytes;
        row["capacityBytes"] = n.capacity_bytes;
        row["freeBytes"] = n.free_bytes;
        doc["nodeStats"].push_back(row);
    }

    doc["classes"] = json::object();
    for (const auto& [name, stat] : classes) {
        json row;
        row["readsLocal"] = stat.reads_local;
        row["readsRemote"] = stat.reads_remote;
        row["localFraction"] = stat.local_fraction();
        doc["classes"][name] = row;
    }

    doc["sharedLoad"] = json::object();
    for (const auto& [node, load] : shared_load) {
        doc["sharedLoad"][node] = load;
    }
    doc["sharedMaxLoad"] = shared_max_load;
    doc["sharedReplicasMin"] = shared_replicas_min;
    doc["sharedReplicasMax"] = shared_replicas_max;
    doc["collocationDegraded"] = collocation_degraded;
    doc["collocationAnchor"] = collocation_anchor;
    doc["outputDigest"] = output_digest;

    doc["ladder"] = json::array();
    for (const auto& row : ladder) {
        json r;
        r["label"] = row.label;
        r["makespanTicks"] = row.makespan_ticks;
        r["deltaVsBasePct"] = row.delta_vs_base_pct;
        r["setXattrCalls"] = row.set_xattr_calls;
        r["getLocationCalls"] = row.get_location_calls;
        r["filesProduced"] = row.files_produced;
        doc["ladder"].push_back(r);
    }

    doc["violations"] = violations;
    doc["generatedAt"] = generated_at;
    return doc;
}

std::string RunReport::to_csv() const {
    // One row per stage, then one per ladder rung.
    std::ostringstream out;
    out << "kind,name,makespan_ticks,start_tick,end_tick,reads_local,reads_remote,"
           "location_hit_rate,delta_vs_base_pct\n";
    for (const auto& s : stages) {
        out << "stage," << s.name << "," << makespan_ticks << "," << s.start_tick << ","
            << s.end_tick << "," << s.reads_local << "," << s.reads_remote << ","
            << s.location_hit_rate() << ",\n";
    }
    for (const auto& row : ladder) {
        out << "ladder," << row.label << "," << row.makespan_ticks << ",,,,,,"
            << row.delta_vs_base_pct << "\n";
    }
    return out.str();
}

std::vector<std::string> report_schema_errors(const json& doc) {
    std::vector<std::string> errors;
    auto require = [&](const char* key, json::value_t type) {
        if (!doc.contains(key)) {
            errors.push_back(std::string("missing key: ") + key);
            return;
        }
        const json& value = doc[key];
        bool ok = value.type() == type ||
                  (type == json::value_t::number_unsigned && value.is_number()) ||
                  (type == json::value_t::number_float && value.is_number());
        if (!ok) {
            errors.push_back(std::string("wrong type for key: ") + key);
        }
    };
    require("schemaVersion", json::value_t::number_unsigned);
    require("benchmark", json::value_t::string);
    require("mode", json::value_t::string);
    require("nodes", json::value_t::number_unsigned);
    require("seed", json::value_t::number_unsigned);
    require("makespanTicks", json::value_t::number_unsigned);
    require("stages", json::value_t::array);
    require("nodeStats", json::value_t::array);
    require("classes", json::value_t::object);
    require("ladder", json::value_t::array);
    require("violations", json::value_t::array);
    require("generatedAt", json::value_t::string);
    if (doc.contains("schemaVersion") && doc["schemaVersion"].is_number() &&
        doc["schemaVersion"].get<int>() != kReportSchemaVersion) {
        errors.push_back("unsupported schema version");
    }
    if (doc.contains("stages") && doc["stages"].is_array()) {
        for (const auto& s : doc["stages"]) {
            if (!s.contains("name") || !s.contains("startTick") || !s.contains("endTick")) {
                errors.push_back("stage row missing fields");
                break;
            }
        }
    }
    return errors;
}

void write_report_files(const RunReport& report, const std::string& json_path,
                        const std::string& csv_path) {
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            throw_error(ErrorCode::IoError, "cannot write " + json_path);
        }
        out << report.to_json().dump(2) << "\n";
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) {
            throw_error(ErrorCode::IoError, "cannot write " + csv_path);
        }
        out << report.to_csv();
    }
}

}  // namespace woss::bench

#include "woss/wf/dag.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "woss/core/errors.hpp"
#include "woss/core/hints.hpp"

using nlohmann::json;

namespace woss::wf {

std::string_view kernel_type_name(KernelType type) {
    switch (type) {
        case KernelType::Produce: return "produce";
        case KernelType::Transform: return "transform";
        case KernelType::Consume: return "consume";
        case KernelType::StageIn: return "stagein";
        case KernelType::StageOut: return "stageout";
        case KernelType::Fail: return "fail";
    }
    return "unknown";
}

KernelType kernel_type_from_name(std::string_view name) {
    if (name == "produce") return KernelType::Produce;
    if (name == "transform") return KernelType::Transform;
    if (name == "consume") return KernelType::Consume;
    if (name == "stagein") return KernelType::StageIn;
    if (name == "stageout") return KernelType::StageOut;
    if (name == "fail") return KernelType::Fail;
    throw_error(ErrorCode::InvalidArgument, "unknown kernel type '" + std::string(name) + "'");
}

std::string_view pattern_type_name(PatternType type) {
    switch (type) {
        case PatternType::Pipeline: return "pipeline";
        case PatternType::Broadcast: return "broadcast";
        case PatternType::Reduce: return "reduce";
        case PatternType::Scatter: return "scatter";
    }
    return "unknown";
}

PatternType pattern_type_from_name(std::string_view name) {
    if (name == "pipeline") return PatternType::Pipeline;
    if (name == "broadcast") return PatternType::Broadcast;
    if (name == "reduce") return PatternType::Reduce;
    if (name == "scatter") return PatternType::Scatter;
    throw_error(ErrorCode::InvalidArgument, "unknown pattern type '" + std::string(name) + "'");
}

std::map<FileId, size_t> WorkflowDag::producer_index() const {
    std::map<FileId, size_t> producers;
    for (size_t i = 0; i < tasks.size(); ++i) {
        for (const auto& output : tasks[i].outputs) {
            auto [it, inserted] = producers.emplace(output.file, i);
            if (!inserted) {
                throw_error(ErrorCode::InvalidArgument,
                            output.file.path + " is produced by both '" + tasks[it->second].id +
                                "' and '" + tasks[i].id + "'");
            }
        }
    }
    return producers;
}

void WorkflowDag::validate() const {
    auto producers = producer_index();

    // Kahn over task dependencies; anything left over sits on a cycle.
    std::vector<size_t> pending(tasks.size(), 0);
    std::vector<std::vector<size_t>> dependents(tasks.size());
    for (size_t i = 0; i < tasks.size(); ++i) {
        for (const auto& input : tasks[i].inputs) {
            auto it = producers.find(input.file);
            if (it == producers.end()) {
                throw_error(ErrorCode::InvalidArgument,
                            "task '" + tasks[i].id + "' reads " + input.file.path +
                                " which nothing produces");
            }
            if (it->second == i) {
                throw_error(ErrorCode::InvalidArgument,
                            "task '" + tasks[i].id + "' reads its own output");
            }
            pending[i] += 1;
            dependents[it->second].push_back(i);
        }
    }
    std::queue<size_t> ready;
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (pending[i] == 0) ready.push(i);
    }
    size_t visited = 0;
    while (!ready.empty()) {
        size_t i = ready.front();
        ready.pop();
        visited += 1;
        for (size_t dep : dependents[i]) {
            if (--pending[dep] == 0) ready.push(dep);
        }
    }
    if (visited != tasks.size()) {
        throw_error(ErrorCode::InvalidArgument, "dependency cycle in workflow '" + name + "'");
    }
}

std::map<FileId, std::string> WorkflowDag::file_classes() const {
    std::map<FileId, std::string> classes;
    for (const auto& task : tasks) {
        for (const auto& output : task.outputs) {
            classes[output.file] = output.file_class;
        }
    }
    return classes;
}

namespace {

json task_to_json(const TaskSpec& task) {
    json t;
    t["id"] = task.id;
    t["stage"] = task.stage;
    json kernel;
    kernel["type"] = std::string(kernel_type_name(task.kernel.type));
    if (task.kernel.output_bytes != 0) kernel["outputBytes"] = task.kernel.output_bytes;
    if (!task.kernel.backend_source.empty()) kernel["source"] = task.kernel.backend_source.path;
    if (!task.kernel.backend_dest.empty()) kernel["dest"] = task.kernel.backend_dest.path;
    t["kernel"] = kernel;
    t["inputs"] = json::array();
    for (const auto& input : task.inputs) {
        json in;
        in["file"] = input.file.path;
        if (input.chunk_range) {
            in["chunkBegin"] = input.chunk_range->first;
            in["chunkEnd"] = input.chunk_range->second;
        }
        t["inputs"].push_back(in);
    }
    t["outputs"] = json::array();
    for (const auto& output : task.outputs) {
        json out;
        out["file"] = output.file.path;
        out["class"] = output.file_class;
        if (!output.hints.empty()) {
            json h = json::object();
            for (const auto& [key, value] : output.hints.entries()) h[key] = value;
            out["hints"] = h;
        }
        t["outputs"].push_back(out);
    }
    return t;
}

TaskSpec task_from_json(const json& t) {
    TaskSpec task;
    task.id = t.at("id").get<std::string>();
    task.stage = t.value("stage", std::string{});
    const json& kernel = t.at("kernel");
    task.kernel.type = kernel_type_from_name(kernel.at("type").get<std::string>());
    task.kernel.output_bytes = kernel.value("outputBytes", 0ull);
    if (kernel.contains("source")) {
        task.kernel.backend_source = FileId::parse(kernel["source"].get<std::string>());
    }
    if (kernel.contains("dest")) {
        task.kernel.backend_dest = FileId::parse(kernel["dest"].get<std::string>());
    }
    for (const auto& in : t.value("inputs", json::array())) {
        InputRef input;
        input.file = FileId::parse(in.at("file").get<std::string>());
        if (in.contains("chunkBegin")) {
            input.chunk_range = {in.at("chunkBegin").get<uint64_t>(),
                                 in.at("chunkEnd").get<uint64_t>()};
        }
        task.inputs.push_back(std::move(input));
    }
    for (const auto& out : t.value("outputs", json::array())) {
        OutputSpec output;
        output.file = FileId::parse(out.at("file").get<std::string>());
        output.file_class = out.value("class", std::string{});
        if (out.contains("hints")) {
            for (const auto& [key, value] : out["hints"].items()) {
                output.hints.set(key, value.get<std::string>());
            }
        }
        task.outputs.push_back(std::move(output));
    }
    return task;
}

}  // namespace

std::string WorkflowDag::to_json_string(int indent) const {
    json root;
    root["name"] = name;
    root["tasks"] = json::array();
    for (const auto& task : tasks) root["tasks"].push_back(task_to_json(task));
    root["patterns"] = json::array();
    for (const auto& pattern : patterns) {
        json p;
        p["type"] = std::string(pattern_type_name(pattern.type));
        p["files"] = json::array();
        for (const auto& file : pattern.files) p["files"].push_back(file.path);
        if (pattern.type == PatternType::Broadcast) p["replication"] = pattern.replication;
        if (pattern.type == PatternType::Reduce) p["group"] = pattern.group;
        if (pattern.type == PatternType::Scatter) p["scatterChunks"] = pattern.scatter_chunks;
        root["patterns"].push_back(p);
    }
    return root.dump(indent);
}

WorkflowDag WorkflowDag::from_json_string(const std::string& text) {
    json root = json::parse(text);
    WorkflowDag dag;
    dag.name = root.value("name", std::string{});
    for (const auto& t : root.value("tasks", json::array())) {
        dag.tasks.push_back(task_from_json(t));
    }
    for (const auto& p : root.value("patterns", json::array())) {
        PatternAnnotation pattern;
        pattern.type = pattern_type_from_name(p.at("type").get<std::string>());
        for (const auto& file : p.value("files", json::array())) {
            pattern.files.push_back(FileId::parse(file.get<std::string>()));
        }
        pattern.replication = p.value("replication", 0ull);
        pattern.group = p.value("group", std::string{});
        pattern.scatter_chunks = p.value("scatterChunks", 0ull);
        dag.patterns.push_back(std::move(pattern));
    }
    return dag;
}

WorkflowDag WorkflowDag::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw_error(ErrorCode::IoError, "cannot open DAG file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

void WorkflowDag::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw_error(ErrorCode::IoError, "cannot write DAG file " + path);
    }
    out << to_json_string() << "\n";
}

WorkflowDag apply_pattern_hints(const WorkflowDag& dag) {
    // Gather per-file hints first so conflicts surface before anything is
    // written back.
    std::map<FileId, HintSet> file_hints;
    auto add_hint = [&](const FileId& file, std::string key, std::string value) {
        HintSet& hints = file_hints[file];
        if (const std::string* existing = hints.find(key)) {
            if (*existing != value) {
                throw_error(ErrorCode::ConflictingAnnotations,
                            file.path + " annotated with " + key + "=" + *existing + " and " +
                                key + "=" + value);
            }
            return;
        }
        hints.set(std::move(key), std::move(value));
    };

    for (const auto& pattern : dag.patterns) {
        for (const auto& file : pattern.files) {
            switch (pattern.type) {
                case PatternType::Pipeline:
                    add_hint(file, std::string(hints::kDataPlacement), "local");
                    break;
                case PatternType::Broadcast:
                    add_hint(file, std::string(hints::kReplication),
                             std::to_string(pattern.replication));
                    break;
                case PatternType::Reduce:
                    add_hint(file, std::string(hints::kDataPlacement),
                             "collocation " + pattern.group);
                    break;
                case PatternType::Scatter:
                    add_hint(file, std::string(hints::kDataPlacement),
                             "scatter " + std::to_string(pattern.scatter_chunks));
                    break;
            }
        }
    }

    WorkflowDag out = dag;
    for (auto& task : out.tasks) {
        for (auto& output : task.outputs) {
            auto it = file_hints.find(output.file);
            if (it == file_hints.end()) continue;
            for (const auto& [key, value] : it->second.entries()) {
                output.hints.set(key, value);
            }
        }
    }
    return out;
}

WorkflowDag strip_patterns(const WorkflowDag& dag) {
    WorkflowDag out = dag;
    out.patterns.clear();
    for (auto& task : out.tasks) {
        for (auto& output : task.outputs) {
            output.hints = HintSet{};
        }
    }
    return out;
}

}  // namespace woss::wf

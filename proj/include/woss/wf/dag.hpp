#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "woss/core/types.hpp"

namespace woss::wf {

// One task input. A chunk range narrows the read to a region of the file,
// which is how scatter readers address their slice.
struct InputRef {
    FileId file;
    std::optional<std::pair<uint64_t, uint64_t>> chunk_range;  // [begin, end)
};

struct OutputSpec {
    FileId file;
    std::string file_class;  // report bucket: stagein / intermediate / shared / output
    HintSet hints;           // filled in by apply_pattern_hints
};

enum class KernelType : uint8_t {
    Produce,   // synthesize output_bytes of deterministic content
    Transform, // read inputs, emit output_bytes derived from them
    Consume,   // read inputs, produce nothing
    StageIn,   // copy one backend file into the intermediate store
    StageOut,  // copy one intermediate file out to the backend
    Fail,      // always throws; exercises abort propagation
};

std::string_view kernel_type_name(KernelType type);
KernelType kernel_type_from_name(std::string_view name);

struct KernelSpec {
    KernelType type = KernelType::Produce;
    uint64_t output_bytes = 0;
    FileId backend_source;  // StageIn
    FileId backend_dest;    // StageOut
};

struct TaskSpec {
    std::string id;
    std::string stage;  // report bucket, e.g. "stage-in", "s1"
    KernelSpec kernel;
    std::vector<InputRef> inputs;
    std::vector<OutputSpec> outputs;
};

enum class PatternType : uint8_t { Pipeline, Broadcast, Reduce, Scatter };

std::string_view pattern_type_name(PatternType type);
PatternType pattern_type_from_name(std::string_view name);

// A data-flow pattern over a set of files, mirroring the arrow labels a
// workflow definition would carry.
struct PatternAnnotation {
    PatternType type = PatternType::Pipeline;
    std::vector<FileId> files;
    uint64_t replication = 0;     // Broadcast
    std::string group;            // Reduce
    uint64_t scatter_chunks = 0;  // Scatter
};

struct WorkflowDag {
    std::string name;
    std::vector<TaskSpec> tasks;
    std::vector<PatternAnnotation> patterns;

    // Producing task index per file; every file has exactly one producer.
    std::map<FileId, size_t> producer_index() const;
    // Throws InvalidArgument on cycles, duplicate producers, or inputs
    // that nothing produces.
    void validate() const;

    std::string to_json_string(int indent = 2) const;
    static WorkflowDag from_json_string(const std::string& text);
    static WorkflowDag load_file(const std::string& path);
    void save_file(const std::string& path) const;

    // Lookup of a file's report class; empty string when unknown.
    std::map<FileId, std::string> file_classes() const;
};

// Resolves pattern annotations into per-output hint sets: Pipeline marks
// files for node-local placement, Broadcast sets the replication factor,
// Reduce collocates the group on one node, Scatter spreads fixed-size
// chunk groups round-robin. Throws ConflictingAnnotations when one file
// is claimed by incompatible placements.
WorkflowDag apply_pattern_hints(const WorkflowDag& dag);

// Same DAG with every pattern annotation removed (baseline runs).
WorkflowDag strip_patterns(const WorkflowDag& dag);

}  // namespace woss::wf

#include "woss/bench/verify.hpp"

#include <map>
#include <set>
#include <sstream>

#include "woss/core/hints.hpp"

namespace woss::bench {

std::vector<std::string> verify_run(SimCluster& cluster, const wf::ExecutionTrace& trace,
                                    const wf::WorkflowDag& dag) {
    std::vector<std::string> violations;
    MetadataManager& manager = cluster.metadata_manager();

    std::set<FileId> store_files;
    for (const auto& task : dag.tasks) {
        for (const auto& output : task.outputs) store_files.insert(output.file);
    }

    // location attribute vs an independent walk of the block map.
    for (const auto& file : store_files) {
        FileMetadata meta = manager.get_metadata(file);
        std::set<NodeId> expected;
        for (const auto& chunk : meta.chunks) {
            expected.insert(chunk.replicas.begin(), chunk.replicas.end());
        }
        std::string joined;
        for (const auto& node : expected) {
            if (!joined.empty()) joined += ',';
            joined += node.id;
        }
        std::string reported = manager.get_xattr(file, std::string(hints::kLocation));
        if (reported != joined) {
            violations.push_back("location mismatch for " + file.path + ": attribute '" +
                                 reported + "' vs block map '" + joined + "'");
        }
    }

    // Served-read accounting: what the nodes report serving must equal
    // what the task bodies issued against the intermediate store.
    uint64_t issued = 0;
    for (const auto& task : trace.tasks) {
        for (const auto& [file, split] : task.file_reads) {
            if (store_files.count(file) != 0) {
                issued += split.first + split.second;
            }
        }
    }
    uint64_t served = 0;
    for (const auto& id : cluster.storage_ids()) {
        auto counters = cluster.storage_node(id).counters();
        served += counters.served_reads_local + counters.served_reads_remote;
    }
    if (issued != served) {
        std::ostringstream msg;
        msg << "read accounting mismatch: clients issued " << issued << ", nodes served "
            << served;
        violations.push_back(msg.str());
    }

    // Capacity conservation on the manager's view of every storage node.
    std::map<NodeId, uint64_t> placed;
    for (const auto& file : store_files) {
        FileMetadata meta = manager.get_metadata(file);
        for (const auto& chunk : meta.chunks) {
            for (const auto& replica : chunk.replicas) {
                placed[replica] += chunk.size;
            }
        }
    }
    for (const auto& id : cluster.storage_ids()) {
        StorageNodeStatus status = cluster.storage_node(id).status();
        uint64_t manager_free = manager.member_free_bytes(id);
        uint64_t spent = status.capacity_bytes - manager_free;
        uint64_t expected = placed.count(id) ? placed[id] : 0;
        if (spent != expected) {
            std::ostringstream msg;
            msg << "capacity accounting mismatch on " << id.id << ": manager debited " << spent
                << " bytes, block maps place " << expected;
            violations.push_back(msg.str());
        }
    }

    return violations;
}

}  // namespace woss::bench

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "woss/client/client.hpp"
#include "woss/manager/metadata_manager.hpp"
#include "woss/storage/storage_node.hpp"
#include "woss/wf/engine.hpp"

namespace woss::bench {

struct ClusterOptions {
    int workers = 19;
    uint64_t chunk_size = 256 * 1024;
    uint64_t node_capacity = 1ull << 30;
    uint64_t seed = 1;
    uint64_t remote_cost = 10;
    uint64_t default_cache_bytes = 4ull << 20;
    // Single-node intermediate store on the staging machine: every access
    // is remote, the traditional central-server baseline.
    bool single_backend_store = false;
    bool empty_policy_registry = false;
    bool record_placement_log = false;
};

// In-process cluster: one metadata manager plus memory-backed storage
// nodes for the intermediate store, and a separate single-node store that
// plays the persistent staging backend. Everything call-connected, so
// benchmark runs replay deterministically.
class SimCluster : public wf::ClusterContext {
public:
    explicit SimCluster(ClusterOptions opts);
    ~SimCluster() override;

    // wf::ClusterContext
    const std::vector<NodeId>& workers() override { return worker_ids_; }
    ManagerApi& manager() override { return *manager_; }
    Client& client_on(const NodeId& worker) override;
    Client* backend_client_on(const NodeId& worker) override;

    MetadataManager& metadata_manager() { return *manager_; }
    MetadataManager& backend_manager() { return *backend_manager_; }
    const std::vector<NodeId>& storage_ids() const { return storage_ids_; }
    StorageNode& storage_node(const NodeId& id);
    InProcResolver& resolver() { return resolver_; }

    // Client colocated with the staging node; used to seed inputs and to
    // read staged-out results without touching the run's counters.
    Client& backend_setup_client() { return *backend_setup_client_; }

    void kill_node(const NodeId& id) { resolver_.mark_dead(id); }

    const ClusterOptions& options() const { return opts_; }

private:
    ClusterOptions opts_;
    std::vector<NodeId> worker_ids_;
    std::vector<NodeId> storage_ids_;

    std::unique_ptr<MetadataManager> manager_;
    std::map<NodeId, std::unique_ptr<StorageNode>> nodes_;
    InProcResolver resolver_;
    std::map<NodeId, std::unique_ptr<Client>> clients_;

    std::unique_ptr<MetadataManager> backend_manager_;
    std::unique_ptr<StorageNode> backend_node_;
    InProcResolver backend_resolver_;
    std::map<NodeId, std::unique_ptr<Client>> backend_clients_;
    std::unique_ptr<Client> backend_setup_client_;
};

// Zero-padded worker ids: w000 .. w018 for 19 workers.
std::vector<NodeId> make_worker_ids(int workers);

inline const NodeId kBackendNode{"backend"};

}  // namespace woss::bench

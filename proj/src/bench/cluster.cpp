#include "woss/bench/cluster.hpp"

#include <cstdio>

namespace woss::bench {

std::vector<NodeId> make_worker_ids(int workers) {
    std::vector<NodeId> ids;
    ids.reserve(static_cast<size_t>(workers));
    for (int i = 0; i < workers; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "w%03d", i);
        ids.emplace_back(buf);
    }
    return ids;
}

SimCluster::SimCluster(ClusterOptions opts) : opts_(opts) {
    worker_ids_ = make_worker_ids(opts_.workers);

    ManagerConfig manager_config;
    manager_config.chunk_size = opts_.chunk_size;
    manager_config.record_placement_log = opts_.record_placement_log;
    PolicyRegistry registry =
        opts_.empty_policy_registry ? PolicyRegistry{} : PolicyRegistry::standard();
    manager_ = std::make_unique<MetadataManager>(manager_config, std::move(registry));
    manager_->set_storage_resolver(&resolver_);

    if (opts_.single_backend_store) {
        // The central-server baseline: one big storage node takes every
        // chunk; workers only compute.
        storage_ids_ = {kBackendNode};
        StorageNodeConfig node_config;
        node_config.id = kBackendNode;
        node_config.capacity_bytes = opts_.node_capacity * static_cast<uint64_t>(opts_.workers);
        auto node = std::make_unique<StorageNode>(node_config, std::make_unique<MemStore>());
        node->connect(manager_.get(), &resolver_);
        resolver_.add(kBackendNode, node.get());
        node->register_with_manager();
        nodes_.emplace(kBackendNode, std::move(node));
    } else {
        storage_ids_ = worker_ids_;
        for (const auto& id : storage_ids_) {
            StorageNodeConfig node_config;
            node_config.id = id;
            node_config.capacity_bytes = opts_.node_capacity;
            auto node = std::make_unique<StorageNode>(node_config, std::make_unique<MemStore>());
            node->connect(manager_.get(), &resolver_);
            resolver_.add(id, node.get());
            node->register_with_manager();
            nodes_.emplace(id, std::move(node));
        }
    }

    for (const auto& id : worker_ids_) {
        ClientConfig client_config;
        client_config.client_node = id;
        client_config.colocated_node = id;
        client_config.default_cache_bytes = opts_.default_cache_bytes;
        client_config.rng_seed = opts_.seed;
        auto client = std::make_unique<Client>(client_config, *manager_, resolver_);
        client->cost_model().remote_access = opts_.remote_cost;
        clients_.emplace(id, std::move(client));
    }

    // Staging backend: its own single-node store, never part of the
    // intermediate store's placement pool.
    ManagerConfig backend_config;
    backend_config.chunk_size = opts_.chunk_size;
    backend_manager_ = std::make_unique<MetadataManager>(backend_config);
    backend_manager_->set_storage_resolver(&backend_resolver_);
    StorageNodeConfig backend_node_config;
    backend_node_config.id = kBackendNode;
    backend_node_config.capacity_bytes =
        opts_.node_capacity * static_cast<uint64_t>(opts_.workers + 1);
    backend_node_ =
        std::make_unique<StorageNode>(backend_node_config, std::make_unique<MemStore>());
    backend_node_->connect(backend_manager_.get(), &backend_resolver_);
    backend_resolver_.add(kBackendNode, backend_node_.get());
    backend_node_->register_with_manager();

    for (const auto& id : worker_ids_) {
        ClientConfig client_config;
        client_config.client_node = id;
        client_config.colocated_node = id;  // never matches the staging node
        client_config.default_cache_bytes = opts_.default_cache_bytes;
        client_config.rng_seed = opts_.seed;
        auto client = std::make_unique<Client>(client_config, *backend_manager_,
                                               backend_resolver_);
        client->cost_model().remote_access = opts_.remote_cost;
        backend_clients_.emplace(id, std::move(client));
    }

    ClientConfig setup_config;
    setup_config.client_node = kBackendNode;
    setup_config.colocated_node = kBackendNode;
    setup_config.rng_seed = opts_.seed;
    backend_setup_client_ =
        std::make_unique<Client>(setup_config, *backend_manager_, backend_resolver_);
}

SimCluster::~SimCluster() = default;

Client& SimCluster::client_on(const NodeId& worker) {
    auto it = clients_.find(worker);
    if (it == clients_.end()) {
        throw_error(ErrorCode::InvalidArgument, "no client on " + worker.id);
    }
    return *it->second;
}

Client* SimCluster::backend_client_on(const NodeId& worker) {
    auto it = backend_clients_.find(worker);
    return it == backend_clients_.end() ? nullptr : it->second.get();
}

StorageNode& SimCluster::storage_node(const NodeId& id) {
    if (opts_.single_backend_store && id == kBackendNode) {
        return *nodes_.at(kBackendNode);
    }
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        throw_error(ErrorCode::InvalidArgument, "no storage node " + id.id);
    }
    return *it->second;
}

}  // namespace woss::bench

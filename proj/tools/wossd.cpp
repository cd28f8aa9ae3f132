// Cluster daemons: `wossd manager` serves metadata on one TCP endpoint,
// `wossd storage` runs one storage node against a manager.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "woss/manager/metadata_manager.hpp"
#include "woss/net/remote.hpp"
#include "woss/net/server.hpp"
#include "woss/storage/storage_node.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

void wait_for_stop() {
    while (!g_stop.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
}

int run_manager(const std::string& listen, uint64_t chunk_size, uint32_t heartbeat_interval_ms,
                uint32_t heartbeat_misses) {
    woss::ManagerConfig config;
    config.chunk_size = chunk_size;
    config.heartbeat_misses = heartbeat_misses;
    woss::MetadataManager manager(config);
    woss::net::RemoteResolver resolver(manager);
    manager.set_storage_resolver(&resolver);

    woss::net::FrameServer server(listen, woss::net::manager_handler(manager));
    server.start();
    std::cout << "manager listening on " << server.address() << " (chunk size " << chunk_size
              << " bytes)\n";

    std::thread sweeper([&] {
        while (!g_stop.load()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(heartbeat_interval_ms));
            manager.heartbeat_sweep();
        }
    });
    wait_for_stop();
    sweeper.join();
    server.stop();
    return 0;
}

int run_storage(const std::string& manager_endpoint, const std::string& listen,
                const std::string& store_spec, uint64_t capacity, const std::string& node_id,
                uint32_t heartbeat_interval_ms) {
    woss::StorageNodeConfig config;
    config.id = woss::NodeId{node_id};
    config.capacity_bytes = capacity;
    woss::StorageNode node(config, woss::make_chunk_store(store_spec));
    node.set_executor(std::make_shared<woss::ThreadedExecutor>(
        2, [&node] { return node.foreground_busy(); }));

    woss::net::RemoteManager manager(manager_endpoint);
    woss::net::RemoteResolver peers(manager);
    node.connect(&manager, &peers);

    woss::net::FrameServer server(listen, woss::net::storage_handler(node));
    server.start();
    node.set_address(server.address());
    node.register_with_manager();
    std::cout << "storage node " << node_id << " serving " << store_spec << " on "
              << server.address() << " (capacity " << capacity << " bytes)\n";

    std::thread heartbeats([&] {
        while (!g_stop.load()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(heartbeat_interval_ms));
            try {
                node.heartbeat();
            } catch (const woss::Error& e) {
                std::cerr << "heartbeat failed: " << e.what() << "\n";
            }
        }
    });
    wait_for_stop();
    heartbeats.join();
    server.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    CLI::App app{"woss cluster daemons"};
    app.require_subcommand(1);

    auto* manager_cmd = app.add_subcommand("manager", "run the metadata manager");
    std::string listen = "127.0.0.1:4440";
    uint64_t chunk_size = woss::kDefaultChunkSize;
    uint32_t heartbeat_interval_ms = 1000;
    uint32_t heartbeat_misses = 3;
    manager_cmd->add_option("--listen", listen, "endpoint to listen on");
    manager_cmd->add_option("--chunk-size", chunk_size, "chunk size in bytes");
    manager_cmd->add_option("--heartbeat-interval", heartbeat_interval_ms,
                            "heartbeat sweep interval, ms");
    manager_cmd->add_option("--heartbeat-misses", heartbeat_misses,
                            "missed heartbeats before a node is dead");
    manager_cmd->set_config("--config", "", "key=value config file");

    auto* storage_cmd = app.add_subcommand("storage", "run a storage node");
    std::string manager_endpoint = "127.0.0.1:4440";
    std::string storage_listen = "127.0.0.1:0";
    std::string store_spec = "mem";
    uint64_t capacity = 1ull << 30;
    std::string node_id;
    uint32_t node_heartbeat_ms = 1000;
    storage_cmd->add_option("--manager", manager_endpoint, "manager endpoint");
    storage_cmd->add_option("--listen", storage_listen, "endpoint to listen on");
    storage_cmd->add_option("--store", store_spec, "mem or dir:<path>");
    storage_cmd->add_option("--capacity", capacity, "capacity in bytes");
    storage_cmd->add_option("--node-id", node_id, "unique node id")->required();
    storage_cmd->add_option("--heartbeat-interval", node_heartbeat_ms, "heartbeat period, ms");
    storage_cmd->set_config("--config", "", "key=value config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (manager_cmd->parsed()) {
            return run_manager(listen, chunk_size, heartbeat_interval_ms, heartbeat_misses);
        }
        return run_storage(manager_endpoint, storage_listen, store_spec, capacity, node_id,
                           node_heartbeat_ms);
    } catch (const woss::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

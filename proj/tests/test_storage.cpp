#include <doctest.h>

#include <functional>

#include <chrono>
#include <filesystem>
#include <thread>

#include "woss/core/checksum.hpp"
#include "woss/core/rng.hpp"
#include "woss/manager/metadata_manager.hpp"
#include "woss/storage/storage_node.hpp"

using namespace woss;
using namespace std::chrono;

namespace {

FileId fid(const std::string& path) { return FileId::parse(path); }

std::vector<uint8_t> bytes_of(const std::string& s) {
    return std::vector<uint8_t>(s.begin(), s.end());
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

// A manager plus a handful of connected nodes, call-wired.
struct MiniCluster {
    explicit MiniCluster(int count, uint64_t capacity = 1 << 20,
                         bool threaded_executor = false) {
        ManagerConfig config;
        config.chunk_size = 1024;
        manager = std::make_unique<MetadataManager>(config);
        manager->set_storage_resolver(&resolver);
        for (int i = 0; i < count; ++i) {
            StorageNodeConfig node_config;
            node_config.id = NodeId{"n" + std::to_string(i)};
            node_config.capacity_bytes = capacity;
            node_config.retry_backoff = milliseconds(1);
            auto node = std::make_unique<StorageNode>(node_config,
                                                      std::make_unique<MemStore>());
            node->connect(manager.get(), &resolver);
            if (threaded_executor) {
                auto* raw = node.get();
                node->set_executor(std::make_shared<ThreadedExecutor>(
                    2, [raw] { return raw->foreground_busy(); }));
            }
            resolver.add(node_config.id, node.get());
            node->register_with_manager();
            nodes.push_back(std::move(node));
        }
    }

    StorageNode& node(int i) { return *nodes[static_cast<size_t>(i)]; }

    // Allocates and writes one chunk through node `writer`.
    void put(int writer, const FileId& file, const std::vector<uint8_t>& payload,
             const HintSet& hints, ReplicationMode mode = ReplicationMode::EagerParallel) {
        auto decision =
            manager->allocate_chunks(file, 1, hints, nodes[static_cast<size_t>(writer)]->id());
        PutChunkArgs args;
        args.file = file;
        args.index = decision.chunks[0].index;
        args.hint_snapshot = hints;
        args.requester = nodes[static_cast<size_t>(writer)]->id();
        args.replica_targets = decision.chunks[0].replica_targets;
        args.mode = mode;
        args.payload = payload;
        nodes[static_cast<size_t>(writer)]->put_chunk(args);
    }

    std::unique_ptr<MetadataManager> manager;
    InProcResolver resolver;
    std::vector<std::unique_ptr<StorageNode>> nodes;
};

}  // namespace

TEST_CASE("chunk stores round-trip and detect corruption") {
    auto check_store = [](ChunkStore& store) {
        auto payload = bytes_of("hello chunk");
        store.put(fid("/f"), 0, payload, fnv1a64(payload));
        CHECK(store.contains(fid("/f"), 0));
        auto chunk = store.get(fid("/f"), 0);
        REQUIRE(chunk.has_value());
        CHECK(chunk->bytes == payload);
        CHECK(fnv1a64(chunk->bytes) == chunk->checksum);
        CHECK(store.used_bytes() == payload.size());

        store.corrupt_for_test(fid("/f"), 0);
        chunk = store.get(fid("/f"), 0);
        REQUIRE(chunk.has_value());
        CHECK(fnv1a64(chunk->bytes) != chunk->checksum);

        CHECK(!store.get(fid("/f"), 1).has_value());
        store.erase_file(fid("/f"));
        CHECK(!store.contains(fid("/f"), 0));
        CHECK(store.used_bytes() == 0);
    };

    SUBCASE("memory") {
        MemStore store;
        check_store(store);
    }
    SUBCASE("directory") {
        auto root = std::filesystem::temp_directory_path() / "woss-dirstore-test";
        std::filesystem::remove_all(root);
        DirStore store(root.string());
        check_store(store);
        std::filesystem::remove_all(root);
    }
}

TEST_CASE("store spec parsing") {
    CHECK(make_chunk_store("mem") != nullptr);
    CHECK(code_of([] { make_chunk_store("tape"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("put then get returns identical bytes and counts the read") {
    MiniCluster cluster(2);
    auto payload = bytes_of("some data");
    cluster.manager->create_file(fid("/f"), NodeId{"n0"}, HintSet{});
    cluster.put(0, fid("/f"), payload, HintSet{});

    GetChunkArgs get{fid("/f"), 0, NodeId{"n0"}};
    CHECK(cluster.node(0).get_chunk(get) == payload);
    CHECK(cluster.node(0).counters().served_reads_local == 1);

    get.requester = NodeId{"n1"};
    CHECK(cluster.node(0).get_chunk(get) == payload);
    CHECK(cluster.node(0).counters().served_reads_remote == 1);
    auto [local, remote] = cluster.node(0).served_reads_for(fid("/f"));
    CHECK(local == 1);
    CHECK(remote == 1);
}

TEST_CASE("get errors") {
    MiniCluster cluster(1);
    cluster.manager->create_file(fid("/f"), NodeId{"n0"}, HintSet{});
    cluster.put(0, fid("/f"), bytes_of("x"), HintSet{});

    SUBCASE("absent chunk") {
        GetChunkArgs get{fid("/f"), 7, NodeId{"n0"}};
        CHECK(code_of([&] { cluster.node(0).get_chunk(get); }) == ErrorCode::NotFound);
    }
    SUBCASE("corrupted payload") {
        cluster.node(0).store().corrupt_for_test(fid("/f"), 0);
        GetChunkArgs get{fid("/f"), 0, NodeId{"n0"}};
        CHECK(code_of([&] { cluster.node(0).get_chunk(get); }) == ErrorCode::ChecksumMismatch);
    }
}

TEST_CASE("put rejects chunks beyond free capacity") {
    MiniCluster cluster(1, 100);
    cluster.manager->create_file(fid("/big"), NodeId{"n0"}, HintSet{});
    PutChunkArgs args;
    args.file = fid("/big");
    args.index = 0;
    args.requester = NodeId{"n0"};
    args.payload.assign(200, 0xab);
    CHECK(code_of([&] { cluster.node(0).put_chunk(args); }) == ErrorCode::OutOfSpace);
}

TEST_CASE("eager parallel replication reaches every target") {
    MiniCluster cluster(5);
    HintSet hints{{"Replication", "4"}};
    cluster.manager->create_file(fid("/r"), NodeId{"n0"}, hints);
    cluster.put(0, fid("/r"), bytes_of("replicated"), hints);

    auto meta = cluster.manager->get_metadata(fid("/r"));
    CHECK(meta.chunks[0].replicas.size() == 4);

    SUBCASE("replicas serve identical bytes") {
        for (const auto& replica : meta.chunks[0].replicas) {
            for (auto& node : cluster.nodes) {
                if (node->id() == replica) {
                    GetChunkArgs get{fid("/r"), 0, NodeId{"n0"}};
                    CHECK(node->get_chunk(get) == bytes_of("replicated"));
                }
            }
        }
    }
}

TEST_CASE("replication factor equal to cluster size fills every node") {
    MiniCluster cluster(3);
    HintSet hints{{"Replication", "3"}};
    cluster.manager->create_file(fid("/all"), NodeId{"n0"}, hints);
    cluster.put(0, fid("/all"), bytes_of("everywhere"), hints);
    auto meta = cluster.manager->get_metadata(fid("/all"));
    CHECK(meta.chunks[0].replicas.size() == 3);
}

TEST_CASE("dead target degrades the job") {
    MiniCluster cluster(4);
    HintSet hints{{"Replication", "3"}, {"RepSmntc", "pessimistic"}};
    cluster.manager->create_file(fid("/deg"), NodeId{"n0"}, hints);
    auto decision = cluster.manager->allocate_chunks(fid("/deg"), 1, hints, NodeId{"n0"});
    REQUIRE(decision.chunks[0].replica_targets.size() == 2);
    cluster.resolver.mark_dead(decision.chunks[0].replica_targets[0]);

    PutChunkArgs args;
    args.file = fid("/deg");
    args.index = 0;
    args.hint_snapshot = hints;
    args.requester = NodeId{"n0"};
    args.replica_targets = decision.chunks[0].replica_targets;
    args.payload = bytes_of("fragile");
    CHECK(code_of([&] { cluster.node(0).put_chunk(args); }) == ErrorCode::ReplicationDegraded);

    // one live extra replica made it
    auto meta = cluster.manager->get_metadata(fid("/deg"));
    CHECK(meta.chunks[0].replicas.size() == 2);
    CHECK(cluster.node(0).counters().degraded_jobs == 1);
}

TEST_CASE("lazy chained replication commits hop by hop") {
    MiniCluster cluster(4);
    HintSet hints{{"Replication", "4"}, {"RepSmntc", "pessimistic"}};
    cluster.manager->create_file(fid("/chain"), NodeId{"n0"}, hints);
    cluster.put(0, fid("/chain"), bytes_of("chained"), hints, ReplicationMode::LazyChained);

    auto log = cluster.manager->commit_log(fid("/chain"));
    REQUIRE(log.size() == 4);
    CHECK(log[0].second.id == "n0");  // source commits first
    CHECK(log[1].second.id == "n1");
    CHECK(log[2].second.id == "n2");
    CHECK(log[3].second.id == "n3");

    SUBCASE("broken hop leaves the prefix only") {
        HintSet hints2{{"Replication", "4"}, {"RepSmntc", "pessimistic"}};
        cluster.manager->create_file(fid("/broken"), NodeId{"n0"}, hints2);
        auto decision =
            cluster.manager->allocate_chunks(fid("/broken"), 1, hints2, NodeId{"n0"});
        REQUIRE(decision.chunks[0].replica_targets.size() == 3);
        // kill the middle hop
        cluster.resolver.mark_dead(decision.chunks[0].replica_targets[1]);

        PutChunkArgs args;
        args.file = fid("/broken");
        args.index = 0;
        args.hint_snapshot = hints2;
        args.requester = NodeId{"n0"};
        args.replica_targets = decision.chunks[0].replica_targets;
        args.mode = ReplicationMode::LazyChained;
        args.payload = bytes_of("short");
        cluster.node(0).put_chunk(args);

        auto meta = cluster.manager->get_metadata(fid("/broken"));
        CHECK(meta.chunks[0].replicas.size() == 2);  // source + first hop
        uint64_t breaks = 0;
        for (auto& node : cluster.nodes) breaks += node->counters().chain_breaks;
        CHECK(breaks == 1);
    }
}

TEST_CASE("empty target list is a no-op") {
    MiniCluster cluster(2);
    cluster.manager->create_file(fid("/solo"), NodeId{"n0"}, HintSet{});
    cluster.put(0, fid("/solo"), bytes_of("alone"), HintSet{}, ReplicationMode::LazyChained);
    auto meta = cluster.manager->get_metadata(fid("/solo"));
    CHECK(meta.chunks[0].replicas.size() == 1);
}

TEST_CASE("optimistic acks fast, pessimistic waits for the slow replica") {
    MiniCluster cluster(3, 1 << 20, /*threaded_executor=*/true);
    const auto delay = milliseconds(200);
    cluster.node(1).set_replica_push_delay_for_test(delay);
    cluster.node(2).set_replica_push_delay_for_test(delay);

    auto timed_put = [&](const char* path, const char* semantics) {
        HintSet hints{{"Replication", "3"}, {"RepSmntc", semantics}};
        cluster.manager->create_file(fid(path), NodeId{"n0"}, hints);
        auto start = steady_clock::now();
        cluster.put(0, fid(path), bytes_of("timed"), hints);
        return duration_cast<milliseconds>(steady_clock::now() - start);
    };

    auto optimistic = timed_put("/opt", "optimistic");
    CHECK(optimistic < milliseconds(100));

    auto pessimistic = timed_put("/pess", "pessimistic");
    CHECK(pessimistic >= delay);

    // both reach full replication
    auto deadline = steady_clock::now() + seconds(5);
    while (steady_clock::now() < deadline) {
        if (cluster.manager->get_metadata(fid("/opt")).chunks[0].replicas.size() == 3) break;
        std::this_thread::sleep_for(milliseconds(5));
    }
    CHECK(cluster.manager->get_metadata(fid("/opt")).chunks[0].replicas.size() == 3);
    CHECK(cluster.manager->get_metadata(fid("/pess")).chunks[0].replicas.size() == 3);
}

TEST_CASE("delete_chunks frees the store") {
    MiniCluster cluster(1);
    cluster.manager->create_file(fid("/gone"), NodeId{"n0"}, HintSet{});
    cluster.put(0, fid("/gone"), bytes_of("bye"), HintSet{});
    CHECK(cluster.node(0).store().used_bytes() > 0);
    cluster.manager->delete_file(fid("/gone"));
    CHECK(cluster.node(0).store().used_bytes() == 0);
}

TEST_CASE("read integrity fuzz over random payloads") {
    MiniCluster cluster(3);
    Rng rng(0xbeef);
    for (int i = 0; i < 50; ++i) {
        FileId file = fid("/fuzz-" + std::to_string(i));
        cluster.manager->create_file(file, NodeId{"n0"}, HintSet{});
        std::vector<uint8_t> payload(rng.bounded(1000) + 1);
        for (auto& b : payload) b = static_cast<uint8_t>(rng.next());
        int writer = static_cast<int>(rng.bounded(3));
        cluster.put(writer, file, payload, HintSet{});

        auto meta = cluster.manager->get_metadata(file);
        const NodeId& holder = meta.chunks[0].replicas[0];
        for (auto& node : cluster.nodes) {
            if (node->id() == holder) {
                GetChunkArgs get{file, 0, NodeId{"n0"}};
                auto bytes = node->get_chunk(get);
                CHECK(bytes == payload);
                CHECK(fnv1a64(bytes) == fnv1a64(payload));
            }
        }
    }
}

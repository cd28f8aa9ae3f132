#include <doctest.h>

#include <functional>

#include <atomic>
#include <chrono>
#include <thread>

#include "support/placement_oracle.hpp"
#include "support/random_workload.hpp"
#include "woss/core/hints.hpp"
#include "woss/manager/metadata_manager.hpp"

using namespace woss;

namespace {

MetadataManager make_manager(uint64_t chunk_size = 1024, bool log = false) {
    ManagerConfig config;
    config.chunk_size = chunk_size;
    config.record_placement_log = log;
    return MetadataManager(config);
}

void add_node(MetadataManager& manager, const std::string& id, uint64_t chunks,
              uint64_t chunk_size = 1024) {
    StorageNodeStatus status;
    status.node = NodeId{id};
    status.capacity_bytes = chunks * chunk_size;
    status.free_bytes = status.capacity_bytes;
    manager.node_register(status);
}

FileId fid(const std::string& path) { return FileId::parse(path); }

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("create_file") {
    auto manager = make_manager();
    add_node(manager, "n1", 100);

    auto meta = manager.create_file(fid("/a"), NodeId{"n1"}, HintSet{});
    CHECK(meta.chunks.empty());
    CHECK(meta.xattrs.empty());
    CHECK(meta.state == FileState::Creating);

    CHECK(code_of([&] { manager.create_file(fid("/a"), NodeId{"n1"}, HintSet{}); }) ==
          ErrorCode::FileExists);

    auto hinted = manager.create_file(fid("/b"), NodeId{"n1"}, HintSet{{"DP", "local"}});
    CHECK(*hinted.xattrs.find("DP") == "local");
    auto decision = manager.allocate_chunks(fid("/b"), 2, hinted.xattrs, NodeId{"n1"});
    for (const auto& chunk : decision.chunks) {
        CHECK(chunk.primary.id == "n1");
        CHECK(chunk.policy == PlacementPolicyKind::Local);
    }

    CHECK(code_of([&] {
              manager.create_file(fid("/c"), NodeId{"n1"}, HintSet{{"location", "x"}});
          }) == ErrorCode::ReadOnlyAttribute);
}

TEST_CASE("scatter placement matches the documented example") {
    // 8 chunks, groups of 2, four nodes: chunk pairs land on n0..n3 in order.
    auto manager = make_manager();
    for (int i = 0; i < 4; ++i) add_node(manager, "n" + std::to_string(i), 100);

    HintSet hints{{"DP", "scatter 2"}};
    manager.create_file(fid("/s"), NodeId{"n0"}, hints);
    auto decision = manager.allocate_chunks(fid("/s"), 8, hints, NodeId{"n0"});
    std::vector<std::string> expected = {"n0", "n0", "n1", "n1", "n2", "n2", "n3", "n3"};
    for (size_t i = 0; i < 8; ++i) {
        CHECK(decision.chunks[i].primary.id == expected[i]);
        CHECK(decision.chunks[i].policy == PlacementPolicyKind::Scatter);
    }

    SUBCASE("global chunk index carries across batches") {
        auto more = manager.allocate_chunks(fid("/s"), 2, hints, NodeId{"n0"});
        CHECK(more.chunks[0].index == 8);
        CHECK(more.chunks[0].primary.id == "n0");  // (8/2) % 4 == 0
    }
}

TEST_CASE("local placement with ample capacity") {
    auto manager = make_manager();
    for (int i = 0; i < 4; ++i) add_node(manager, "n" + std::to_string(i), 100);
    HintSet hints{{"DP", "local"}};
    manager.create_file(fid("/l"), NodeId{"n2"}, hints);
    auto decision = manager.allocate_chunks(fid("/l"), 3, hints, NodeId{"n2"});
    for (const auto& chunk : decision.chunks) CHECK(chunk.primary.id == "n2");
}

TEST_CASE("default round-robin from a fresh cursor") {
    auto manager = make_manager();
    for (int i = 0; i < 3; ++i) add_node(manager, "n" + std::to_string(i), 100);
    manager.create_file(fid("/d"), NodeId{"n0"}, HintSet{});
    auto decision = manager.allocate_chunks(fid("/d"), 6, HintSet{}, NodeId{"n0"});
    std::vector<std::string> expected = {"n0", "n1", "n2", "n0", "n1", "n2"};
    for (size_t i = 0; i < 6; ++i) {
        CHECK(decision.chunks[i].primary.id == expected[i]);
        CHECK(decision.chunks[i].policy == PlacementPolicyKind::Default);
    }
}

TEST_CASE("collocated files share one anchor") {
    auto manager = make_manager();
    for (int i = 0; i < 5; ++i) add_node(manager, "n" + std::to_string(i), 100);
    HintSet hints{{"DP", "collocation g1"}};
    manager.create_file(fid("/c1"), NodeId{"n3"}, hints);
    manager.create_file(fid("/c2"), NodeId{"n4"}, hints);
    auto d1 = manager.allocate_chunks(fid("/c1"), 4, hints, NodeId{"n3"});
    auto d2 = manager.allocate_chunks(fid("/c2"), 4, hints, NodeId{"n4"});
    std::string anchor = d1.chunks[0].primary.id;
    for (const auto& chunk : d1.chunks) CHECK(chunk.primary.id == anchor);
    for (const auto& chunk : d2.chunks) CHECK(chunk.primary.id == anchor);
}

TEST_CASE("local spills to the default path when the node fills") {
    auto manager = make_manager();
    add_node(manager, "n0", 2);  // room for two chunks only
    add_node(manager, "n1", 100);
    HintSet hints{{"DP", "local"}};
    manager.create_file(fid("/spill"), NodeId{"n0"}, hints);
    auto decision = manager.allocate_chunks(fid("/spill"), 4, hints, NodeId{"n0"});
    CHECK(decision.chunks[0].primary.id == "n0");
    CHECK(decision.chunks[1].primary.id == "n0");
    CHECK(decision.chunks[2].primary.id == "n1");
    CHECK(decision.chunks[2].policy == PlacementPolicyKind::Default);
    CHECK(decision.chunks[3].primary.id == "n1");
}

TEST_CASE("allocation failures leave no trace") {
    auto manager = make_manager();
    add_node(manager, "n0", 3);
    manager.create_file(fid("/big"), NodeId{"n0"}, HintSet{});
    CHECK(code_of([&] {
              manager.allocate_chunks(fid("/big"), 10, HintSet{}, NodeId{"n0"});
          }) == ErrorCode::NoCapacity);
    // capacity intact, cursor unmoved
    CHECK(manager.member_free_bytes(NodeId{"n0"}) == 3 * 1024);
    auto decision = manager.allocate_chunks(fid("/big"), 1, HintSet{}, NodeId{"n0"});
    CHECK(decision.chunks[0].primary.id == "n0");
    CHECK(decision.chunks[0].index == 0);
}

TEST_CASE("replication targets rotate after the primary") {
    auto manager = make_manager();
    for (int i = 0; i < 4; ++i) add_node(manager, "n" + std::to_string(i), 100);
    HintSet hints{{"DP", "local"}, {"Replication", "3"}};
    manager.create_file(fid("/r"), NodeId{"n2"}, hints);
    auto decision = manager.allocate_chunks(fid("/r"), 1, hints, NodeId{"n2"});
    CHECK(decision.chunks[0].primary.id == "n2");
    REQUIRE(decision.chunks[0].replica_targets.size() == 2);
    CHECK(decision.chunks[0].replica_targets[0].id == "n3");
    CHECK(decision.chunks[0].replica_targets[1].id == "n0");
}

TEST_CASE("commit_chunk updates the block map") {
    auto manager = make_manager();
    add_node(manager, "n0", 100);
    manager.create_file(fid("/f"), NodeId{"n0"}, HintSet{});
    manager.allocate_chunks(fid("/f"), 1, HintSet{}, NodeId{"n0"});

    CommitChunkArgs commit{fid("/f"), 0, 512, NodeId{"n0"}, 99};
    auto meta = manager.commit_chunk(commit);
    CHECK(meta.chunks[0].replicas.size() == 1);
    CHECK(meta.chunks[0].size == 512);

    SUBCASE("idempotent per node") {
        meta = manager.commit_chunk(commit);
        CHECK(meta.chunks[0].replicas.size() == 1);
    }
    SUBCASE("node outside the allocation is rejected") {
        add_node(manager, "n9", 100);
        commit.node = NodeId{"n9"};
        CHECK(code_of([&] { manager.commit_chunk(commit); }) == ErrorCode::UnknownAllocation);
    }
    SUBCASE("unallocated index is rejected") {
        commit.index = 5;
        CHECK(code_of([&] { manager.commit_chunk(commit); }) == ErrorCode::UnknownAllocation);
    }
    SUBCASE("partial-chunk slack is credited back") {
        // 1024 debited at allocation, 512 actually written
        CHECK(manager.member_free_bytes(NodeId{"n0"}) == 100 * 1024 - 512);
    }
}

TEST_CASE("xattr set and get") {
    auto manager = make_manager();
    add_node(manager, "n0", 100);
    manager.create_file(fid("/x"), NodeId{"n0"}, HintSet{});

    manager.set_xattr(fid("/x"), Hint{"Replication", "4"});
    CHECK(manager.get_xattr(fid("/x"), "Replication") == "4");

    CHECK(code_of([&] { manager.set_xattr(fid("/x"), Hint{"location", "n1"}); }) ==
          ErrorCode::ReadOnlyAttribute);
    CHECK(code_of([&] { manager.set_xattr(fid("/nope"), Hint{"DP", "local"}); }) ==
          ErrorCode::UnknownFile);
    CHECK(code_of([&] { manager.get_xattr(fid("/x"), "myapp.unset"); }) ==
          ErrorCode::UnknownAttribute);
    CHECK(manager.get_xattr(fid("/x"), "DP") == "");  // reserved but unset

    // unknown keys are stored and propagated
    manager.set_xattr(fid("/x"), Hint{"myapp.note", "hello"});
    CHECK(manager.get_xattr(fid("/x"), "myapp.note") == "hello");
}

TEST_CASE("location attributes are computed from the block map") {
    auto manager = make_manager();
    for (int i = 0; i < 4; ++i) add_node(manager, "n" + std::to_string(i), 100);

    SUBCASE("empty file") {
        manager.create_file(fid("/empty"), NodeId{"n0"}, HintSet{});
        CHECK(manager.get_xattr(fid("/empty"), "location") == "");
        CHECK(manager.get_xattr(fid("/empty"), "location.chunks") == "");
    }

    SUBCASE("scatter file yields per-chunk locations") {
        HintSet hints{{"DP", "scatter 2"}};
        manager.create_file(fid("/s"), NodeId{"n0"}, hints);
        auto decision = manager.allocate_chunks(fid("/s"), 8, hints, NodeId{"n0"});
        for (const auto& chunk : decision.chunks) {
            manager.commit_chunk({fid("/s"), chunk.index, 1024, chunk.primary, 0});
        }
        CHECK(manager.get_xattr(fid("/s"), "location") == "n0,n1,n2,n3");
        CHECK(manager.get_xattr(fid("/s"), "location.chunks") ==
              "n0;n0;n1;n1;n2;n2;n3;n3");
    }
}

TEST_CASE("delete_file frees capacity and forgets the file") {
    auto manager = make_manager();
    add_node(manager, "n0", 100);
    manager.create_file(fid("/d"), NodeId{"n0"}, HintSet{});
    manager.allocate_chunks(fid("/d"), 3, HintSet{}, NodeId{"n0"});
    for (uint64_t i = 0; i < 3; ++i) {
        manager.commit_chunk({fid("/d"), i, 1024, NodeId{"n0"}, 0});
    }
    CHECK(manager.member_free_bytes(NodeId{"n0"}) == 97 * 1024);

    manager.delete_file(fid("/d"));
    CHECK(manager.member_free_bytes(NodeId{"n0"}) == 100 * 1024);
    CHECK(code_of([&] { manager.get_xattr(fid("/d"), "location"); }) == ErrorCode::UnknownFile);
    CHECK(code_of([&] { manager.delete_file(fid("/d")); }) == ErrorCode::UnknownFile);
}

TEST_CASE("membership heartbeats") {
    ManagerConfig config;
    config.heartbeat_misses = 3;
    MetadataManager manager(config);
    add_node(manager, "n0", 100);
    add_node(manager, "n1", 100);
    CHECK(manager.list_nodes().size() == 2);

    // n1 keeps answering, n0 goes silent
    for (int sweep = 0; sweep < 3; ++sweep) {
        manager.heartbeat_sweep();
        StorageNodeStatus alive;
        alive.node = NodeId{"n1"};
        manager.node_heartbeat(alive);
    }
    auto nodes = manager.list_nodes();
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].node.id == "n1");

    SUBCASE("dead nodes are excluded from placement") {
        manager.create_file(fid("/hb"), NodeId{"n1"}, HintSet{});
        auto decision = manager.allocate_chunks(fid("/hb"), 4, HintSet{}, NodeId{"n1"});
        for (const auto& chunk : decision.chunks) CHECK(chunk.primary.id == "n1");
    }

    SUBCASE("re-register revives with fresh capacity") {
        add_node(manager, "n0", 50);
        CHECK(manager.list_nodes().size() == 2);
        CHECK(manager.member_free_bytes(NodeId{"n0"}) == 50 * 1024);
    }
}

TEST_CASE("file state gates allocation") {
    auto manager = make_manager();
    add_node(manager, "n0", 100);
    manager.create_file(fid("/g"), NodeId{"n0"}, HintSet{});
    manager.allocate_chunks(fid("/g"), 1, HintSet{}, NodeId{"n0"});
    manager.commit_chunk({fid("/g"), 0, 10, NodeId{"n0"}, 0});
    manager.commit_file(fid("/g"));
    CHECK(code_of([&] { manager.allocate_chunks(fid("/g"), 1, HintSet{}, NodeId{"n0"}); }) ==
          ErrorCode::InvalidState);
    // placement tags set after commit change nothing but are stored
    manager.set_xattr(fid("/g"), Hint{"DP", "local"});
    CHECK(manager.get_xattr(fid("/g"), "DP") == "local");
    CHECK(manager.get_metadata(fid("/g")).chunks.size() == 1);
}

TEST_CASE("dispatcher accepts externally registered policies") {
    // The registry is the extension point: a new key-triggered policy
    // routes allocations without touching the stock ones.
    PolicyRegistry registry = PolicyRegistry::standard();
    RegisteredPolicy pin;
    pin.name = "pin";
    pin.trigger_key = "myapp.pin";
    pin.kind = PlacementPolicyKind::Local;
    pin.trigger = [](const std::string&) { return true; };
    pin.preferred = [](const AllocationRequest&, uint64_t, const std::string& value,
                       PlacementBackend&) { return NodeId{value}; };
    registry.register_policy(std::move(pin));

    ManagerConfig config;
    config.chunk_size = 1024;
    MetadataManager manager(config, std::move(registry));
    for (int i = 0; i < 3; ++i) add_node(manager, "n" + std::to_string(i), 100);

    HintSet hints;
    hints.set("myapp.pin", "n2");
    manager.create_file(fid("/pinned"), NodeId{"n0"}, hints);
    auto decision = manager.allocate_chunks(fid("/pinned"), 2, hints, NodeId{"n0"});
    CHECK(decision.chunks[0].primary.id == "n2");
    CHECK(decision.chunks[1].primary.id == "n2");
}

TEST_CASE("placement matches the brute-force oracle on random workloads") {
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        auto outcome = testsupport::compare_manager_to_oracle(seed);
        CHECK_MESSAGE(outcome.ok, outcome.detail);
    }
}

TEST_CASE("legacy path: hint-free placement is identical without policies") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto [full, bare] = testsupport::placement_logs_for_builds(seed);
        CHECK(full == bare);
        CHECK(!full.empty());
    }
}

TEST_CASE("xattr mutations on distinct files overlap under per-file locks") {
    auto run = [](bool global_lock) {
        ManagerConfig config;
        config.global_xattr_lock = global_lock;
        MetadataManager manager(config);
        StorageNodeStatus status;
        status.node = NodeId{"n0"};
        status.capacity_bytes = 1 << 20;
        status.free_bytes = 1 << 20;
        manager.node_register(status);

        const int files = 100;
        for (int i = 0; i < files; ++i) {
            manager.create_file(fid("/cc-" + std::to_string(i)), NodeId{"n0"}, HintSet{});
        }
        manager.set_xattr_hold_micros_for_test(2000);

        auto start = std::chrono::steady_clock::now();
        std::vector<std::thread> threads;
        threads.reserve(files);
        for (int i = 0; i < files; ++i) {
            threads.emplace_back([&manager, i] {
                manager.set_xattr(fid("/cc-" + std::to_string(i)), Hint{"Replication", "2"});
            });
        }
        for (auto& t : threads) t.join();
        double elapsed_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start)
                                .count();
        return std::pair{manager.max_concurrent_xattr_mutations(), elapsed_ms};
    };

    auto [per_file_concurrency, per_file_ms] = run(false);
    auto [global_concurrency, global_ms] = run(true);

    CHECK(per_file_concurrency > 1);
    CHECK(global_concurrency == 1);
    // 100 mutations holding the section ~2 ms each: serialized is ~200 ms.
    CHECK(per_file_ms < global_ms);
}

TEST_CASE("capacity conservation across allocate, commit, delete") {
    auto manager = make_manager();
    add_node(manager, "n0", 50);
    add_node(manager, "n1", 50);

    manager.create_file(fid("/k"), NodeId{"n0"}, HintSet{{"Replication", "2"}});
    auto decision =
        manager.allocate_chunks(fid("/k"), 4, HintSet{{"Replication", "2"}}, NodeId{"n0"});
    for (const auto& chunk : decision.chunks) {
        manager.commit_chunk({fid("/k"), chunk.index, 1000, chunk.primary, 0});
        for (const auto& target : chunk.replica_targets) {
            manager.commit_chunk({fid("/k"), chunk.index, 1000, target, 0});
        }
    }
    uint64_t spent = (50 * 1024 - manager.member_free_bytes(NodeId{"n0"})) +
                     (50 * 1024 - manager.member_free_bytes(NodeId{"n1"}));
    CHECK(spent == 4 * 2 * 1000);

    manager.delete_file(fid("/k"));
    CHECK(manager.member_free_bytes(NodeId{"n0"}) == 50 * 1024);
    CHECK(manager.member_free_bytes(NodeId{"n1"}) == 50 * 1024);
}

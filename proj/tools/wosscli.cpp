// Thin file client against a running cluster: put/get whole files, set and
// get attributes, remove.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "woss/client/client.hpp"
#include "woss/net/remote.hpp"

namespace {

std::vector<uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw woss::Error(woss::ErrorCode::IoError, "cannot read " + path);
    }
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

void spill(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw woss::Error(woss::ErrorCode::IoError, "cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

woss::Hint parse_hint_flag(const std::string& spec) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos) {
        throw woss::Error(woss::ErrorCode::InvalidArgument,
                          "--hint needs key=value, got '" + spec + "'");
    }
    return woss::parse_hint(spec.substr(0, eq), spec.substr(eq + 1));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"woss file client"};
    app.require_subcommand(1);

    std::string manager_endpoint = "127.0.0.1:4440";
    std::string colocated;
    uint64_t seed = 1;
    app.add_option("--manager", manager_endpoint, "manager endpoint");
    app.add_option("--colocated-node", colocated,
                   "storage node running on this machine, for local reads");
    app.add_option("--seed", seed, "replica selection seed");

    auto* put_cmd = app.add_subcommand("put", "store a local file");
    std::string put_path, put_local;
    std::vector<std::string> hint_flags;
    uint64_t chunk_size_override = 0;
    std::string rep_mode = "eager";
    put_cmd->add_option("path", put_path, "store path")->required();
    put_cmd->add_option("local", put_local, "local file")->required();
    put_cmd->add_option("--hint", hint_flags, "key=value hint, repeatable");
    put_cmd->add_option("--chunk-size-override", chunk_size_override,
                        "per-file chunk size, bytes");
    put_cmd->add_option("--replication-mode", rep_mode, "eager or lazy");

    auto* get_cmd = app.add_subcommand("get", "fetch a file");
    std::string get_path, get_local;
    get_cmd->add_option("path", get_path, "store path")->required();
    get_cmd->add_option("local", get_local, "local destination")->required();

    auto* setattr_cmd = app.add_subcommand("setattr", "set one extended attribute");
    std::string sa_path, sa_key, sa_value;
    setattr_cmd->add_option("path", sa_path)->required();
    setattr_cmd->add_option("key", sa_key)->required();
    setattr_cmd->add_option("value", sa_value)->required();

    auto* getattr_cmd = app.add_subcommand("getattr", "read one extended attribute");
    std::string ga_path, ga_key;
    getattr_cmd->add_option("path", ga_path)->required();
    getattr_cmd->add_option("key", ga_key)->required();

    auto* rm_cmd = app.add_subcommand("rm", "delete a file");
    std::string rm_path;
    rm_cmd->add_option("path", rm_path)->required();

    auto* nodes_cmd = app.add_subcommand("ls-nodes", "list live storage nodes");

    CLI11_PARSE(app, argc, argv);

    try {
        woss::net::RemoteManager manager(manager_endpoint);
        woss::net::RemoteResolver resolver(manager);
        woss::ClientConfig config;
        config.client_node = woss::NodeId{"cli"};
        if (!colocated.empty()) config.colocated_node = woss::NodeId{colocated};
        config.rng_seed = seed;
        if (rep_mode == "lazy") config.replication_mode = woss::ReplicationMode::LazyChained;
        woss::Client client(config, manager, resolver);

        if (put_cmd->parsed()) {
            woss::HintSet hints;
            for (const auto& flag : hint_flags) {
                woss::Hint hint = parse_hint_flag(flag);
                hints.set(hint.key, hint.value);
            }
            auto bytes = slurp(put_local);
            auto handle = client.create(woss::FileId::parse(put_path), hints,
                                        chunk_size_override);
            client.write(handle, bytes);
            auto meta = client.close(handle);
            std::cout << put_path << ": " << meta.total_size() << " bytes in "
                      << meta.chunks.size() << " chunks\n";
        } else if (get_cmd->parsed()) {
            auto handle = client.open_read(woss::FileId::parse(get_path));
            auto bytes = client.read_all(handle);
            client.close(handle);
            spill(get_local, bytes);
            std::cout << get_path << ": " << bytes.size() << " bytes\n";
        } else if (setattr_cmd->parsed()) {
            client.set_xattr(woss::FileId::parse(sa_path), woss::parse_hint(sa_key, sa_value));
        } else if (getattr_cmd->parsed()) {
            std::cout << client.get_xattr(woss::FileId::parse(ga_path), ga_key) << "\n";
        } else if (rm_cmd->parsed()) {
            client.remove(woss::FileId::parse(rm_path));
        } else if (nodes_cmd->parsed()) {
            for (const auto& info : manager.list_nodes()) {
                std::cout << info.node.id << " " << info.address << "\n";
            }
        }
        return 0;
    } catch (const woss::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

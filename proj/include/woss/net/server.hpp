#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "woss/core/frame.hpp"
#include "woss/core/services.hpp"
#include "woss/net/frame_socket.hpp"

namespace woss::net {

// Accept loop plus one thread per connection, each running a decode ->
// dispatch -> encode cycle until the peer hangs up.
class FrameServer {
public:
    using Handler = std::function<std::vector<uint8_t>(const TaggedRequest&)>;

    FrameServer(const std::string& listen_endpoint, Handler handler);
    ~FrameServer();

    void start();
    void stop();
    const std::string& address() const { return listener_.address(); }

private:
    void accept_loop();
    void serve_connection(int fd);

    TcpListener listener_;
    Handler handler_;
    std::thread accept_thread_;
    std::mutex conn_mu_;
    std::vector<std::thread> conn_threads_;
    std::set<int> active_fds_;  // shut down on stop to unblock reads
    std::atomic<bool> stopping_{false};
};

// Frame handlers over the service interfaces, shared by the daemons and
// the in-process TCP tests.
FrameServer::Handler manager_handler(ManagerApi& manager);
FrameServer::Handler storage_handler(StorageApi& node);

}  // namespace woss::net

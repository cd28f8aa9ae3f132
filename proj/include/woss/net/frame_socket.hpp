#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace woss::net {

// Blocking TCP connection carrying length-prefixed frames. recv_frame
// returns the whole frame (length header included) so the frame codecs
// can validate it end to end.
class FrameConn {
public:
    FrameConn() = default;
    explicit FrameConn(int fd) : fd_(fd) {}
    ~FrameConn();

    FrameConn(const FrameConn&) = delete;
    FrameConn& operator=(const FrameConn&) = delete;
    FrameConn(FrameConn&& other) noexcept;
    FrameConn& operator=(FrameConn&& other) noexcept;

    // host:port, e.g. "127.0.0.1:4440".
    static FrameConn connect(const std::string& endpoint);

    void send_bytes(std::span<const uint8_t> bytes);
    std::vector<uint8_t> recv_frame();

    bool open() const noexcept { return fd_ >= 0; }
    void close();

private:
    int fd_ = -1;
};

class TcpListener {
public:
    TcpListener() = default;
    ~TcpListener();

    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    TcpListener(TcpListener&& other) noexcept
        : fd_(other.fd_), address_(std::move(other.address_)) {
        other.fd_ = -1;
    }
    TcpListener& operator=(TcpListener&& other) noexcept {
        if (this != &other) {
            close();
            fd_ = other.fd_;
            address_ = std::move(other.address_);
            other.fd_ = -1;
        }
        return *this;
    }

    // Binds and listens. Port 0 picks a free port; address() reports the
    // actual endpoint.
    static TcpListener bind(const std::string& endpoint);

    int accept_fd();  // blocking; returns -1 once closed
    const std::string& address() const noexcept { return address_; }
    void close();

private:
    int fd_ = -1;
    std::string address_;
};

}  // namespace woss::net

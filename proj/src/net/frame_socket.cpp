#include "woss/net/frame_socket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "woss/core/errors.hpp"
#include "woss/core/frame.hpp"

namespace woss::net {

namespace {

std::pair<std::string, uint16_t> split_endpoint(const std::string& endpoint) {
    size_t colon = endpoint.rfind(':');
    if (colon == std::string::npos) {
        throw_error(ErrorCode::InvalidArgument, "endpoint must be host:port, got " + endpoint);
    }
    std::string host = endpoint.substr(0, colon);
    int port = std::stoi(endpoint.substr(colon + 1));
    if (port < 0 || port > 65535) {
        throw_error(ErrorCode::InvalidArgument, "bad port in " + endpoint);
    }
    if (host.empty() || host == "localhost") host = "127.0.0.1";
    return {host, static_cast<uint16_t>(port)};
}

sockaddr_in make_addr(const std::string& endpoint) {
    auto [host, port] = split_endpoint(endpoint);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        throw_error(ErrorCode::InvalidArgument, "cannot parse address " + host);
    }
    return addr;
}

}  // namespace

FrameConn::~FrameConn() { close(); }

FrameConn::FrameConn(FrameConn&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

FrameConn& FrameConn::operator=(FrameConn&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

void FrameConn::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

FrameConn FrameConn::connect(const std::string& endpoint) {
    sockaddr_in addr = make_addr(endpoint);
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        throw_error(ErrorCode::IoError, "socket: " + std::string(strerror(errno)));
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        int err = errno;
        ::close(fd);
        throw_error(ErrorCode::Unreachable,
                    "connect to " + endpoint + ": " + std::string(strerror(err)));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return FrameConn(fd);
}

void FrameConn::send_bytes(std::span<const uint8_t> bytes) {
    size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) {
            close();
            throw_error(ErrorCode::Unreachable, "send: " + std::string(strerror(errno)));
        }
        sent += static_cast<size_t>(n);
    }
}

std::vector<uint8_t> FrameConn::recv_frame() {
    auto read_exact = [&](uint8_t* dst, size_t count) {
        size_t got = 0;
        while (got < count) {
            ssize_t n = ::recv(fd_, dst + got, count - got, 0);
            if (n == 0) {
                close();
                throw_error(ErrorCode::Unreachable, "peer closed the connection");
            }
            if (n < 0) {
                close();
                throw_error(ErrorCode::Unreachable, "recv: " + std::string(strerror(errno)));
            }
            got += static_cast<size_t>(n);
        }
    };

    std::vector<uint8_t> frame(4);
    read_exact(frame.data(), 4);
    uint32_t len = 0;
    for (int i = 3; i >= 0; --i) len = (len << 8) | frame[i];
    if (len > kMaxFrameBytes) {
        close();
        throw_error(ErrorCode::FrameTooLarge, "peer announced " + std::to_string(len) + " bytes");
    }
    frame.resize(4 + len);
    read_exact(frame.data() + 4, len);
    return frame;
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

TcpListener TcpListener::bind(const std::string& endpoint) {
    sockaddr_in addr = make_addr(endpoint);
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        throw_error(ErrorCode::IoError, "socket: " + std::string(strerror(errno)));
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        int err = errno;
        ::close(fd);
        throw_error(ErrorCode::IoError,
                    "bind " + endpoint + ": " + std::string(strerror(err)));
    }
    if (::listen(fd, 64) != 0) {
        int err = errno;
        ::close(fd);
        throw_error(ErrorCode::IoError, "listen: " + std::string(strerror(err)));
    }
    sockaddr_in bound{};
    socklen_t bound_len = sizeof bound;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &bound_len);
    char host[INET_ADDRSTRLEN];
    inet_ntop(AF_INET, &bound.sin_addr, host, sizeof host);

    TcpListener listener;
    listener.fd_ = fd;
    listener.address_ = std::string(host) + ":" + std::to_string(ntohs(bound.sin_port));
    return listener;
}

int TcpListener::accept_fd() {
    if (fd_ < 0) return -1;
    int client = ::accept(fd_, nullptr, nullptr);
    return client;  // -1 when closed or on error
}

}  // namespace woss::net

#include "woss/storage/chunk_store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "woss/core/checksum.hpp"
#include "woss/core/errors.hpp"

namespace fs = std::filesystem;

namespace woss {

void MemStore::put(const FileId& file, uint64_t index, std::span<const uint8_t> bytes,
                   uint64_t checksum) {
    std::lock_guard lock(mu_);
    StoredChunk chunk;
    chunk.file = file;
    chunk.index = index;
    chunk.bytes.assign(bytes.begin(), bytes.end());
    chunk.checksum = checksum;
    auto key = Key{file, index};
    auto it = chunks_.find(key);
    if (it != chunks_.end()) {
        used_ -= it->second.bytes.size();
        it->second = std::move(chunk);
    } else {
        chunks_.emplace(key, std::move(chunk));
    }
    used_ += bytes.size();
}

std::optional<StoredChunk> MemStore::get(const FileId& file, uint64_t index) {
    std::lock_guard lock(mu_);
    auto it = chunks_.find(Key{file, index});
    if (it == chunks_.end()) return std::nullopt;
    return it->second;
}

bool MemStore::contains(const FileId& file, uint64_t index) {
    std::lock_guard lock(mu_);
    return chunks_.count(Key{file, index}) != 0;
}

void MemStore::erase_file(const FileId& file) {
    std::lock_guard lock(mu_);
    auto it = chunks_.lower_bound(Key{file, 0});
    while (it != chunks_.end() && it->first.first == file) {
        used_ -= it->second.bytes.size();
        it = chunks_.erase(it);
    }
}

uint64_t MemStore::used_bytes() {
    std::lock_guard lock(mu_);
    return used_;
}

void MemStore::corrupt_for_test(const FileId& file, uint64_t index) {
    std::lock_guard lock(mu_);
    auto it = chunks_.find(Key{file, index});
    if (it != chunks_.end() && !it->second.bytes.empty()) {
        it->second.bytes[0] ^= 0xff;
    }
}

DirStore::DirStore(std::string root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
        throw_error(ErrorCode::IoError, "cannot create store root " + root_ + ": " + ec.message());
    }
}

std::string DirStore::file_prefix(const FileId& file) const {
    // Flat layout: path separators become '%' so one directory holds
    // everything and erase_file can prefix-scan.
    std::string encoded;
    for (char c : file.path) {
        encoded += (c == '/') ? '%' : c;
    }
    return encoded;
}

std::string DirStore::chunk_path(const FileId& file, uint64_t index) const {
    return root_ + "/" + file_prefix(file) + "." + std::to_string(index) + ".chunk";
}

void DirStore::put(const FileId& file, uint64_t index, std::span<const uint8_t> bytes,
                   uint64_t checksum) {
    std::lock_guard lock(mu_);
    std::ofstream out(chunk_path(file, index), std::ios::binary | std::ios::trunc);
    if (!out) {
        throw_error(ErrorCode::IoError, "cannot write " + chunk_path(file, index));
    }
    uint8_t header[8];
    for (int i = 0; i < 8; ++i) header[i] = static_cast<uint8_t>(checksum >> (i * 8));
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw_error(ErrorCode::IoError, "short write to " + chunk_path(file, index));
    }
}

std::optional<StoredChunk> DirStore::get(const FileId& file, uint64_t index) {
    std::lock_guard lock(mu_);
    std::ifstream in(chunk_path(file, index), std::ios::binary);
    if (!in) return std::nullopt;
    uint8_t header[8];
    in.read(reinterpret_cast<char*>(header), sizeof header);
    if (in.gcount() != sizeof header) return std::nullopt;
    uint64_t checksum = 0;
    for (int i = 7; i >= 0; --i) checksum = (checksum << 8) | header[i];
    StoredChunk chunk;
    chunk.file = file;
    chunk.index = index;
    chunk.checksum = checksum;
    chunk.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return chunk;
}

bool DirStore::contains(const FileId& file, uint64_t index) {
    std::lock_guard lock(mu_);
    return fs::exists(chunk_path(file, index));
}

void DirStore::erase_file(const FileId& file) {
    std::lock_guard lock(mu_);
    std::string prefix = file_prefix(file) + ".";
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_, ec)) {
        std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) == 0) {
            fs::remove(entry.path(), ec);
        }
    }
}

uint64_t DirStore::used_bytes() {
    std::lock_guard lock(mu_);
    uint64_t total = 0;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_, ec)) {
        if (entry.is_regular_file(ec)) {
            uint64_t size = entry.file_size(ec);
            total += size > 8 ? size - 8 : 0;
        }
    }
    return total;
}

void DirStore::corrupt_for_test(const FileId& file, uint64_t index) {
    std::lock_guard lock(mu_);
    std::fstream io(chunk_path(file, index), std::ios::binary | std::ios::in | std::ios::out);
    if (!io) return;
    io.seekg(8);
    char byte = 0;
    if (!io.get(byte)) return;
    io.seekp(8);
    byte = static_cast<char>(byte ^ 0xff);
    io.put(byte);
}

std::unique_ptr<ChunkStore> make_chunk_store(const std::string& spec) {
    if (spec == "mem") {
        return std::make_unique<MemStore>();
    }
    if (spec.rfind("dir:", 0) == 0) {
        return std::make_unique<DirStore>(spec.substr(4));
    }
    throw_error(ErrorCode::InvalidArgument, "store spec must be mem or dir:<path>, got " + spec);
}

}  // namespace woss

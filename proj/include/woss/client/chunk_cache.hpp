#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <vector>

namespace woss {

// Per-handle LRU chunk cache bounded by bytes. A capacity of zero caches
// nothing; a chunk larger than the whole capacity is never admitted.
class LruChunkCache {
public:
    explicit LruChunkCache(uint64_t capacity_bytes) : capacity_(capacity_bytes) {}

    const std::vector<uint8_t>* get(uint64_t index) {
        auto it = lookup_.find(index);
        if (it == lookup_.end()) return nullptr;
        order_.splice(order_.begin(), order_, it->second);
        return &it->second->second;
    }

    void put(uint64_t index, std::vector<uint8_t> bytes) {
        if (bytes.size() > capacity_) return;
        auto it = lookup_.find(index);
        if (it != lookup_.end()) {
            bytes_ -= it->second->second.size();
            order_.erase(it->second);
            lookup_.erase(it);
        }
        while (bytes_ + bytes.size() > capacity_ && !order_.empty()) {
            auto& victim = order_.back();
            bytes_ -= victim.second.size();
            lookup_.erase(victim.first);
            order_.pop_back();
        }
        bytes_ += bytes.size();
        order_.emplace_front(index, std::move(bytes));
        lookup_[index] = order_.begin();
        if (bytes_ > peak_) peak_ = bytes_;
    }

    void clear() {
        order_.clear();
        lookup_.clear();
        bytes_ = 0;
    }

    uint64_t bytes() const noexcept { return bytes_; }
    uint64_t peak_bytes() const noexcept { return peak_; }
    uint64_t capacity() const noexcept { return capacity_; }

private:
    uint64_t capacity_;
    uint64_t bytes_ = 0;
    uint64_t peak_ = 0;
    std::list<std::pair<uint64_t, std::vector<uint8_t>>> order_;  // front = most recent
    std::map<uint64_t, decltype(order_)::iterator> lookup_;
};

}  // namespace woss

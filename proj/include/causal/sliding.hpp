#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

// Windowed containers indexed by a monotonically growing index space.
// Indices are assigned by add() in strictly increasing order and never
// reused. All operations are amortized effectively constant time; a
// steps() counter tracks elementary work (element moves, bit scans,
// chunk allocations, map probes) for the amortized-cost tests.

namespace causal {

/// Dynamic array keeping only the window [first, next). Elements are
/// appended at next and removed only at first. Storage is a short
/// directory of fixed-capacity chunks; fully vacated leading chunks are
/// released.
template <typename E>
class SlidingArray {
public:
    static constexpr std::uint64_t kChunkCapacity = 256;

    std::uint64_t add(E e) {
        steps_ += 1;
        if (next_ % kChunkCapacity == 0) {
            chunks_.emplace_back();
            chunks_.back().reserve(kChunkCapacity);
            steps_ += 1;
        }
        chunks_.back().push_back(std::move(e));
        return next_++;
    }

    E remove() {
        if (empty()) {
            throw std::logic_error("SlidingArray::remove on empty window");
        }
        steps_ += 1;
        E out = std::move(at(first_));
        ++first_;
        release_front();
        return out;
    }

    E& peek() {
        if (empty()) {
            throw std::logic_error("SlidingArray::peek on empty window");
        }
        return at(first_);
    }

    const E& peek() const { return const_cast<SlidingArray*>(this)->peek(); }

    E& at(std::uint64_t index) {
        if (index < first_ || index >= next_) {
            throw std::out_of_range("SlidingArray index outside window");
        }
        std::uint64_t chunk = index / kChunkCapacity - base_chunk_;
        return chunks_[chunk][index % kChunkCapacity];
    }

    const E& at(std::uint64_t index) const {
        return const_cast<SlidingArray*>(this)->at(index);
    }

    E& operator[](std::uint64_t index) { return at(index); }
    const E& operator[](std::uint64_t index) const { return at(index); }

    std::uint64_t first() const { return first_; }
    std::uint64_t next() const { return next_; }
    std::uint64_t size() const { return next_ - first_; }
    bool empty() const { return first_ == next_; }
    std::size_t chunk_count() const { return chunks_.size(); }
    std::uint64_t steps() const { return steps_; }

private:
    void release_front() {
        // Drop the leading chunk once the window has moved past it.
        while (!chunks_.empty() && first_ / kChunkCapacity > base_chunk_) {
            chunks_.pop_front();
            ++base_chunk_;
            steps_ += 1;
        }
    }

    std::uint64_t first_ = 0;
    std::uint64_t next_ = 0;
    std::uint64_t base_chunk_ = 0;
    std::deque<std::vector<E>> chunks_;
    mutable std::uint64_t steps_ = 0;
};

/// Sliding window of presence bits, used by SlidingMap. Word storage
/// mirrors the chunked layout of SlidingArray.
class BitWindow {
public:
    void set(std::uint64_t index) {
        std::uint64_t word = index / 64;
        while (base_word_ + words_.size() <= word) {
            words_.push_back(0);
        }
        words_[word - base_word_] |= std::uint64_t{1} << (index % 64);
    }

    void clear(std::uint64_t index) {
        std::uint64_t word = index / 64;
        if (word < base_word_ || word - base_word_ >= words_.size()) {
            return;
        }
        words_[word - base_word_] &= ~(std::uint64_t{1} << (index % 64));
    }

    bool test(std::uint64_t index) const {
        std::uint64_t word = index / 64;
        if (word < base_word_ || word - base_word_ >= words_.size()) {
            return false;
        }
        return (words_[word - base_word_] >> (index % 64)) & 1;
    }

    void drop_below(std::uint64_t index) {
        std::uint64_t word = index / 64;
        while (base_word_ < word && !words_.empty()) {
            words_.pop_front();
            ++base_word_;
        }
    }

private:
    std::deque<std::uint64_t> words_;
    std::uint64_t base_word_ = 0;
};

/// Sliding bit-window plus a map from element keys to window indices.
/// add() assigns the next index; removal is by key and is a silent
/// no-op for absent keys. first advances past cleared bits, bound-checked
/// against next (equivalent to the sentinel-bit variant).
template <typename E, typename Hash = std::hash<E>>
class SlidingMap {
public:
    std::uint64_t add(E e) {
        steps_ += 1;
        auto [it, inserted] = lookup_.emplace(std::move(e), next_);
        if (!inserted) {
            throw std::logic_error("SlidingMap::add duplicate key");
        }
        bits_.set(next_);
        return next_++;
    }

    void remove(const E& e) {
        steps_ += 1;
        auto it = lookup_.find(e);
        if (it == lookup_.end()) {
            return;
        }
        std::uint64_t index = it->second;
        lookup_.erase(it);
        bits_.clear(index);
        if (index == first_) {
            advance_first();
        }
    }

    bool contains(const E& e) const {
        steps_ += 1;
        return lookup_.find(e) != lookup_.end();
    }

    std::uint64_t first() const { return first_; }
    std::uint64_t next() const { return next_; }
    std::uint64_t size() const { return lookup_.size(); }
    bool empty() const { return lookup_.empty(); }
    std::uint64_t steps() const { return steps_; }

    /// Visits live elements in ascending window-index order.
    template <typename F>
    void for_each_live(F&& fn) const {
        std::vector<std::pair<std::uint64_t, const E*>> live;
        live.reserve(lookup_.size());
        for (const auto& [key, index] : lookup_) {
            live.emplace_back(index, &key);
        }
        std::sort(live.begin(), live.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [index, key] : live) {
            fn(index, *key);
        }
    }

private:
    void advance_first() {
        while (first_ < next_ && !bits_.test(first_)) {
            ++first_;
            steps_ += 1;
        }
        bits_.drop_below(first_);
    }

    std::uint64_t first_ = 0;
    std::uint64_t next_ = 0;
    BitWindow bits_;
    std::unordered_map<E, std::uint64_t, Hash> lookup_;
    mutable std::uint64_t steps_ = 0;
};

/// SlidingMap variant whose positions remain readable by index,
/// plus index(e) lookup. Backed by a sliding array of optional elements.
template <typename E, typename Hash = std::hash<E>>
class IdxSlidingMap {
public:
    std::uint64_t add(E e) {
        steps_ += 1;
        auto [it, inserted] = lookup_.emplace(e, slots_.next());
        if (!inserted) {
            throw std::logic_error("IdxSlidingMap::add duplicate key");
        }
        return slots_.add(std::optional<E>(std::move(e)));
    }

    void remove(const E& e) {
        steps_ += 1;
        auto it = lookup_.find(e);
        if (it == lookup_.end()) {
            return;
        }
        std::uint64_t index = it->second;
        lookup_.erase(it);
        slots_.at(index).reset();
        if (index == slots_.first()) {
            while (!slots_.empty() && !slots_.peek().has_value()) {
                slots_.remove();
                steps_ += 1;
            }
        }
    }

    std::optional<std::uint64_t> index(const E& e) const {
        steps_ += 1;
        auto it = lookup_.find(e);
        if (it == lookup_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    bool present(std::uint64_t idx) const {
        return idx >= slots_.first() && idx < slots_.next() &&
               slots_.at(idx).has_value();
    }

    /// Reads the element added at idx; idx must be in [first, next) and live.
    const E& get(std::uint64_t idx) const {
        const auto& slot = slots_.at(idx);
        if (!slot.has_value()) {
            throw std::out_of_range("IdxSlidingMap::get of removed element");
        }
        return *slot;
    }

    const E& peek() const { return get(first()); }

    std::uint64_t first() const { return slots_.first(); }
    std::uint64_t next() const { return slots_.next(); }
    std::uint64_t size() const { return lookup_.size(); }
    bool empty() const { return lookup_.empty(); }
    std::uint64_t steps() const { return steps_ + slots_.steps(); }

    template <typename F>
    void for_each_live(F&& fn) const {
        std::vector<std::pair<std::uint64_t, const E*>> live;
        live.reserve(lookup_.size());
        for (const auto& [key, index] : lookup_) {
            live.emplace_back(index, &key);
        }
        std::sort(live.begin(), live.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [index, key] : live) {
            fn(index, *key);
        }
    }

private:
    SlidingArray<std::optional<E>> slots_;
    std::unordered_map<E, std::uint64_t, Hash> lookup_;
    mutable std::uint64_t steps_ = 0;
};

}  // namespace causal

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace percolab {

// Union by size with path halving. One parent word and one size word per
// vertex; 32-bit ids cover every graph this library constructs (V <= 2^28).
class UnionFind {
public:
    explicit UnionFind(std::uint64_t n)
        : parent_(n), size_(n, 1) {
        for (std::uint64_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t find(std::uint32_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns true when the two sets were merged (false if already joined).
    bool unite(std::uint32_t a, std::uint32_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    std::uint32_t size_of_root(std::uint32_t root) const noexcept { return size_[root]; }
    std::uint32_t component_size(std::uint32_t x) noexcept { return size_[find(x)]; }
    std::uint64_t element_count() const noexcept { return parent_.size(); }

    void reset() noexcept {
        for (std::uint64_t i = 0; i < parent_.size(); ++i)
            parent_[i] = static_cast<std::uint32_t>(i);
        std::fill(size_.begin(), size_.end(), 1u);
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

}  // namespace percolab

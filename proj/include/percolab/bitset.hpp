#pragma once

#include <cstdint>
#include <vector>

namespace percolab {

// Flat bitset sized for vertex sets; V/8 bytes.
class VertexBitset {
public:
    VertexBitset() = default;
    explicit VertexBitset(std::uint64_t n) : bits_((n + 63) / 64, 0), n_(n) {}

    void set(std::uint64_t i) noexcept { bits_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void clear(std::uint64_t i) noexcept { bits_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::uint64_t i) const noexcept {
        return (bits_[i >> 6] >> (i & 63)) & 1u;
    }
    std::uint64_t size() const noexcept { return n_; }

    void reset() noexcept { std::fill(bits_.begin(), bits_.end(), 0); }

    bool intersects(const VertexBitset& other) const noexcept {
        std::size_t n = std::min(bits_.size(), other.bits_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (bits_[i] & other.bits_[i]) return true;
        return false;
    }

private:
    std::vector<std::uint64_t> bits_;
    std::uint64_t n_ = 0;
};

}  // namespace percolab

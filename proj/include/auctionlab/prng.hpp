#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "auctionlab/rational.hpp"

namespace auctionlab {

// splitmix64. Hand-rolled so that seeded runs are reproducible across
// standard libraries and platforms (std::uniform_int_distribution is not).
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection for exact uniformity.
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            std::uint64_t threshold = (0ULL - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::size_t index(std::size_t size) { return static_cast<std::size_t>(below(size)); }

    bool coin() { return (next_u64() & 1) != 0; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[index(items.size())];
    }

    // k distinct indices from [0, n), in increasing order.
    std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + index(n - i);
            std::swap(all[i], all[j]);
        }
        all.resize(k);
        std::sort(all.begin(), all.end());
        return all;
    }

private:
    std::uint64_t state_;
};

}  // namespace auctionlab

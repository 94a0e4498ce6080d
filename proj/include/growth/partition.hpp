#pragma once

#include <cstdint>
#include <vector>

#include "growth/bigint.hpp"
#include "growth/rng.hpp"

namespace growth::randkit {

// Integer partition: parts sorted non-increasing, sum(parts) == total.
struct Partition {
    std::vector<std::uint32_t> parts;
    std::uint32_t total = 0;
};

// Exact partition counts p(0..n_max) plus uniform sampling over ALL
// partitions of a given total (both the number of parts and their sizes are
// random). Counts are exact big integers built once by the bounded-part
// recurrence; sampling uses the weighted descent on the identity
//   n p(n) = sum_{j,d >= 1, jd <= n} j p(n - jd),
// which draws each partition with probability exactly 1/p(n). The count
// table is immutable after construction and safe to share across threads.
class PartitionTable {
public:
    explicit PartitionTable(std::uint32_t n_max);

    std::uint32_t n_max() const { return n_max_; }
    const BigUint& count(std::uint32_t n) const;
    Partition sample(std::uint32_t total, Rng& rng) const;

private:
    std::uint32_t n_max_;
    std::vector<BigUint> counts_;
};

// Largest total the shared sampler supports.
inline constexpr std::uint32_t kPartitionCeiling = 5000;

// Shared table at the ceiling, built lazily exactly once.
const PartitionTable& shared_partition_table();

// Uniform random partition of `total` (1 <= total <= kPartitionCeiling).
Partition sample_uniform_partition(std::uint32_t total, RngStream stream);

} // namespace growth::randkit

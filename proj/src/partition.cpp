#include "growth/partition.hpp"

#include <algorithm>
#include <mutex>

#include "growth/errors.hpp"

namespace growth::randkit {

PartitionTable::PartitionTable(std::uint32_t n_max) : n_max_(n_max) {
    counts_.assign(n_max + 1, BigUint{});
    counts_[0] = BigUint(1);
    // After the pass for part size k, counts_[n] holds the number of
    // partitions of n with all parts <= k.
    for (std::uint32_t k = 1; k <= n_max; ++k)
        for (std::uint32_t n = k; n <= n_max; ++n)
            counts_[n].add(counts_[n - k]);
}

const BigUint& PartitionTable::count(std::uint32_t n) const {
    if (n > n_max_) throw parameter_error("partition count: total exceeds table ceiling");
    return counts_[n];
}

Partition PartitionTable::sample(std::uint32_t total, Rng& rng) const {
    if (total < 1) throw parameter_error("sample partition: total must be >= 1");
    if (total > n_max_) throw parameter_error("sample partition: total exceeds table ceiling");
    Partition out;
    out.total = total;
    out.parts.reserve(32);
    BigUint weight;
    std::uint32_t n = total;
    while (n > 0) {
        BigUint bound = counts_[n];
        bound.mul_small(n);
        BigUint u = BigUint::random_below(bound, rng);
        bool chosen = false;
        for (std::uint32_t d = 1; d <= n && !chosen; ++d) {
            for (std::uint32_t j = 1; j * d <= n; ++j) {
                weight.assign_mul(counts_[n - j * d], j);
                if (u.compare(weight) < 0) {
                    out.parts.insert(out.parts.end(), d, j);
                    n -= j * d;
                    chosen = true;
                    break;
                }
                u.sub(weight);
            }
        }
    }
    std::sort(out.parts.begin(), out.parts.end(), std::greater<>());
    return out;
}

const PartitionTable& shared_partition_table() {
    static const PartitionTable table(kPartitionCeiling);
    return table;
}

Partition sample_uniform_partition(std::uint32_t total, RngStream stream) {
    if (total < 1) throw parameter_error("sample_uniform_partition: total must be >= 1");
    if (total > kPartitionCeiling)
        throw parameter_error("sample_uniform_partition: total exceeds ceiling");
    Rng rng(stream);
    return shared_partition_table().sample(total, rng);
}

} // namespace growth::randkit

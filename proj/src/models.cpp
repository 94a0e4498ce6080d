#include "growth/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "growth/errors.hpp"
#include "growth/parallel.hpp"
#include "growth/partition.hpp"
#include "growth/special.hpp"

namespace growth::models {

using randkit::Rng;
using randkit::RngStream;

namespace {

// Substream purpose tags; keyed with (tag, firm_id, period/sample).
enum StreamTag : std::uint64_t {
    kWbTag = 1,
    kSimonTag = 2,
    kGpgTag = 3,
    kPsiTag = 4,
    kSuttonTag = 5,
    kFasTag = 6,
};

void check_wb(const WyartBouchaudConfig& c) {
    if (!(1.0 < c.alpha && c.alpha < c.mu && c.mu < 2.0))
        throw parameter_error("wyart-bouchaud: requires 1 < alpha < mu < 2");
    if (!(c.sigma_unit > 0.0))
        throw parameter_error("wyart-bouchaud: sigma_unit must be positive");
    if (c.n_firms < 1) throw parameter_error("wyart-bouchaud: n_firms must be >= 1");
}

void check_simon(const SimonConfig& c) {
    if (c.b < 0.0 || c.b > 1.0) throw parameter_error("simon: b must lie in [0, 1]");
    if (c.n_steps < 1) throw parameter_error("simon: n_steps must be >= 1");
    if (c.b == 0.0 && c.n_seed_firms < 1)
        throw parameter_error("simon: b = 0 with an empty start can never create a firm");
}

// Prefix-sum tree for proportional-to-count selection in O(log n).
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0), total_(0) {
        size_t p = 1;
        while (p < tree_.size()) p <<= 1;
        top_ = p >> 1;
    }
    void add(std::size_t i, std::uint64_t v) {
        total_ += v;
        for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += v;
    }
    std::uint64_t total() const { return total_; }
    // Index owning the target-th unit (0 <= target < total).
    std::size_t find(std::uint64_t target) const {
        std::size_t pos = 0;
        for (std::size_t pw = top_; pw > 0; pw >>= 1) {
            if (pos + pw < tree_.size() && tree_[pos + pw] <= target) {
                pos += pw;
                target -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<std::uint64_t> tree_;
    std::uint64_t total_;
    std::size_t top_;
};

std::string fnv_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void append_num(std::string& s, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g,", v);
    s += buf;
}

void append_num(std::string& s, std::uint64_t v) {
    s += std::to_string(v);
    s += ',';
}

} // namespace

namespace detail {

ReplicationLaw ReplicationLaw::power_tail(double mu) {
    if (!(mu > 1.0 && mu < 2.0))
        throw parameter_error("replication law: mu must lie in (1, 2)");
    ReplicationLaw law;
    law.mu_ = mu;
    const double z_mu = riemann_zeta(mu);
    const double z_mu1 = riemann_zeta(1.0 + mu);
    const double theta = 1.0 / z_mu; // makes the mean exactly one
    const std::size_t cutoff = 1 << 16;
    law.head_.resize(cutoff + 1);
    law.head_[0] = 1.0 - theta * z_mu1;
    for (std::size_t k = 1; k <= cutoff; ++k)
        law.head_[k] = law.head_[k - 1] +
                       theta * std::pow(static_cast<double>(k), -1.0 - mu);
    return law;
}

ReplicationLaw ReplicationLaw::point_mass(std::uint64_t value) {
    ReplicationLaw law;
    law.is_point_ = true;
    law.fixed_ = value;
    return law;
}

std::uint64_t ReplicationLaw::draw(Rng& rng) const {
    if (is_point_) return fixed_;
    const double u = rng.u01();
    // The first few values carry ~95% of the mass; scan before searching.
    for (std::uint64_t k = 0; k < 8; ++k)
        if (u <= head_[k]) return k;
    if (u <= head_.back()) {
        const auto it = std::lower_bound(head_.begin(), head_.end(), u);
        return static_cast<std::uint64_t>(it - head_.begin());
    }
    // Continuous power-law continuation beyond the table (mass ~1e-8).
    const double v = (u - head_.back()) / (1.0 - head_.back());
    const double m = static_cast<double>(head_.size() - 1);
    return static_cast<std::uint64_t>(m * std::pow(1.0 - v, -1.0 / mu_)) + 1;
}

std::uint64_t fas_step(std::uint64_t k, const ReplicationLaw& law, Rng& rng) {
    std::uint64_t next = 0;
    for (std::uint64_t j = 0; j < k; ++j) next += law.draw(rng);
    return next;
}

double wb_growth_draw(double h, double sigma_unit, Rng& rng) {
    return sigma_unit * std::sqrt(h) * rng.normal();
}

} // namespace detail

GrowthPanel simulate_wyart_bouchaud(const WyartBouchaudConfig& cfg) {
    check_wb(cfg);
    const randkit::DiscretePowerLaw k_law(cfg.alpha, 1);
    GrowthPanel panel;
    panel.records.resize(cfg.n_firms);
    panel.config_digest = config_digest(cfg);
    RngStream root{cfg.seed, 0};
    parallel_for(cfg.n_firms, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng(root.substream(kWbTag, i));
            const std::uint64_t k = k_law.draw(rng);
            const randkit::ParetoParams unit_law{1.0, cfg.mu};
            double s = 0.0, s2 = 0.0;
            for (std::uint64_t j = 0; j < k; ++j) {
                const double x = randkit::pareto_draw(unit_law, rng);
                s += x;
                s2 += x * x;
            }
            const double h = s2 / (s * s);
            const double g = detail::wb_growth_draw(h, cfg.sigma_unit, rng);
            GrowthRecord& rec = panel.records[i];
            rec.firm_id = i;
            rec.period = 0;
            rec.size_before = s;
            rec.log_growth = g;
            rec.pct_growth = std::expm1(g);
            rec.size_after = s * std::exp(g);
            rec.unit_count = static_cast<std::int64_t>(k);
            rec.herfindahl = h;
        }
    });
    return panel;
}

std::vector<std::uint64_t> simulate_simon(const SimonConfig& cfg) {
    check_simon(cfg);
    const std::size_t capacity =
        cfg.b > 0.0 ? static_cast<std::size_t>(cfg.n_steps) + cfg.n_seed_firms
                    : static_cast<std::size_t>(cfg.n_seed_firms);
    Fenwick units(capacity);
    std::vector<std::uint64_t> counts;
    counts.reserve(capacity);
    for (std::uint64_t i = 0; i < cfg.n_seed_firms; ++i) {
        counts.push_back(1);
        units.add(i, 1);
    }
    Rng rng(RngStream{cfg.seed, 0}.substream(kSimonTag));
    for (std::uint64_t t = 0; t < cfg.n_steps; ++t) {
        const bool found_new = counts.empty() || (cfg.b > 0.0 && rng.u01() < cfg.b);
        if (found_new) {
            units.add(counts.size(), 1);
            counts.push_back(1);
        } else {
            const std::size_t firm = units.find(rng.below(units.total()));
            ++counts[firm];
            units.add(firm, 1);
        }
    }
    return counts;
}

GrowthPanel simulate_gpg(const GpgConfig& cfg) {
    if (cfg.unit_log_sd < 0.0 || cfg.gibrat_log_sd < 0.0)
        throw parameter_error("gpg: log standard deviations must be non-negative");
    if (cfg.measure_window < 1) throw parameter_error("gpg: measure_window must be >= 1");
    SimonConfig arrivals{cfg.b, cfg.n_steps, cfg.n_seed_firms, cfg.seed};
    const std::vector<std::uint64_t> unit_counts = simulate_simon(arrivals);
    GrowthPanel panel;
    panel.records.resize(unit_counts.size());
    panel.config_digest = config_digest(cfg);
    RngStream root{cfg.seed, 0};
    parallel_for(unit_counts.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng(root.substream(kGpgTag, i));
            const std::uint64_t k = unit_counts[i];
            double s_before = 0.0, s_before_sq = 0.0, s_after = 0.0;
            for (std::uint64_t j = 0; j < k; ++j) {
                const double x = std::exp(cfg.unit_log_sd * rng.normal());
                double factor = 1.0;
                for (std::uint32_t t = 0; t < cfg.measure_window; ++t)
                    factor *= std::exp(cfg.gibrat_log_sd * rng.normal());
                s_before += x;
                s_before_sq += x * x;
                s_after += x * factor;
            }
            const double g = std::log(s_after / s_before);
            GrowthRecord& rec = panel.records[i];
            rec.firm_id = i;
            rec.period = 0;
            rec.size_before = s_before;
            rec.size_after = s_after;
            rec.log_growth = g;
            rec.pct_growth = std::expm1(g);
            rec.unit_count = static_cast<std::int64_t>(k);
            rec.herfindahl = s_before_sq / (s_before * s_before);
        }
    });
    return panel;
}

GrowthPanel simulate_psi_mixture(const PsiMixtureConfig& cfg) {
    if (!(cfg.lambda > 0.0)) throw parameter_error("psi mixture: lambda must be positive");
    if (!(cfg.sigma > 0.0)) throw parameter_error("psi mixture: sigma must be positive");
    if (cfg.n_firms < 1) throw parameter_error("psi mixture: n_firms must be >= 1");
    GrowthPanel panel;
    panel.records.resize(cfg.n_firms);
    panel.config_digest = config_digest(cfg);
    RngStream root{cfg.seed, 0};
    parallel_for(cfg.n_firms, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng(root.substream(kPsiTag, i));
            const double k = rng.exponential() / cfg.lambda;
            const double sd = cfg.sigma * std::pow(k, 0.5 * cfg.psi);
            const double g = sd * rng.normal();
            GrowthRecord& rec = panel.records[i];
            rec.firm_id = i;
            rec.period = 0;
            rec.size_before = k;
            rec.log_growth = g;
            rec.pct_growth = std::expm1(g);
            rec.size_after = k * std::exp(g);
            rec.unit_count = static_cast<std::int64_t>(std::llround(k));
            rec.herfindahl = 1.0; // concentration is not modelled here
        }
    });
    return panel;
}

GrowthPanel simulate_sutton(const SuttonConfig& cfg) {
    if (cfg.size_grid.empty()) throw parameter_error("sutton: size_grid must be non-empty");
    for (std::uint32_t s : cfg.size_grid)
        if (s < 1 || s > randkit::kPartitionCeiling)
            throw parameter_error("sutton: size outside the partition sampler ceiling");
    if (cfg.samples_per_size < 1) throw parameter_error("sutton: samples_per_size must be >= 1");
    if (cfg.unit_shock_sd < 0.0) throw parameter_error("sutton: unit_shock_sd must be >= 0");
    const randkit::PartitionTable& table = randkit::shared_partition_table();
    const std::size_t total = cfg.size_grid.size() * cfg.samples_per_size;
    GrowthPanel panel;
    panel.records.resize(total);
    panel.config_digest = config_digest(cfg);
    RngStream root{cfg.seed, 0};
    const double laplace_scale = cfg.unit_shock_sd / std::sqrt(2.0);
    parallel_for(total, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> shocks;
        FirmComposition comp;
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const std::size_t si = idx / cfg.samples_per_size;
            const std::size_t sample = idx % cfg.samples_per_size;
            Rng rng(root.substream(kSuttonTag, si, sample));
            const randkit::Partition part = table.sample(cfg.size_grid[si], rng);
            comp.units.assign(part.parts.begin(), part.parts.end());
            shocks.resize(comp.units.size());
            for (double& e : shocks) {
                do {
                    e = cfg.unit_shock_kind == ShockKind::gaussian
                            ? cfg.unit_shock_sd * rng.normal()
                            : laplace_scale * rng.laplace();
                } while (e <= -1.0); // percent shocks must keep units positive
            }
            GrowthRecord rec = aggregate_growth(comp, shocks);
            rec.firm_id = idx;
            rec.period = 0;
            panel.records[idx] = rec;
        }
    });
    return panel;
}

GrowthPanel simulate_fas(const FasConfig& cfg) {
    if (!(cfg.mu > 1.0 && cfg.mu < 2.0))
        throw parameter_error("fas: mu must lie in (1, 2)");
    if (cfg.k0_grid.empty()) throw parameter_error("fas: k0_grid must be non-empty");
    for (std::uint64_t k0 : cfg.k0_grid)
        if (k0 < 1) throw parameter_error("fas: initial unit counts must be >= 1");
    if (cfg.samples < 1 || cfg.n_periods < 1)
        throw parameter_error("fas: samples and n_periods must be >= 1");
    const detail::ReplicationLaw law = detail::ReplicationLaw::power_tail(cfg.mu);
    const std::size_t n_firms = cfg.k0_grid.size() * cfg.samples;
    // Records collected per firm; extinct firms stop early.
    std::vector<std::vector<GrowthRecord>> per_firm(n_firms);
    RngStream root{cfg.seed, 0};
    parallel_for(n_firms, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const std::size_t gi = idx / cfg.samples;
            const std::size_t sample = idx % cfg.samples;
            Rng rng(root.substream(kFasTag, gi, sample));
            std::uint64_t k = cfg.k0_grid[gi];
            auto& recs = per_firm[idx];
            recs.reserve(cfg.n_periods);
            for (std::uint32_t t = 0; t < cfg.n_periods; ++t) {
                const std::uint64_t next = detail::fas_step(k, law, rng);
                GrowthRecord rec;
                rec.firm_id = idx;
                rec.period = static_cast<std::int32_t>(t);
                rec.size_before = static_cast<double>(k);
                rec.size_after = static_cast<double>(next);
                rec.pct_growth = static_cast<double>(next) / static_cast<double>(k) - 1.0;
                rec.log_growth = next == 0
                                     ? -std::numeric_limits<double>::infinity()
                                     : std::log(static_cast<double>(next) /
                                                static_cast<double>(k));
                rec.unit_count = static_cast<std::int64_t>(k);
                rec.herfindahl = 1.0 / static_cast<double>(k); // equal unit sizes
                recs.push_back(rec);
                if (next == 0) break; // extinction: the firm stops
                k = next;
            }
        }
    });
    GrowthPanel panel;
    panel.config_digest = config_digest(cfg);
    std::size_t count = 0;
    for (const auto& v : per_firm) count += v.size();
    panel.records.reserve(count);
    for (const auto& v : per_firm)
        panel.records.insert(panel.records.end(), v.begin(), v.end());
    return panel;
}

GrowthPanel simulate(const ModelConfig& cfg) {
    return std::visit(
        [](const auto& c) -> GrowthPanel {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SimonConfig>) {
                // Arrival processes report unit counts; wrap them as a panel
                // of zero-growth records so the harness can histogram K.
                const std::vector<std::uint64_t> counts = simulate_simon(c);
                GrowthPanel panel;
                panel.config_digest = config_digest(ModelConfig{c});
                panel.records.resize(counts.size());
                for (std::size_t i = 0; i < counts.size(); ++i) {
                    GrowthRecord& rec = panel.records[i];
                    rec.firm_id = i;
                    rec.size_before = static_cast<double>(counts[i]);
                    rec.size_after = rec.size_before;
                    rec.unit_count = static_cast<std::int64_t>(counts[i]);
                    rec.herfindahl = 1.0 / static_cast<double>(counts[i]);
                }
                return panel;
            } else {
                if constexpr (std::is_same_v<T, WyartBouchaudConfig>)
                    return simulate_wyart_bouchaud(c);
                else if constexpr (std::is_same_v<T, GpgConfig>)
                    return simulate_gpg(c);
                else if constexpr (std::is_same_v<T, PsiMixtureConfig>)
                    return simulate_psi_mixture(c);
                else if constexpr (std::is_same_v<T, SuttonConfig>)
                    return simulate_sutton(c);
                else
                    return simulate_fas(c);
            }
        },
        cfg);
}

std::string config_digest(const ModelConfig& cfg) {
    std::string s;
    s += std::to_string(cfg.index());
    s += ':';
    std::visit(
        [&s](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, WyartBouchaudConfig>) {
                append_num(s, c.alpha);
                append_num(s, c.mu);
                append_num(s, c.sigma_unit);
                append_num(s, c.n_firms);
                append_num(s, c.seed);
            } else if constexpr (std::is_same_v<T, SimonConfig>) {
                append_num(s, c.b);
                append_num(s, c.n_steps);
                append_num(s, c.n_seed_firms);
                append_num(s, c.seed);
            } else if constexpr (std::is_same_v<T, GpgConfig>) {
                append_num(s, c.b);
                append_num(s, c.n_steps);
                append_num(s, c.n_seed_firms);
                append_num(s, c.unit_log_sd);
                append_num(s, c.gibrat_log_sd);
                append_num(s, static_cast<std::uint64_t>(c.measure_window));
                append_num(s, c.seed);
            } else if constexpr (std::is_same_v<T, PsiMixtureConfig>) {
                append_num(s, c.psi);
                append_num(s, c.lambda);
                append_num(s, c.sigma);
                append_num(s, c.n_firms);
                append_num(s, c.seed);
            } else if constexpr (std::is_same_v<T, SuttonConfig>) {
                for (std::uint32_t v : c.size_grid) append_num(s, static_cast<std::uint64_t>(v));
                append_num(s, c.samples_per_size);
                append_num(s, c.unit_shock_sd);
                append_num(s, static_cast<std::uint64_t>(c.unit_shock_kind == ShockKind::laplace));
                append_num(s, c.seed);
            } else {
                append_num(s, c.mu);
                for (std::uint64_t v : c.k0_grid) append_num(s, v);
                append_num(s, static_cast<std::uint64_t>(c.n_periods));
                append_num(s, c.samples);
                append_num(s, c.seed);
            }
        },
        cfg);
    return fnv_hex(s);
}

} // namespace growth::models

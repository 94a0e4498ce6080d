#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace growth::models {

// Ordered unit sizes of one firm. Size S, unit count K and the Herfindahl
// concentration index are derived quantities.
struct FirmComposition {
    std::vector<double> units;

    double size() const;
    std::size_t unit_count() const { return units.size(); }
};

void validate(const FirmComposition& c);

// Sum of squared size shares, in [1/K, 1].
double herfindahl(const FirmComposition& c);

// Growth volatility for equal unit volatilities: sigma_unit * sqrt(H).
double firm_volatility(const FirmComposition& c, double sigma_unit);

// One firm-period observation. pct_growth == exp(log_growth) - 1 holds for
// every record; a collapse to size zero is stored as pct_growth == -1 with
// log_growth == -infinity, which still satisfies the identity.
struct GrowthRecord {
    std::uint64_t firm_id = 0;
    std::int32_t period = 0;
    double size_before = 0.0;
    double size_after = 0.0;
    double log_growth = 0.0;
    double pct_growth = 0.0;
    std::int64_t unit_count = 0;
    double herfindahl = 0.0;
};

struct GrowthPanel {
    std::vector<GrowthRecord> records;
    std::string config_digest;
};

// Share-weighted aggregation of unit percent growths into a firm record.
// The caller fills firm_id/period. Unit growths must exceed -1.
GrowthRecord aggregate_growth(const FirmComposition& before,
                              const std::vector<double>& unit_pct_growth);

} // namespace growth::models

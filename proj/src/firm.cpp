#include "growth/firm.hpp"

#include <cmath>

#include "growth/errors.hpp"

namespace growth::models {

double FirmComposition::size() const {
    double s = 0.0;
    for (double x : units) s += x;
    return s;
}

void validate(const FirmComposition& c) {
    if (c.units.empty()) throw parameter_error("composition must have at least one unit");
    for (double x : c.units)
        if (!(x > 0.0)) throw parameter_error("unit sizes must be positive");
}

double herfindahl(const FirmComposition& c) {
    validate(c);
    const double s = c.size();
    double h = 0.0;
    for (double x : c.units) {
        const double share = x / s;
        h += share * share;
    }
    return h;
}

double firm_volatility(const FirmComposition& c, double sigma_unit) {
    if (!(sigma_unit > 0.0)) throw parameter_error("sigma_unit must be positive");
    return sigma_unit * std::sqrt(herfindahl(c));
}

GrowthRecord aggregate_growth(const FirmComposition& before,
                              const std::vector<double>& unit_pct_growth) {
    validate(before);
    if (unit_pct_growth.size() != before.units.size())
        throw shape_error("aggregate_growth: one growth rate per unit required");
    const double s = before.size();
    double pct = 0.0;
    for (std::size_t j = 0; j < before.units.size(); ++j) {
        const double r = unit_pct_growth[j];
        if (!(r > -1.0)) throw domain_error("aggregate_growth: unit growth must exceed -1");
        pct += before.units[j] / s * r;
    }
    GrowthRecord rec;
    rec.size_before = s;
    rec.pct_growth = pct;
    rec.log_growth = std::log1p(pct);
    rec.size_after = s * (1.0 + pct);
    rec.unit_count = static_cast<std::int64_t>(before.units.size());
    rec.herfindahl = herfindahl(before);
    return rec;
}

} // namespace growth::models

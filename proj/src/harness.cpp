#include "growth/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "growth/errors.hpp"
#include "growth/oracle.hpp"
#include "growth/special.hpp"

namespace growth::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw io_error("cannot open output file " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << fmt17(values[i]);
        }
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) throw io_error("failed writing " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream out_;
};

json model_to_json(const models::ModelConfig& cfg) {
    json j;
    std::visit(
        [&j](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, models::WyartBouchaudConfig>) {
                j["model"] = "wb";
                j["alpha"] = c.alpha;
                j["mu"] = c.mu;
                j["sigma_unit"] = c.sigma_unit;
                j["n_firms"] = c.n_firms;
                j["seed"] = c.seed;
            } else if constexpr (std::is_same_v<T, models::SimonConfig>) {
                j["model"] = "simon";
                j["b"] = c.b;
                j["n_steps"] = c.n_steps;
                j["n_seed_firms"] = c.n_seed_firms;
                j["seed"] = c.seed;
            } else if constexpr (std::is_same_v<T, models::GpgConfig>) {
                j["model"] = "gpg";
                j["b"] = c.b;
                j["n_steps"] = c.n_steps;
                j["n_seed_firms"] = c.n_seed_firms;
                j["unit_log_sd"] = c.unit_log_sd;
                j["gibrat_log_sd"] = c.gibrat_log_sd;
                j["measure_window"] = c.measure_window;
                j["seed"] = c.seed;
            } else if constexpr (std::is_same_v<T, models::PsiMixtureConfig>) {
                j["model"] = "psi";
                j["psi"] = c.psi;
                j["lambda"] = c.lambda;
                j["sigma"] = c.sigma;
                j["n_firms"] = c.n_firms;
                j["seed"] = c.seed;
            } else if constexpr (std::is_same_v<T, models::SuttonConfig>) {
                j["model"] = "sutton";
                j["size_grid"] = c.size_grid;
                j["samples_per_size"] = c.samples_per_size;
                j["unit_shock_sd"] = c.unit_shock_sd;
                j["unit_shock_kind"] =
                    c.unit_shock_kind == models::ShockKind::laplace ? "laplace"
                                                                    : "gaussian";
                j["seed"] = c.seed;
            } else {
                j["model"] = "fas";
                j["mu"] = c.mu;
                j["k0_grid"] = c.k0_grid;
                j["n_periods"] = c.n_periods;
                j["samples"] = c.samples;
                j["seed"] = c.seed;
            }
        },
        cfg);
    return j;
}

void set_seed(models::ModelConfig& cfg, std::uint64_t seed) {
    std::visit([seed](auto& c) { c.seed = seed; }, cfg);
}

std::vector<double> finite_log_growth(const models::GrowthPanel& panel) {
    std::vector<double> g;
    g.reserve(panel.records.size());
    for (const auto& r : panel.records)
        if (std::isfinite(r.log_growth)) g.push_back(r.log_growth);
    return g;
}

void write_density_csv(const fs::path& path, const stats::DensityCurve& curve) {
    CsvWriter csv(path, {"g", "density"});
    for (const auto& p : curve.points) csv.row({p.x, p.density});
    csv.close();
}

void write_binned_csv(const fs::path& path, const stats::BinnedCurve& curve) {
    CsvWriter csv(path, {"bin_center", "value", "count"});
    for (const auto& p : curve.points)
        csv.row({p.center, p.value, static_cast<double>(p.count)});
    csv.close();
}

void write_tail_csv(const fs::path& path, const std::vector<double>& samples) {
    CsvWriter csv(path, {"k", "exponent", "stderr"});
    const std::size_t n = samples.size();
    std::vector<std::size_t> ks;
    for (double f : {0.002, 0.005, 0.01, 0.02, 0.05, 0.1}) {
        const auto k = static_cast<std::size_t>(static_cast<double>(n) * f);
        if (k >= 10 && k + 1 < n) ks.push_back(k);
    }
    const std::size_t dk = stats::hill_default_k(n);
    if (std::find(ks.begin(), ks.end(), dk) == ks.end() && dk + 1 < n)
        ks.push_back(dk);
    std::sort(ks.begin(), ks.end());
    for (std::size_t k : ks) {
        const stats::FitResult fit = stats::hill_estimator(samples, k);
        csv.row({static_cast<double>(k), fit.exponent, fit.stderr_});
    }
    csv.close();
}

void write_herfindahl_csv(const fs::path& path, const models::GrowthPanel& panel) {
    std::map<std::int64_t, std::vector<double>> by_k;
    for (const auto& r : panel.records) by_k[r.unit_count].push_back(r.herfindahl);
    CsvWriter csv(path, {"unit_count", "median_h", "mean_h", "count"});
    for (auto& [k, hs] : by_k) {
        std::sort(hs.begin(), hs.end());
        const double median = hs[hs.size() / 2];
        double mean = 0.0;
        for (double h : hs) mean += h;
        mean /= static_cast<double>(hs.size());
        csv.row({static_cast<double>(k), median, mean,
                 static_cast<double>(hs.size())});
    }
    csv.close();
}

void write_qq_csv(const fs::path& path, const models::ModelConfig& model,
                  const models::GrowthPanel& panel, std::uint64_t seed) {
    const auto* fas = std::get_if<models::FasConfig>(&model);
    if (!fas)
        throw parameter_error("qq_stable analysis requires the branching model");
    std::vector<double> rescaled;
    rescaled.reserve(panel.records.size());
    const double expo = (fas->mu - 1.0) / fas->mu;
    for (const auto& r : panel.records)
        rescaled.push_back(std::pow(r.size_before, expo) * r.pct_growth);
    randkit::StableParams ref_params{fas->mu, 1.0, oracle::fas_stable_scale(fas->mu),
                                     0.0};
    std::vector<double> ref = randkit::sample_stable(
        ref_params, 10'000'000, randkit::RngStream{seed, 0}.substream(901));
    std::sort(rescaled.begin(), rescaled.end());
    std::sort(ref.begin(), ref.end());
    const auto sorted_quantile = [](const std::vector<double>& sorted, double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= sorted.size()) return sorted.back();
        const double f = pos - static_cast<double>(i);
        return sorted[i] * (1.0 - f) + sorted[i + 1] * f;
    };
    CsvWriter csv(path, {"quantile_level", "empirical", "stable_reference"});
    for (int i = 1; i <= 99; ++i) {
        const double q = static_cast<double>(i) / 100.0;
        csv.row({q, sorted_quantile(rescaled, q), sorted_quantile(ref, q)});
    }
    csv.close();
}

std::string analysis_filename(const AnalysisRequest& a) {
    switch (a.kind) {
        case AnalysisKind::density: return "density.csv";
        case AnalysisKind::size_volatility:
            switch (a.statistic) {
                case stats::DispersionStat::mean_abs: return "size_volatility_mean_abs.csv";
                case stats::DispersionStat::rms: return "size_volatility_rms.csv";
                case stats::DispersionStat::sd: return "size_volatility_sd.csv";
            }
            return "size_volatility.csv";
        case AnalysisKind::tail: return "tail_" + a.tail_side + ".csv";
        case AnalysisKind::herfindahl_scaling: return "herfindahl_scaling.csv";
        case AnalysisKind::qq_stable: return "qq.csv";
    }
    return "analysis.csv";
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
    json j;
    j["tool"] = manifest.tool;
    j["version"] = manifest.version;
    j["seed"] = manifest.seed;
    j["started_utc"] = manifest.started_utc;
    j["finished_utc"] = manifest.finished_utc;
    j["config"] = json::parse(manifest.config_json);
    j["outputs"] = json::array();
    for (const auto& o : manifest.outputs)
        j["outputs"].push_back({{"file", o.file}, {"fnv1a64", o.fnv1a64}});
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw io_error("cannot open manifest.json in " + dir.string());
    out << j.dump(2) << '\n';
    out.close();
    if (!out) throw io_error("failed writing manifest.json");
}

fs::path prepare_output_dir(const std::string& output_dir) {
    fs::path dir(output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw io_error("cannot create output directory " + output_dir);
    return dir;
}

} // namespace

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
    if (cfg.analyses.empty())
        throw parameter_error("run_experiment: at least one analysis required");
    const fs::path dir = prepare_output_dir(cfg.output_dir);
    RunManifest manifest;
    manifest.tool = kToolName;
    manifest.version = kToolVersion;
    manifest.seed = cfg.seed;
    manifest.started_utc = utc_now();

    models::ModelConfig model = cfg.model;
    set_seed(model, cfg.seed);
    manifest.config_json = model_to_json(model).dump();
    const models::GrowthPanel panel = models::simulate(model);

    for (const AnalysisRequest& a : cfg.analyses) {
        const fs::path path = dir / analysis_filename(a);
        switch (a.kind) {
            case AnalysisKind::density: {
                const std::vector<double> g = finite_log_growth(panel);
                write_density_csv(path, stats::kde_density(g, 0.0, 512));
                break;
            }
            case AnalysisKind::size_volatility:
                write_binned_csv(path,
                                 stats::size_volatility_curve(panel, 24, a.statistic));
                break;
            case AnalysisKind::tail: {
                std::vector<double> samples;
                for (const auto& r : panel.records) {
                    if (!std::isfinite(r.log_growth)) continue;
                    if (a.tail_side == "upper" && r.log_growth > 0.0)
                        samples.push_back(r.log_growth);
                    else if (a.tail_side == "lower" && r.log_growth < 0.0)
                        samples.push_back(-r.log_growth);
                    else if (a.tail_side == "abs")
                        samples.push_back(std::abs(r.log_growth));
                }
                write_tail_csv(path, samples);
                break;
            }
            case AnalysisKind::herfindahl_scaling:
                write_herfindahl_csv(path, panel);
                break;
            case AnalysisKind::qq_stable:
                write_qq_csv(path, model, panel, cfg.seed);
                break;
        }
        manifest.outputs.push_back(
            {analysis_filename(a), file_digest_hex(path.string())});
    }
    manifest.finished_utc = utc_now();
    write_manifest(dir, manifest);
    return manifest;
}

namespace {

RunManifest reproduce_fig1_left(const fs::path& dir, std::uint64_t seed) {
    RunManifest manifest;
    manifest.tool = kToolName;
    manifest.version = kToolVersion;
    manifest.seed = seed;
    manifest.started_utc = utc_now();

    models::WyartBouchaudConfig cfg;
    cfg.alpha = 1.2;
    cfg.mu = 1.4;
    cfg.sigma_unit = 1.0;
    cfg.n_firms = 100000;
    cfg.seed = seed;
    manifest.config_json = model_to_json(cfg).dump();
    const models::GrowthPanel panel = models::simulate_wyart_bouchaud(cfg);

    const std::vector<double> g = finite_log_growth(panel);
    write_density_csv(dir / "density.csv", stats::kde_density(g, 0.0, 512));

    const auto mean_abs = stats::size_volatility_curve(
        panel, 24, stats::DispersionStat::mean_abs);
    const auto rms = stats::size_volatility_curve(panel, 24, stats::DispersionStat::rms);
    const auto sd = stats::size_volatility_curve(panel, 24, stats::DispersionStat::sd);
    {
        CsvWriter csv(dir / "size_volatility.csv",
                      {"bin_center", "mean_abs", "rms", "sd", "count"});
        for (std::size_t i = 0; i < rms.points.size(); ++i)
            csv.row({rms.points[i].center, mean_abs.points[i].value,
                     rms.points[i].value, sd.points[i].value,
                     static_cast<double>(rms.points[i].count)});
        csv.close();
    }

    // Fitted slopes over the full surviving range and over the central 80%
    // of the log-size range (the fitting window is a free choice, so both
    // are recorded).
    const auto central_window = [](const stats::BinnedCurve& c) {
        stats::BinnedCurve out;
        if (c.points.empty()) return out;
        const double lo = std::log(c.points.front().center);
        const double hi = std::log(c.points.back().center);
        const double a = lo + 0.1 * (hi - lo), b = hi - 0.1 * (hi - lo);
        for (const auto& p : c.points)
            if (std::log(p.center) >= a && std::log(p.center) <= b)
                out.points.push_back(p);
        return out;
    };
    json summary;
    std::vector<double> abs_g;
    abs_g.reserve(g.size());
    for (double v : g) abs_g.push_back(std::abs(v));
    std::vector<double> sizes;
    sizes.reserve(panel.records.size());
    for (const auto& r : panel.records) sizes.push_back(r.size_before);
    const auto hill_g = stats::hill_estimator(abs_g, stats::hill_default_k(abs_g.size()));
    const auto hill_s = stats::hill_estimator(sizes, stats::hill_default_k(sizes.size()));
    summary["growth_tail_hill"] = {{"exponent", hill_g.exponent},
                                   {"stderr", hill_g.stderr_},
                                   {"k", hill_g.n_points}};
    summary["size_tail_hill"] = {{"exponent", hill_s.exponent},
                                 {"stderr", hill_s.stderr_},
                                 {"k", hill_s.n_points}};
    const auto rms_fit = stats::fit_loglog_slope(rms);
    const auto rms_fit_central = stats::fit_loglog_slope(central_window(rms));
    const auto mean_abs_fit = stats::fit_loglog_slope(mean_abs);
    summary["rms_slope_full_range"] = {{"slope", rms_fit.exponent},
                                       {"stderr", rms_fit.stderr_}};
    summary["rms_slope_central80"] = {{"slope", rms_fit_central.exponent},
                                      {"stderr", rms_fit_central.stderr_}};
    summary["mean_abs_slope_full_range"] = {{"slope", mean_abs_fit.exponent},
                                            {"stderr", mean_abs_fit.stderr_}};
    summary["decay_slower_than_inverse_sqrt_size"] = rms_fit.exponent > -0.5;
    summary["note"] =
        "rms volatility decays slower than S^-1/2 over the fitted range";
    {
        std::ofstream out(dir / "summary.json", std::ios::binary);
        if (!out) throw io_error("cannot open summary.json");
        out << summary.dump(2) << '\n';
    }
    for (const char* f : {"density.csv", "size_volatility.csv", "summary.json"})
        manifest.outputs.push_back({f, file_digest_hex((dir / f).string())});
    manifest.finished_utc = utc_now();
    write_manifest(dir, manifest);
    return manifest;
}

RunManifest reproduce_fig1_right(const fs::path& dir, std::uint64_t seed) {
    RunManifest manifest;
    manifest.tool = kToolName;
    manifest.version = kToolVersion;
    manifest.seed = seed;
    manifest.started_utc = utc_now();

    models::GpgConfig cfg;
    cfg.b = 0.0;
    cfg.n_steps = 1000000;
    cfg.n_seed_firms = 10000;
    cfg.unit_log_sd = 1.0;
    cfg.gibrat_log_sd = 0.3;
    cfg.measure_window = 1;
    cfg.seed = seed;
    manifest.config_json = model_to_json(cfg).dump();
    const models::GrowthPanel panel = models::simulate_gpg(cfg);

    const std::vector<double> g = finite_log_growth(panel);
    write_density_csv(dir / "density.csv", stats::kde_density(g, 0.0, 512));

    std::map<std::int64_t, std::uint64_t> hist;
    double mean_k = 0.0;
    for (const auto& r : panel.records) {
        ++hist[r.unit_count];
        mean_k += static_cast<double>(r.unit_count);
    }
    mean_k /= static_cast<double>(panel.records.size());
    {
        CsvWriter csv(dir / "unit_count_hist.csv", {"unit_count", "count"});
        for (const auto& [k, c] : hist)
            csv.row({static_cast<double>(k), static_cast<double>(c)});
        csv.close();
    }

    std::vector<double> ks_samples;
    ks_samples.reserve(panel.records.size());
    for (const auto& r : panel.records)
        ks_samples.push_back(static_cast<double>(r.unit_count));
    const double rate = 1.0 / mean_k;
    const double ks = stats::ks_distance(
        ks_samples, [rate](double x) { return exponential_cdf(x, rate); });

    json summary;
    summary["mean_unit_count"] = mean_k;
    summary["exponential_fit_rate"] = rate;
    summary["exponential_fit_ks"] = ks;
    {
        std::ofstream out(dir / "summary.json", std::ios::binary);
        if (!out) throw io_error("cannot open summary.json");
        out << summary.dump(2) << '\n';
    }
    for (const char* f : {"density.csv", "unit_count_hist.csv", "summary.json"})
        manifest.outputs.push_back({f, file_digest_hex((dir / f).string())});
    manifest.finished_utc = utc_now();
    write_manifest(dir, manifest);
    return manifest;
}

} // namespace

RunManifest reproduce(Figure figure, const std::string& output_dir,
                      std::uint64_t seed) {
    const fs::path dir = prepare_output_dir(output_dir);
    return figure == Figure::fig1_left ? reproduce_fig1_left(dir, seed)
                                       : reproduce_fig1_right(dir, seed);
}

} // namespace growth::harness

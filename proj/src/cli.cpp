#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "growth/errors.hpp"
#include "growth/harness.hpp"
#include "growth/oracle.hpp"
#include "growth/special.hpp"

namespace growth::harness {

namespace {

struct SimulateOptions {
    std::string model;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> analyses{"density"};
    std::string statistic = "rms";
    std::string tail_side = "abs";
    // union of model parameters; each model reads its own
    double alpha = 1.2, mu = 1.4, sigma_unit = 1.0;
    std::uint64_t n_firms = 100000;
    double b = 0.1;
    std::uint64_t n_steps = 1000000, n_seed_firms = 10000;
    double unit_log_sd = 1.0, gibrat_log_sd = 0.3;
    std::uint32_t measure_window = 1;
    double psi = 0.0, lambda = 1.0, sigma = 1.0;
    std::vector<std::uint32_t> size_grid;
    std::uint64_t samples_per_size = 1000;
    double unit_shock_sd = 0.1;
    std::string shock_kind = "gaussian";
    std::vector<std::uint64_t> k0_grid;
    std::uint32_t n_periods = 1;
    std::uint64_t samples = 1000;
};

models::ModelConfig build_model(const SimulateOptions& o) {
    if (o.model == "wb")
        return models::WyartBouchaudConfig{o.alpha, o.mu, o.sigma_unit, o.n_firms,
                                           o.seed};
    if (o.model == "simon")
        return models::SimonConfig{o.b, o.n_steps, o.n_seed_firms, o.seed};
    if (o.model == "gpg")
        return models::GpgConfig{o.b,           o.n_steps,       o.n_seed_firms,
                                 o.unit_log_sd, o.gibrat_log_sd, o.measure_window,
                                 o.seed};
    if (o.model == "psi")
        return models::PsiMixtureConfig{o.psi, o.lambda, o.sigma, o.n_firms, o.seed};
    if (o.model == "sutton") {
        std::vector<std::uint32_t> grid = o.size_grid;
        if (grid.empty()) grid = {100, 200, 500, 1000, 2000, 5000};
        return models::SuttonConfig{grid, o.samples_per_size, o.unit_shock_sd,
                                    o.shock_kind == "laplace"
                                        ? models::ShockKind::laplace
                                        : models::ShockKind::gaussian,
                                    o.seed};
    }
    if (o.model == "fas") {
        std::vector<std::uint64_t> grid = o.k0_grid;
        if (grid.empty()) grid = {16, 64, 256, 1024, 4096, 16384};
        return models::FasConfig{o.mu, grid, o.n_periods, o.samples, o.seed};
    }
    throw parameter_error("unknown model '" + o.model +
                          "' (expected wb|simon|gpg|psi|sutton|fas)");
}

std::vector<AnalysisRequest> build_analyses(const SimulateOptions& o) {
    std::vector<AnalysisRequest> out;
    for (const std::string& name : o.analyses) {
        AnalysisRequest a;
        if (name == "density") {
            a.kind = AnalysisKind::density;
        } else if (name == "size_volatility") {
            a.kind = AnalysisKind::size_volatility;
            if (o.statistic == "mean_abs") a.statistic = stats::DispersionStat::mean_abs;
            else if (o.statistic == "sd") a.statistic = stats::DispersionStat::sd;
            else if (o.statistic == "rms") a.statistic = stats::DispersionStat::rms;
            else throw parameter_error("unknown statistic '" + o.statistic + "'");
        } else if (name == "tail") {
            a.kind = AnalysisKind::tail;
            if (o.tail_side != "abs" && o.tail_side != "upper" && o.tail_side != "lower")
                throw parameter_error("unknown tail side '" + o.tail_side + "'");
            a.tail_side = o.tail_side;
        } else if (name == "herfindahl_scaling") {
            a.kind = AnalysisKind::herfindahl_scaling;
        } else if (name == "qq_stable") {
            a.kind = AnalysisKind::qq_stable;
        } else {
            throw parameter_error("unknown analysis '" + name + "'");
        }
        out.push_back(a);
    }
    return out;
}

int run_selftest();

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Monte Carlo toolkit for compositional models of firm growth",
                 "granular"};
    app.require_subcommand(1);
    // Config values live in a [simulate] section; flags given on the command
    // line override the file.
    app.set_config("--config", "",
                   "TOML/INI config file with a [simulate] section");

    SimulateOptions opt;
    CLI::App* sim = app.add_subcommand("simulate", "Run one model and write analyses");
    sim->fallthrough();
    sim->add_option("model", opt.model, "Model family: wb|simon|gpg|psi|sutton|fas")
        ->required();
    sim->add_option("--out", opt.out_dir, "Output directory")->required();
    sim->add_option("--seed", opt.seed, "Random seed");
    sim->add_option("--analyses", opt.analyses,
                    "Analyses: density,size_volatility,tail,herfindahl_scaling,qq_stable")
        ->delimiter(',');
    sim->add_option("--statistic", opt.statistic, "size_volatility statistic");
    sim->add_option("--tail-side", opt.tail_side, "tail side: abs|upper|lower");
    sim->add_option("--alpha", opt.alpha, "Unit-count tail exponent (wb)");
    sim->add_option("--mu", opt.mu, "Unit-size / replication tail exponent (wb, fas)");
    sim->add_option("--sigma-unit", opt.sigma_unit, "Unit volatility (wb)");
    sim->add_option("--n-firms", opt.n_firms, "Number of firms (wb, psi)");
    sim->add_option("--b", opt.b, "Founding probability (simon, gpg)");
    sim->add_option("--n-steps", opt.n_steps, "Arrival steps (simon, gpg)");
    sim->add_option("--n-seed-firms", opt.n_seed_firms, "Seed firms when b = 0");
    sim->add_option("--unit-log-sd", opt.unit_log_sd, "Log-sd of unit sizes (gpg)");
    sim->add_option("--gibrat-log-sd", opt.gibrat_log_sd, "Log-sd of unit shocks (gpg)");
    sim->add_option("--measure-window", opt.measure_window, "Measurement periods (gpg)");
    sim->add_option("--psi", opt.psi, "Variance exponent (psi)");
    sim->add_option("--lambda", opt.lambda, "Rate of the exponential unit-count law (psi)");
    sim->add_option("--sigma", opt.sigma, "Base volatility (psi)");
    sim->add_option("--size-grid", opt.size_grid, "Firm sizes (sutton)")->delimiter(',');
    sim->add_option("--samples-per-size", opt.samples_per_size, "Samples per size (sutton)");
    sim->add_option("--unit-shock-sd", opt.unit_shock_sd, "Unit shock sd (sutton)");
    sim->add_option("--shock-kind", opt.shock_kind, "gaussian|laplace (sutton)");
    sim->add_option("--k0-grid", opt.k0_grid, "Initial unit counts (fas)")->delimiter(',');
    sim->add_option("--n-periods", opt.n_periods, "Periods per firm (fas)");
    sim->add_option("--samples", opt.samples, "Samples per initial count (fas)");

    std::string figure;
    std::string rep_out;
    std::uint64_t rep_seed = 0;
    CLI::App* rep = app.add_subcommand("reproduce", "Rebuild a canned figure dataset");
    rep->add_option("figure", figure, "fig1-left | fig1-right")->required();
    rep->add_option("--out", rep_out, "Output directory")->required();
    rep->add_option("--seed", rep_seed, "Random seed");

    CLI::App* orc = app.add_subcommand("oracle", "Analytic reference outputs");
    orc->require_subcommand(1);
    double od_psi = -1.0, od_lambda = 1.0, od_sigma = 1.0;
    double od_gmin = -10.0, od_gmax = 10.0;
    std::size_t od_grid = 201;
    std::string od_out;
    CLI::App* od = orc->add_subcommand("density", "Scale-mixture density by quadrature");
    od->add_option("--psi", od_psi, "Variance exponent");
    od->add_option("--lambda", od_lambda, "Exponential rate of the unit-count law");
    od->add_option("--sigma", od_sigma, "Base volatility");
    od->add_option("--gmin", od_gmin, "Grid start");
    od->add_option("--gmax", od_gmax, "Grid end");
    od->add_option("--grid", od_grid, "Grid points");
    od->add_option("--out", od_out, "CSV path (default: stdout)");

    std::uint32_t op_total = 10;
    bool op_list = false;
    CLI::App* op = orc->add_subcommand("partitions", "Exact partition counts");
    op->add_option("--total", op_total, "Integer to partition")->required();
    op->add_flag("--list", op_list, "List all partitions (total <= 60)");

    double oe_mu = 0.0, oe_alpha = 0.0, oe_b = -1.0;
    CLI::App* oe = orc->add_subcommand("exponents", "Predicted scaling exponents");
    oe->add_option("--mu", oe_mu, "Unit-size / replication tail exponent");
    oe->add_option("--alpha", oe_alpha, "Unit-count tail exponent");
    oe->add_option("--b", oe_b, "Founding probability");

    CLI::App* st = app.add_subcommand("selftest", "Run the built-in invariant checks");

    std::vector<std::string> mutable_args(args);
    std::reverse(mutable_args.begin(), mutable_args.end());
    try {
        app.parse(mutable_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 1;
    }

    try {
        if (sim->parsed()) {
            ExperimentConfig cfg;
            cfg.model = build_model(opt);
            cfg.analyses = build_analyses(opt);
            cfg.output_dir = opt.out_dir;
            cfg.seed = opt.seed;
            run_experiment(cfg);
            std::cout << "wrote " << cfg.analyses.size() << " analysis file(s) to "
                      << opt.out_dir << "\n";
        } else if (rep->parsed()) {
            Figure f;
            if (figure == "fig1-left") f = Figure::fig1_left;
            else if (figure == "fig1-right") f = Figure::fig1_right;
            else throw parameter_error("unknown figure '" + figure + "'");
            reproduce(f, rep_out, rep_seed);
            std::cout << "wrote " << figure << " dataset to " << rep_out << "\n";
        } else if (orc->parsed()) {
            if (od->parsed()) {
                oracle::MixtureSpec spec;
                spec.k_law = oracle::KLaw::exponential;
                spec.lambda = od_lambda;
                spec.psi = od_psi;
                spec.sigma = od_sigma;
                if (!(od_gmax > od_gmin) || od_grid < 2)
                    throw parameter_error("oracle density: invalid grid");
                std::vector<double> grid(od_grid);
                for (std::size_t i = 0; i < od_grid; ++i)
                    grid[i] = od_gmin + (od_gmax - od_gmin) * static_cast<double>(i) /
                                            static_cast<double>(od_grid - 1);
                const auto curve = oracle::mixture_density_numeric(spec, grid);
                std::ostream* out = &std::cout;
                std::ofstream file;
                if (!od_out.empty()) {
                    file.open(od_out, std::ios::binary);
                    if (!file) throw io_error("cannot open " + od_out);
                    out = &file;
                }
                *out << "g,density\n";
                char buf[96];
                for (const auto& pt : curve.points) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pt.x, pt.density);
                    *out << buf;
                }
            } else if (op->parsed()) {
                if (op_list) {
                    for (const auto& part : oracle::enumerate_partitions(op_total)) {
                        for (std::size_t i = 0; i < part.parts.size(); ++i)
                            std::cout << (i ? "+" : "") << part.parts[i];
                        std::cout << "\n";
                    }
                }
                if (op_total <= randkit::kPartitionCeiling)
                    std::cout << "p(" << op_total << ") = "
                              << randkit::shared_partition_table().count(op_total).to_string()
                              << "\n";
            } else if (oe->parsed()) {
                oracle::ScalingParams params;
                if (oe->count("--mu")) params.mu = oe_mu;
                if (oe->count("--alpha")) params.alpha = oe_alpha;
                if (oe->count("--b")) params.b = oe_b;
                for (const auto& e : oracle::scaling_exponent_table(params)) {
                    std::printf("%-40s % .6f%s\n", e.name.c_str(), e.value,
                                e.at_regime_boundary ? "  [regime boundary]" : "");
                }
            }
        } else if (st->parsed()) {
            return run_selftest();
        }
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

namespace {

int run_selftest() {
    int failures = 0;
    const auto check = [&failures](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "ok" : "FAIL", name);
        if (!ok) ++failures;
    };
    using randkit::RngStream;

    {
        const auto a = randkit::sample_pareto({1.0, 1.4}, 1000, RngStream{42, 7});
        const auto b = randkit::sample_pareto({1.0, 1.4}, 1000, RngStream{42, 7});
        check("samplers are pure functions of (params, n, stream)", a == b);
        const auto c = randkit::sample_pareto({1.0, 1.4}, 1000, RngStream{42, 8});
        check("distinct stream ids yield distinct sequences", a != c);
        std::size_t above = 0;
        const double median = std::pow(2.0, 1.0 / 1.4);
        for (double x : a)
            if (x > median) ++above;
        check("pareto median matches the closed-form quantile",
              std::abs(static_cast<double>(above) / 1000.0 - 0.5) < 0.06);
    }
    {
        models::FirmComposition comp{{1.0, 2.0, 3.0}};
        const double h = models::herfindahl(comp);
        check("herfindahl of (1,2,3) equals 14/36", std::abs(h - 14.0 / 36.0) < 1e-15);
        check("effective units times herfindahl is one",
              std::abs(stats::effective_units(comp) * h - 1.0) < 1e-12);
    }
    {
        const auto part = randkit::sample_uniform_partition(100, RngStream{1, 2});
        std::uint64_t sum = 0;
        for (auto p : part.parts) sum += p;
        check("partition parts sum to the total", sum == 100);
        check("partition parts are non-increasing",
              std::is_sorted(part.parts.begin(), part.parts.end(),
                             std::greater<>()));
    }
    {
        const auto x = randkit::sample_pareto({1.0, 2.0}, 20000, RngStream{3, 3});
        std::vector<double> scaled(x);
        for (double& v : scaled) v *= 137.0;
        const auto f1 = stats::hill_estimator(x, 500);
        const auto f2 = stats::hill_estimator(scaled, 500);
        check("hill estimate is scale invariant",
              std::abs(f1.exponent - f2.exponent) < 1e-12);
    }
    {
        const double q = oracle::mixture_density_point(
            {oracle::KLaw::exponential, 1.0, 1.0, -1.0, 1.0}, 0.7);
        const double c = oracle::closed_form_density_psi_minus1(1.0, 1.0, 0.7);
        check("mixture quadrature matches the closed form", std::abs(q - c) < 1e-9);
    }
    {
        models::WyartBouchaudConfig cfg;
        cfg.n_firms = 2000;
        cfg.seed = 11;
        const auto p1 = models::simulate_wyart_bouchaud(cfg);
        const auto p2 = models::simulate_wyart_bouchaud(cfg);
        bool equal = p1.records.size() == p2.records.size();
        for (std::size_t i = 0; equal && i < p1.records.size(); ++i)
            equal = p1.records[i].log_growth == p2.records[i].log_growth &&
                    p1.records[i].size_before == p2.records[i].size_before;
        check("simulations are deterministic given identical config and seed", equal);
    }
    std::printf(failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

} // namespace growth::harness

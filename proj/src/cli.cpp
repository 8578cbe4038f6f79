#include "ifcx/cli.hpp"

#include "ifcx/baseline.hpp"
#include "ifcx/channel.hpp"
#include "ifcx/lower_bound.hpp"
#include "ifcx/montecarlo.hpp"
#include "ifcx/exponent.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

namespace ifcx::cli {

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Vec parse_comp(const std::string& s, const std::string& name) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument(name + ": cannot parse '" + tok + "' as a probability");
        }
    }
    Vec q(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) q[static_cast<int>(i)] = vals[i];
    validate_composition(q, name);
    return q;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("IFCX_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

struct RateScale {
    bool bits = false;
    double in(double v) const { return bits ? v * kLn2 : v; }    // flag units -> nats
    double out(double v) const { return bits ? v / kLn2 : v; }   // nats -> flag units
};

struct SweepRow {
    double var = 0.0;
    double e_r1 = 0.0, e_b1 = 0.0, e_1 = 0.0, e_12 = 0.0, e_1g2 = 0.0, lb = 0.0;
    double rho = 0.0, lambda = 0.0;
    std::string branch;
};

void write_rows(std::ostream& os, const std::string& format, const std::string& var_name,
                const std::vector<SweepRow>& rows, const RateScale& sc) {
    if (format == "csv") {
        os << var_name << ",E_R1,E_B1,E1,E12,E1g2,LB,rho_star,lambda_star,branch\n";
        for (const auto& r : rows) {
            os << fmt(sc.out(r.var)) << ',' << fmt(sc.out(r.e_r1)) << ',' << fmt(sc.out(r.e_b1))
               << ',' << fmt(sc.out(r.e_1)) << ',' << fmt(sc.out(r.e_12)) << ','
               << fmt(sc.out(r.e_1g2)) << ',' << fmt(sc.out(r.lb)) << ',' << fmt(r.rho) << ','
               << fmt(r.lambda) << ',' << r.branch << '\n';
        }
        return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << "  {\"" << var_name << "\": " << fmt(sc.out(r.var))
           << ", \"E_R1\": " << fmt(sc.out(r.e_r1)) << ", \"E_B1\": " << fmt(sc.out(r.e_b1))
           << ", \"E1\": " << fmt(sc.out(r.e_1)) << ", \"E12\": " << fmt(sc.out(r.e_12))
           << ", \"E1g2\": " << fmt(sc.out(r.e_1g2)) << ", \"LB\": " << fmt(sc.out(r.lb))
           << ", \"rho_star\": " << fmt(r.rho) << ", \"lambda_star\": " << fmt(r.lambda)
           << ", \"branch\": \"" << r.branch << "\"}" << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "]\n";
}

struct CommonArgs {
    std::string channel_path;
    double r1 = 0.0, r2 = 0.0;
    std::string q1_str, q2_str;
    bool bits = false;
};

void add_rate_opts(CLI::App* cmd, CommonArgs& a, bool need_comps) {
    cmd->add_option("--channel", a.channel_path, "channel JSON file")->required();
    cmd->add_option("--r1", a.r1, "rate of user 1")->required();
    cmd->add_option("--r2", a.r2, "rate of user 2")->required();
    if (need_comps) {
        cmd->add_option("--q1", a.q1_str, "composition Q1, comma separated")->required();
        cmd->add_option("--q2", a.q2_str, "composition Q2, comma separated")->required();
    }
    cmd->add_flag("--bits", a.bits, "rates given and printed in bits instead of nats");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"ifcx: error exponents of optimum decoding for the two-user interference channel"};
    app.require_subcommand(1);

    CommonArgs a;
    std::uint64_t seed = default_seed();
    int jobs = 1;

    auto* validate = app.add_subcommand("validate", "validate a channel file");
    std::string validate_path;
    validate->add_option("--channel", validate_path, "channel JSON file")->required();

    auto* exponent = app.add_subcommand("exponent", "optimum-decoding exponent E_R,1");
    add_rate_opts(exponent, a, true);

    auto* exponent2 = app.add_subcommand("exponent2", "user-2 exponent E_R,2 (swapped channel)");
    add_rate_opts(exponent2, a, true);

    auto* baseline = app.add_subcommand("baseline", "suboptimal-decoder exponents");
    add_rate_opts(baseline, a, true);

    auto* bound = app.add_subcommand("bound", "analytic lower bound on E*_R,1");
    add_rate_opts(bound, a, true);
    int theta_grid = 41;
    bound->add_option("--theta-grid", theta_grid, "theta grid size (default 41)");

    auto* region = app.add_subcommand("region", "positivity-region membership");
    add_rate_opts(region, a, true);

    auto* sweep = app.add_subcommand("sweep", "rate sweep producing plot-ready rows");
    std::string variable = "r1", comps_mode, fmt_name = "csv", out_path = "-";
    double start = 0.0, stop = 0.0, sweep_step = 0.0, fixed_rate = 0.0, grid_step = 0.05;
    sweep->add_option("--channel", a.channel_path, "channel JSON file")->required();
    sweep->add_option("--variable", variable, "r1 or r2")
        ->check(CLI::IsMember({"r1", "r2"}));
    sweep->add_option("--start", start, "sweep start")->required();
    sweep->add_option("--stop", stop, "sweep stop")->required();
    sweep->add_option("--step", sweep_step, "sweep step")->required();
    sweep->add_option("--fixed-rate", fixed_rate, "value of the non-swept rate")->required();
    sweep->add_option("--q1", a.q1_str, "composition Q1");
    sweep->add_option("--q2", a.q2_str, "composition Q2");
    sweep->add_option("--comps", comps_mode, "'maxmin' to optimize compositions per row");
    sweep->add_option("--grid-step", grid_step, "composition grid step for --comps maxmin");
    sweep->add_option("--format", fmt_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--output", out_path, "output file path ('-' for stdout)");
    sweep->add_option("--jobs", jobs, "parallel rows");
    sweep->add_flag("--bits", a.bits, "rates given and printed in bits");

    auto* maxmin = app.add_subcommand("maxmin", "best compositions for min{E_R,1, E_R,2}");
    add_rate_opts(maxmin, a, false);
    maxmin->add_option("--grid-step", grid_step, "composition grid step (default 0.05)");
    maxmin->add_option("--jobs", jobs, "parallel grid points");

    auto* simulate = app.add_subcommand("simulate", "small-blocklength Monte Carlo validator");
    int sim_n = 8, sim_m1 = 2, sim_m2 = 2, sim_trials = 10000;
    simulate->add_option("--channel", a.channel_path, "channel JSON file")->required();
    simulate->add_option("--n", sim_n, "blocklength")->required();
    simulate->add_option("--m1", sim_m1, "codewords for user 1")->required();
    simulate->add_option("--m2", sim_m2, "codewords for user 2")->required();
    simulate->add_option("--q1", a.q1_str, "composition Q1")->required();
    simulate->add_option("--q2", a.q2_str, "composition Q2")->required();
    simulate->add_option("--trials", sim_trials, "Monte Carlo trials");
    simulate->add_option("--seed", seed, "random seed (default IFCX_SEED or 0)");
    simulate->add_option("--jobs", jobs, "parallel trial blocks");

    std::vector<const char*> argv;
    argv.push_back("ifcx");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const RateScale sc{a.bits};
    try {
        if (validate->parsed()) {
            const ChannelSpec ch = load_channel(validate_path);
            std::cout << "ok: " << ch.x1_size << "x" << ch.x2_size << " inputs, |Y1|="
                      << ch.y1_size << (ch.q2 ? ", |Y2|=" + std::to_string(ch.y2_size) : "")
                      << "\n";
            return 0;
        }

        const ChannelSpec ch = load_channel(a.channel_path);
        const RatePair rates{sc.in(a.r1), sc.in(a.r2)};

        if (exponent->parsed() || exponent2->parsed()) {
            const CompositionPair comps{parse_comp(a.q1_str, "Q1"), parse_comp(a.q2_str, "Q2")};
            const ExponentResult r = exponent->parsed() ? exponent_optimized(rates, comps, ch)
                                                        : exponent_user2(rates, comps, ch);
            std::cout << (exponent->parsed() ? "E_R1 " : "E_R2 ") << fmt(sc.out(r.value))
                      << "\nrho_star " << fmt(r.best_params.rho) << "\nlambda_star "
                      << fmt(r.best_params.lambda) << "\nbranch " << branch_name(r.branch)
                      << "\n";
            return 0;
        }
        if (baseline->parsed()) {
            const CompositionPair comps{parse_comp(a.q1_str, "Q1"), parse_comp(a.q2_str, "Q2")};
            SolveOptions opts;
            opts.seed = seed;
            const BaselineResult r = baseline_exponents(rates.r1, rates.r2, comps, ch, opts);
            std::cout << "E_B1 " << fmt(sc.out(r.e_b1)) << "\nE1 " << fmt(sc.out(r.e_1))
                      << "\nE12 " << fmt(sc.out(r.e_12)) << "\nE1g2 "
                      << fmt(sc.out(r.e_1_given_2)) << "\n";
            return 0;
        }
        if (bound->parsed()) {
            const CompositionPair comps{parse_comp(a.q1_str, "Q1"), parse_comp(a.q2_str, "Q2")};
            SolveOptions opts;
            opts.seed = seed;
            const double lb = lower_bound(rates, comps, ch, theta_grid, opts);
            std::cout << "LB " << fmt(sc.out(lb)) << "\n";
            return 0;
        }
        if (region->parsed()) {
            const CompositionPair comps{parse_comp(a.q1_str, "Q1"), parse_comp(a.q2_str, "Q2")};
            const RegionVerdict v = region_contains(rates, comps, ch);
            std::cout << (v.inside ? "inside" : "outside") << "\nmargin_union "
                      << fmt(sc.out(v.margin_union)) << "\nmargin_cond "
                      << fmt(sc.out(v.margin_cond)) << "\n";
            return 0;
        }
        if (maxmin->parsed()) {
            const MaxminResult r = maxmin_over_comps(rates, ch, grid_step, jobs);
            std::cout << "Q1";
            for (int i = 0; i < r.comps.q1_comp.size(); ++i)
                std::cout << ' ' << fmt(r.comps.q1_comp[i]);
            std::cout << "\nQ2";
            for (int i = 0; i < r.comps.q2_comp.size(); ++i)
                std::cout << ' ' << fmt(r.comps.q2_comp[i]);
            std::cout << "\nmin_exponent " << fmt(sc.out(r.value)) << "\nE_R1 "
                      << fmt(sc.out(r.e_r1)) << "\nE_R2 " << fmt(sc.out(r.e_r2)) << "\n";
            return 0;
        }
        if (simulate->parsed()) {
            CodebookConfig cfg;
            cfg.n = sim_n;
            cfg.m1 = sim_m1;
            cfg.m2 = sim_m2;
            cfg.comps = {quantize_composition(parse_comp(a.q1_str, "Q1"), sim_n),
                         quantize_composition(parse_comp(a.q2_str, "Q2"), sim_n)};
            cfg.seed = seed;
            cfg.trials = sim_trials;
            const ErrorEstimate est = estimate_error(cfg, ch, jobs);
            std::cout << "errors " << est.errors << "\ntrials " << est.trials << "\nrate "
                      << fmt(est.rate) << "\nci95_halfwidth " << fmt(est.ci_halfwidth) << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            if (sweep_step <= 0.0) throw std::invalid_argument("--step must be positive");
            if (stop < start) throw std::invalid_argument("--start must not exceed --stop");
            const bool use_maxmin = comps_mode == "maxmin";
            if (!use_maxmin && (a.q1_str.empty() || a.q2_str.empty())) {
                throw std::invalid_argument("sweep needs --q1/--q2 or --comps maxmin");
            }
            std::optional<CompositionPair> fixed_comps;
            if (!use_maxmin) {
                fixed_comps = CompositionPair{parse_comp(a.q1_str, "Q1"),
                                              parse_comp(a.q2_str, "Q2")};
            }
            const double fx = sc.in(fixed_rate);
            std::vector<double> points;
            for (double v = sc.in(start); v <= sc.in(stop) + 1e-12; v += sc.in(sweep_step)) {
                points.push_back(v);
            }
            std::vector<SweepRow> rows(points.size());
            const auto compute_row = [&](std::size_t i) {
                const double v = points[i];
                const RatePair rp = (variable == "r1") ? RatePair{v, fx} : RatePair{fx, v};
                CompositionPair comps;
                SweepRow row;
                row.var = v;
                if (use_maxmin) {
                    const MaxminResult mm = maxmin_over_comps(rp, ch, grid_step, 1);
                    comps = mm.comps;
                    row.e_r1 = mm.e_r1;
                    const ExponentResult er = exponent_optimized(rp, comps, ch);
                    row.rho = er.best_params.rho;
                    row.lambda = er.best_params.lambda;
                    row.branch = branch_name(er.branch);
                } else {
                    comps = *fixed_comps;
                    const ExponentResult er = exponent_optimized(rp, comps, ch);
                    row.e_r1 = er.value;
                    row.rho = er.best_params.rho;
                    row.lambda = er.best_params.lambda;
                    row.branch = branch_name(er.branch);
                }
                SolveOptions solve_opts;
                solve_opts.seed = seed;
                const BaselineResult b = baseline_exponents(rp.r1, rp.r2, comps, ch, solve_opts);
                row.e_b1 = b.e_b1;
                row.e_1 = b.e_1;
                row.e_12 = b.e_12;
                row.e_1g2 = b.e_1_given_2;
                row.lb = lower_bound(rp, comps, ch, 41, solve_opts);
                rows[i] = row;
            };
            if (jobs <= 1) {
                for (std::size_t i = 0; i < points.size(); ++i) compute_row(i);
            } else {
                std::atomic<std::size_t> next{0};
                std::vector<std::future<void>> futs;
                for (int w = 0; w < jobs; ++w) {
                    futs.push_back(std::async(std::launch::async, [&]() {
                        std::size_t i;
                        while ((i = next.fetch_add(1)) < points.size()) compute_row(i);
                    }));
                }
                for (auto& f : futs) f.get();
            }
            if (out_path == "-") {
                write_rows(std::cout, fmt_name, variable, rows, sc);
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open output file: " + out_path);
                write_rows(out, fmt_name, variable, rows, sc);
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace ifcx::cli

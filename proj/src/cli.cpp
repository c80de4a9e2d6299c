#include "ratchet/cli.hpp"

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratchet/csv_io.hpp"
#include "ratchet/deterministic.hpp"
#include "ratchet/diffusion1d.hpp"
#include "ratchet/experiments.hpp"
#include "ratchet/forward_sim.hpp"
#include "ratchet/numerics.hpp"
#include "ratchet/parallel.hpp"
#include "ratchet/params.hpp"
#include "ratchet/profile.hpp"
#include "ratchet/svg.hpp"
#include "ratchet/version.hpp"

namespace ratchet {

namespace {

// Common parameter flags: N, lambda, and exactly one of s / gamma.
struct ParamFlags {
    long long n = 0;
    double lambda = 0.0;
    double s = -1.0;
    double gamma = -1.0;

    void add_to(CLI::App* cmd, bool need_selection = true) {
        cmd->add_option("--n", n, "population size N")->required();
        cmd->add_option("--lambda", lambda, "mutation rate per genome per generation")
            ->required();
        auto* so = cmd->add_option("--s", s, "selection coefficient per mutation");
        auto* go = cmd->add_option("--gamma", gamma,
                                   "target gamma; s derived via s = lambda/(gamma ln(N lambda))");
        so->excludes(go);
        go->excludes(so);
        if (need_selection) {
            // exactly one resolution path
            cmd->callback([this, cmd] {
                if (cmd->count("--s") == 0 && cmd->count("--gamma") == 0)
                    throw CLI::ValidationError("params", "provide exactly one of --s / --gamma");
            });
        }
    }

    RatchetParams resolve() const {
        RatchetParams p;
        p.N = n;
        p.lambda = lambda;
        p.s = (gamma > 0.0) ? solve_s_for_gamma(n, lambda, gamma) : s;
        p.validate();
        return p;
    }
};

// Expands `--config file` into `--key value` tokens inserted right after the
// subcommand name. Explicit flags come later in argv and win (options use a
// take-last policy). File format: flat `key = value` lines, # comments.
std::vector<std::string> expand_config_args(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string path;
        std::size_t erase_count = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            erase_count = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            erase_count = 1;
        }
        if (erase_count == 0) continue;

        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
        std::vector<std::string> injected;
        std::string line;
        while (std::getline(in, line)) {
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return (a == std::string::npos) ? std::string()
                                                : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw CLI::ValidationError("--config", "malformed line: " + line);
            injected.push_back("--" + key);
            injected.push_back(value);
        }
        args.erase(args.begin() + static_cast<long>(i),
                   args.begin() + static_cast<long>(i + erase_count));
        // insert after the subcommand token so the keys bind to it
        const std::size_t at = std::min<std::size_t>(2, args.size());
        args.insert(args.begin() + static_cast<long>(at), injected.begin(),
                    injected.end());
        break;
    }
    return args;
}

Regime parse_regime(const std::string& name, double a_value) {
    if (name == "smalla" || name == "small-A" || name == "small") return Regime::small_a();
    if (name == "a1" || name == "A=1") return Regime::a_equals_one();
    if (name == "largea" || name == "large-A" || name == "large") return Regime::large_a();
    if (name == "generic") return Regime::generic(a_value);
    throw CLI::ValidationError("--regime", "unknown regime: " + name);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw CLI::ValidationError("list", "empty numeric list: " + text);
    return out;
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << " = " << value << "\n";
}
void print_kv(const std::string& key, double value) {
    std::cout << key << " = " << format_g17(value) << "\n";
}

int cmd_derive(const ParamFlags& pf) {
    const RatchetParams p = pf.resolve();
    const DerivedParams d = derive_params(p);
    print_kv("n", static_cast<double>(p.N));
    print_kv("lambda", p.lambda);
    print_kv("s", p.s);
    print_kv("theta", d.theta);
    print_kv("pi0", d.pi0);
    print_kv("n0", d.n0);
    print_kv("gamma", d.gamma);
    if (d.tau_defined)
        print_kv("tau", d.tau);
    else
        print_kv("tau", "undefined");
    print_kv("haigh_click_time", haigh_click_time(p));
    print_kv("coeff_small_a",
             mean_reversion_coefficient(Regime::small_a(), p.N, p.lambda, p.s));
    print_kv("coeff_a1",
             mean_reversion_coefficient(Regime::a_equals_one(), p.N, p.lambda, p.s));
    print_kv("coeff_large_a",
             mean_reversion_coefficient(Regime::large_a(), p.N, p.lambda, p.s));
    return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
    CLI::App app{"Muller's ratchet simulation and numerical-analysis toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    // config-file tokens are injected ahead of explicit flags; last one wins
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::uint64_t seed = 1;
    unsigned workers = default_workers();
    std::string out_prefix = "run";
    std::string config_doc;  // consumed by expand_config_args before parsing

    auto add_seed = [&seed](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "64-bit RNG seed")->envname("RATCHET_SEED");
    };
    auto add_out = [&out_prefix](CLI::App* cmd) {
        cmd->add_option("--out", out_prefix, "output path prefix");
    };
    auto add_workers = [&workers](CLI::App* cmd) {
        cmd->add_option("--workers", workers, "worker threads for independent jobs");
    };
    auto add_config = [&config_doc](CLI::App* cmd) {
        cmd->add_option("--config", config_doc,
                        "flat `key = value` config file; flags override");
    };

    // derive
    auto* derive = app.add_subcommand("derive", "print derived parameters");
    ParamFlags derive_pf;
    derive_pf.add_to(derive);
    add_config(derive);

    // wf
    auto* wf = app.add_subcommand("wf", "discrete Wright-Fisher ratchet run");
    ParamFlags wf_pf;
    wf_pf.add_to(wf);
    long long wf_generations = 1000000;
    RecorderConfig wf_rc;
    wf->add_option("--generations", wf_generations, "measured generations");
    wf->add_option("--scatter-interval", wf_rc.scatter_interval,
                   "generations between (Y0,M1) samples");
    wf->add_option("--trace-interval", wf_rc.trace_interval,
                   "generations between fitness samples");
    add_seed(wf);
    add_out(wf);
    add_config(wf);

    // fv
    auto* fv = app.add_subcommand("fv", "Fleming-Viot diffusion run");
    ParamFlags fv_pf;
    fv_pf.add_to(fv);
    double fv_generations = 100000;
    double fv_dt = 0.1;
    RecorderConfig fv_rc;
    fv->add_option("--generations", fv_generations, "measured generations");
    fv->add_option("--dt", fv_dt, "Euler step in generations");
    fv->add_option("--scatter-interval", fv_rc.scatter_interval,
                   "generations between (Y0,M1) samples");
    add_seed(fv);
    add_out(fv);
    add_config(fv);

    // det
    auto* det = app.add_subcommand("det", "deterministic infinite-population flow");
    ParamFlags det_pf;
    det_pf.add_to(det);
    std::string det_start = "poisson";
    double det_mu = 0.0;
    double det_y0 = 0.0;
    double det_t = 0.0;
    double det_dt = 0.0;
    std::string det_method = "closed";
    det->add_option("--start", det_start, "initial profile: poisson | pitilde | ppa");
    det->add_option("--mu", det_mu, "Poisson start mean (default theta)");
    det->add_option("--y0", det_y0, "PPA best-class frequency");
    det->add_option("--t", det_t, "evolution time in generations")->required();
    det->add_option("--method", det_method, "closed | ode");
    det->add_option("--dt", det_dt, "ODE step (method=ode)");
    add_out(det);
    add_config(det);

    // diff1d
    auto* diff1d = app.add_subcommand("diff1d", "one-dimensional best-class diffusion");
    ParamFlags diff_pf;
    diff_pf.add_to(diff1d);
    std::string diff_regime = "a1";
    double diff_a = 1.0;
    double diff_horizon = 1000000.0;
    double diff_dt = 0.1;
    diff1d->add_option("--regime", diff_regime, "smalla | a1 | largea | generic");
    diff1d->add_option("--a", diff_a, "relaxation multiple A (regime=generic)");
    diff1d->add_option("--horizon", diff_horizon, "simulated generations");
    diff1d->add_option("--dt", diff_dt, "Euler step in generations");
    add_seed(diff1d);
    add_out(diff1d);
    add_config(diff1d);

    // green
    auto* green = app.add_subcommand("green", "Green function / occupation density");
    ParamFlags green_pf;
    green_pf.add_to(green);
    std::string green_regime = "a1";
    double green_a = 1.0;
    double green_x0 = -1.0;
    double green_ymax = -1.0;
    std::size_t green_bins = 200;
    green->add_option("--regime", green_regime, "smalla | a1 | largea | generic");
    green->add_option("--a", green_a, "relaxation multiple A (regime=generic)");
    green->add_option("--x0", green_x0, "start point (default regime entry point)");
    green->add_option("--ymax", green_ymax, "reflecting cap (default min(1, 8 pi0))");
    green->add_option("--bins", green_bins, "grid resolution");
    add_out(green);
    add_config(green);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "power-law sweep over lambda");
    long long sweep_n = 10000;
    double sweep_gamma = 0.7;
    std::string sweep_lambdas = "1e-3,3e-3,1e-2,3e-2,1e-1";
    long long sweep_generations = 1000000;
    std::string sweep_simulator = "wf";
    sweep->add_option("--n", sweep_n, "population size N")->required();
    sweep->add_option("--gamma", sweep_gamma, "fixed gamma across the sweep")->required();
    sweep->add_option("--lambdas", sweep_lambdas, "comma-separated lambda list");
    sweep->add_option("--generations", sweep_generations, "generations per point");
    sweep->add_option("--simulator", sweep_simulator, "wf | fv | smalla | a1 | largea");
    add_seed(sweep);
    add_out(sweep);
    add_workers(sweep);
    add_config(sweep);

    // rate-vs-gamma
    auto* rvg = app.add_subcommand("rate-vs-gamma", "click rate across gamma values");
    long long rvg_n = 10000;
    double rvg_nlambda = 100.0;
    std::string rvg_gammas = "0.3,0.4,0.5,0.6,0.7";
    long long rvg_generations = 1000000;
    rvg->add_option("--n", rvg_n, "population size N")->required();
    rvg->add_option("--nlambda", rvg_nlambda, "fixed N*lambda")->required();
    rvg->add_option("--gammas", rvg_gammas, "comma-separated gamma list");
    rvg->add_option("--generations", rvg_generations, "generations per point");
    add_seed(rvg);
    add_out(rvg);
    add_workers(rvg);
    add_config(rvg);

    // phase
    auto* phase = app.add_subcommand("phase", "(Y0, M1) phase-plane regression");
    ParamFlags phase_pf;
    phase_pf.add_to(phase);
    long long phase_generations = 1000000;
    phase->add_option("--generations", phase_generations, "measured generations");
    add_seed(phase);
    add_out(phase);
    add_config(phase);

    // occupation
    auto* occ = app.add_subcommand("occupation", "occupation density comparison");
    ParamFlags occ_pf;
    occ_pf.add_to(occ);
    std::string occ_regime = "a1";
    double occ_a = 1.0;
    long long occ_clicks = 10000;
    double occ_dt = 0.1;
    long long occ_wf_generations = 0;
    occ->add_option("--regime", occ_regime, "smalla | a1 | largea | generic");
    occ->add_option("--a", occ_a, "relaxation multiple A (regime=generic)");
    occ->add_option("--clicks", occ_clicks, "diffusion clicks to accumulate");
    occ->add_option("--dt", occ_dt, "Euler step");
    occ->add_option("--wf-generations", occ_wf_generations,
                    "also compare a Wright-Fisher run of this many generations");
    add_seed(occ);
    add_out(occ);
    add_workers(occ);
    add_config(occ);

    // click-hist
    auto* chist = app.add_subcommand("click-hist", "new-best-class frequency at clicks");
    ParamFlags chist_pf;
    chist_pf.add_to(chist);
    long long chist_clicks = 300;
    long long chist_max_generations = 0;
    chist->add_option("--clicks", chist_clicks, "target click count");
    chist->add_option("--max-generations", chist_max_generations,
                      "generation budget (0 = auto from Haigh's formula)");
    add_seed(chist);
    add_out(chist);
    add_config(chist);

    // plot
    auto* plot = app.add_subcommand("plot", "render a CSV to a minimal SVG chart");
    std::string plot_in, plot_out = "plot.svg", plot_x, plot_y, plot_title;
    bool plot_loglog = false, plot_scatter = false;
    plot->add_option("--in", plot_in, "input CSV")->required();
    plot->add_option("--x", plot_x, "x column name")->required();
    plot->add_option("--y", plot_y, "comma-separated y column names")->required();
    plot->add_option("--svg", plot_out, "output SVG path");
    plot->add_option("--title", plot_title, "chart title");
    plot->add_flag("--log-log", plot_loglog, "log10 scale on both axes");
    plot->add_flag("--scatter", plot_scatter, "points instead of lines");

    std::vector<std::string> expanded;
    std::vector<const char*> cargv;
    try {
        expanded = expand_config_args(argc, argv);
        cargv.reserve(expanded.size());
        for (const auto& a : expanded) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*derive) return cmd_derive(derive_pf);

        if (*wf) {
            const RunStats stats = wf_run(wf_pf.resolve(), wf_generations, wf_rc, seed);
            stats.write_artifacts(out_prefix);
            print_kv("clicks", static_cast<double>(stats.click_count()));
            print_kv("rate_per_n_generations", stats.rate_per_n_generations());
            print_kv("artifacts", out_prefix + ".{clicks,hist,scatter}.csv, " +
                                      out_prefix + ".manifest");
            return 0;
        }

        if (*fv) {
            const RunStats stats =
                fv_run(fv_pf.resolve(), fv_generations, fv_dt, fv_rc, seed);
            stats.write_artifacts(out_prefix);
            print_kv("clicks", static_cast<double>(stats.click_count()));
            print_kv("rate_per_n_generations", stats.rate_per_n_generations());
            return 0;
        }

        if (*det) {
            const RatchetParams p = det_pf.resolve();
            const double theta = p.lambda / p.s;
            const std::size_t K =
                std::max<std::size_t>(poisson_window(theta, kProfileTailTol) + 8, 48);
            TypeProfile start;
            if (det_start == "poisson")
                start = poisson_profile(det_mu > 0.0 ? det_mu : theta, K);
            else if (det_start == "pitilde")
                start = pi_tilde(theta, K);
            else if (det_start == "ppa")
                start = ppa(det_y0, theta, K);
            else
                throw CLI::ValidationError("--start", "unknown start profile " + det_start);

            TypeProfile evolved;
            if (det_method == "closed") {
                evolved = evolve_closed(start, p, det_t);
            } else if (det_method == "ode") {
                const double dt =
                    det_dt > 0.0
                        ? det_dt
                        : 0.05 / std::max(p.s * static_cast<double>(start.size()), p.lambda);
                evolved = evolve_ode(start, p, det_t, dt);
            } else {
                throw CLI::ValidationError("--method", "unknown method " + det_method);
            }

            const std::string csv_path = out_prefix + ".profile.csv";
            write_profile_csv(evolved, csv_path);
            Manifest m;
            m.set_common(p, 0);
            m.set("start", det_start);
            m.set("t", det_t);
            m.set("method", det_method);
            const ClosedObservables obs = closed_observables(start, p, det_t);
            m.set("x0_t", obs.x0);
            m.set("m1_t", obs.m1);
            const CumulantVector cv = cumulants_of(evolved, 4);
            for (std::size_t i = 0; i < cv.kappa.size(); ++i)
                m.set("kappa_" + std::to_string(i), cv.kappa[i]);
            m.write(out_prefix + ".manifest");
            print_kv("x0_t", obs.x0);
            print_kv("m1_t", obs.m1);
            print_kv("profile_csv", csv_path);
            return 0;
        }

        if (*diff1d) {
            const RatchetParams p = diff_pf.resolve();
            const Regime regime = parse_regime(diff_regime, diff_a);
            const auto clicks = simulate_clicks(regime, p, diff_horizon, diff_dt, seed);

            Manifest m;
            m.set_common(p, seed);
            m.set("regime", regime.name());
            m.set("dt", diff_dt);
            m.set("horizon", diff_horizon);
            m.set("clicks", static_cast<long long>(clicks.size()));
            if (clicks.size() >= 2) {
                std::vector<double> gaps;
                for (std::size_t i = 1; i < clicks.size(); ++i)
                    gaps.push_back(clicks[i].time - clicks[i - 1].time);
                m.set("mean_interclick_time", summarize(gaps).mean);
            }
            const std::string ref = out_prefix + ".manifest";
            m.write(ref);
            CsvWriter w(out_prefix + ".clicks.csv", ref);
            w.header({"time", "clicks_at_event", "new_best_freq"});
            for (const auto& c : clicks) {
                w.field(c.time).field(c.clicks_at_event).field(c.new_best_freq);
                w.end_row();
            }
            print_kv("clicks", static_cast<double>(clicks.size()));
            return 0;
        }

        if (*green) {
            const RatchetParams p = green_pf.resolve();
            DiffusionSpec spec = make_spec(parse_regime(green_regime, green_a), p);
            if (green_ymax > 0.0) spec.y_max = green_ymax;
            const double x0 = green_x0 > 0.0 ? green_x0 : entry_point(spec);
            std::vector<double> grid(green_bins);
            for (std::size_t i = 0; i < green_bins; ++i)
                grid[i] = spec.y_max * (static_cast<double>(i) + 0.5) /
                          static_cast<double>(green_bins);
            const GreenResult res = green_function(spec, x0, grid);

            Manifest m;
            m.set_common(p, 0);
            m.set("regime", spec.regime.name());
            m.set("x0", x0);
            m.set("y_max", spec.y_max);
            m.set("expected_click_time", res.expected_click_time);
            const std::string ref = out_prefix + ".manifest";
            m.write(ref);
            CsvWriter w(out_prefix + ".green.csv", ref);
            w.header({"y", "green_value", "occupation_density"});
            for (std::size_t i = 0; i < res.y.size(); ++i) {
                w.field(res.y[i]).field(res.green[i]).field(res.occupation_density[i]);
                w.end_row();
            }
            print_kv("expected_click_time", res.expected_click_time);
            return 0;
        }

        if (*sweep) {
            const SweepResult res =
                power_law_sweep(sweep_n, sweep_gamma, parse_list(sweep_lambdas),
                                sweep_generations, sweep_simulator, seed, workers);
            res.write_artifacts(out_prefix);
            print_kv("slope", res.slope);
            print_kv("slope_se", res.slope_se);
            return 0;
        }

        if (*rvg) {
            const RateScan res = rate_vs_gamma(rvg_n, rvg_nlambda, parse_list(rvg_gammas),
                                               rvg_generations, seed, workers);
            res.write_artifacts(out_prefix);
            for (const auto& pt : res.points)
                print_kv("rate_gamma_" + format_g17(pt.gamma), pt.rate);
            return 0;
        }

        if (*phase) {
            const PhasePlaneResult res =
                phase_plane(phase_pf.resolve(), phase_generations, seed);
            res.write_artifacts(out_prefix);
            print_kv("slope", res.fit.slope);
            print_kv("best_regime", res.best_regime);
            return 0;
        }

        if (*occ) {
            const OccupationResult res = occupation_compare(
                occ_pf.resolve(), parse_regime(occ_regime, occ_a), occ_clicks, occ_dt,
                seed, occ_wf_generations > 0, occ_wf_generations, workers);
            res.write_artifacts(out_prefix);
            print_kv("l1_diffusion_green", res.l1_diffusion_green);
            if (res.has_wf) print_kv("l1_wf_green", res.l1_wf_green);
            if (!res.reached_target) print_kv("partial_result", "true");
            return 0;
        }

        if (*chist) {
            const ClickEntryResult res = click_entry_histogram(
                chist_pf.resolve(), chist_clicks, seed, chist_max_generations);
            res.write_artifacts(out_prefix);
            print_kv("clicks", static_cast<double>(res.clicks));
            print_kv("mode", res.mode);
            return 0;
        }

        if (*plot) {
            const CsvTable table = read_csv(plot_in);
            const std::vector<double> xs = table.column(plot_x);
            std::vector<PlotSeries> series;
            std::istringstream ys(plot_y);
            std::string col;
            while (std::getline(ys, col, ',')) {
                if (col.empty()) continue;
                PlotSeries s;
                s.label = col;
                s.x = xs;
                s.y = table.column(col);
                s.scatter = plot_scatter;
                series.push_back(std::move(s));
            }
            PlotOptions opt;
            opt.title = plot_title;
            opt.xlabel = plot_x;
            opt.ylabel = plot_y;
            opt.loglog = plot_loglog;
            write_svg_plot(plot_out, series, opt);
            print_kv("svg", plot_out);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace ratchet

#include "qwalk/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk/cli/output.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/quantum_map.hpp"
#include "qwalk/resonant.hpp"

namespace qwalk::cli {

SweepAxis parse_sweep_axis(std::string_view text) {
    if (text == "k") return SweepAxis::kKick;
    if (text == "T") return SweepAxis::kSteps;
    if (text == "fwhm") return SweepAxis::kFwhm;
    throw ConfigError("unknown sweep axis '" + std::string(text) + "' (expected k, T or fwhm)");
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::kKick: return "k";
    case SweepAxis::kSteps: return "T";
    case SweepAxis::kFwhm: return "fwhm";
    }
    return "k";
}

Route analytic_route(const RunConfig& run) {
    if (run.route != Route::kSimulation) return run.route;
    const bool resonant = run.walk.quasimomentum == 0.0 && run.ensemble.fwhm == 0.0;
    return resonant ? Route::kResonant : Route::kNearResonant;
}

MomentumDistribution compute_distribution(const RunConfig& run, Route route, unsigned threads) {
    run.validate();
    run.validate_route(route);
    if (run.ensemble.fwhm > 0.0) {
        EnsembleSpec spec = run.ensemble;
        spec.route = route;
        return averaged_distribution(run.walk, run.ratchet, spec, threads);
    }
    switch (route) {
    case Route::kSimulation: return walk(run.walk, run.ratchet);
    case Route::kResonant: return resonant_distribution(run.walk, run.ratchet);
    case Route::kNearResonant: return near_resonant_distribution(run.walk, run.ratchet, run.path_sum);
    }
    throw ConfigError("unknown route");
}

bool warn_validity(const MomentumDistribution& dist, std::ostream& err) {
    if (dist.route != Route::kNearResonant || !(dist.validity_product > kValidityLimit)) return false;
    err << "warning: beta*T = " << dist.validity_product << " exceeds " << kValidityLimit
        << "; the near-resonant path sum is outside its validity range\n";
    return true;
}

CompareResult compare_distributions(const MomentumDistribution& a, const MomentumDistribution& b,
                                    const CompareSpec& spec) {
    CompareResult r;
    r.max_norm = max_abs_difference(a, b);
    r.l1 = l1_distance(a, b);
    r.max_norm_excluding_initial = max_abs_difference(a, b, kInitialClasses);
    r.l1_excluding_initial = l1_distance(a, b, kInitialClasses);
    r.argmax_n = argmax_abs_difference(a, b);
    const double gate = spec.exclude_initial ? r.max_norm_excluding_initial : r.max_norm;
    r.passed = gate <= spec.tolerance;
    return r;
}

namespace {

std::string route_file_stem(Route route) {
    return std::string(to_string(route));
}

/// Canonical short label of a sweep value for file names.
std::string value_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void summarize(std::ostream& out, const MomentumDistribution& d) {
    out << to_string(d.route) << ": k=" << d.config.kick_strength << " T=" << d.config.steps
        << " beta=" << d.config.quasimomentum << " sum=" << format_number(d.sum());
    if (std::abs(d.sum() - 1.0) <= kLeakageTolerance) {
        out << " mean=" << mean_momentum(d) << " std=" << std_dev(d);
    }
    out << '\n';
}

void emit(const std::string& command, const RunConfig& run, const MomentumDistribution& dist,
          const std::string& stem, std::ostream& out) {
    const auto csv = run.output.directory / (stem + ".csv");
    write_file(csv, distribution_csv(command, run, dist));
    out << "wrote " << csv.string() << '\n';
    if (run.output.plot) {
        const auto svg = run.output.directory / (stem + ".svg");
        write_file(svg, render_svg(stem, {{std::string(to_string(dist.route)), &dist}},
                                   provenance_header(command, dist.route, run, "")));
        out << "wrote " << svg.string() << '\n';
    }
}

ExitCode run_single(const std::string& command, const RunConfig& run, Route route, std::ostream& out,
                    std::ostream& err) {
    const auto dist = compute_distribution(run, route, run.threads);
    warn_validity(dist, err);
    summarize(out, dist);
    emit(command, run, dist, route_file_stem(route), out);
    return ExitCode::kOk;
}

}  // namespace

ExitCode cmd_simulate(const RunConfig& run, std::ostream& out, std::ostream& err) {
    return run_single("simulate", run, Route::kSimulation, out, err);
}

ExitCode cmd_analytic(const RunConfig& run, std::ostream& out, std::ostream& err) {
    return run_single("analytic", run, analytic_route(run), out, err);
}

ExitCode cmd_compare(const RunConfig& run, std::ostream& out, std::ostream& err) {
    const Route primary = run.route == run.compare.reference ? analytic_route(run) : run.route;
    const Route reference = run.compare.reference;
    if (primary == reference) throw ConfigError("compare needs two different routes");
    const auto a = compute_distribution(run, primary, run.threads);
    const auto b = compute_distribution(run, reference, run.threads);
    warn_validity(a, err);
    warn_validity(b, err);
    emit("compare", run, a, route_file_stem(primary), out);
    emit("compare", run, b, route_file_stem(reference), out);
    const CompareResult r = compare_distributions(a, b, run.compare);

    nlohmann::json report;
    report["routes"] = {std::string(to_string(primary)), std::string(to_string(reference))};
    report["max_norm"] = r.max_norm;
    report["l1"] = r.l1;
    report["max_norm_excluding_initial"] = r.max_norm_excluding_initial;
    report["l1_excluding_initial"] = r.l1_excluding_initial;
    report["largest_deviation_at"] = r.argmax_n;
    report["tolerance"] = run.compare.tolerance;
    report["exclude_initial"] = run.compare.exclude_initial;
    report["passed"] = r.passed;
    report["config"] = nlohmann::json::parse(to_json_string(run));
    const auto path = run.output.directory / "compare_report.json";
    write_file(path, report.dump(2) + "\n");

    out << to_string(primary) << " vs " << to_string(reference) << '\n';
    out << "  max |dP|            " << format_number(r.max_norm) << " (at n = " << r.argmax_n << ")\n";
    out << "  L1                  " << format_number(r.l1) << '\n';
    out << "  max |dP|, n not 0,1 " << format_number(r.max_norm_excluding_initial) << '\n';
    out << "  L1, n not 0,1       " << format_number(r.l1_excluding_initial) << '\n';
    out << (r.passed ? "PASS" : "FAIL") << " at tolerance " << run.compare.tolerance
        << (run.compare.exclude_initial ? " (initial classes excluded)" : "") << '\n';
    out << "wrote " << path.string() << '\n';
    if (run.output.plot) {
        const auto svg = run.output.directory / "compare.svg";
        write_file(svg, render_svg("compare", {{std::string(to_string(primary)), &a}, {std::string(to_string(reference)), &b}},
                                   provenance_header("compare", primary, run, "")));
        out << "wrote " << svg.string() << '\n';
    }
    return r.passed ? ExitCode::kOk : ExitCode::kComparisonFailed;
}

ExitCode cmd_sweep(const RunConfig& run, SweepAxis axis, const std::vector<double>& values, std::ostream& out,
                   std::ostream& err) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<RunConfig> points;
    for (double v : values) {
        RunConfig p = run;
        switch (axis) {
        case SweepAxis::kKick: p.walk.kick_strength = v; break;
        case SweepAxis::kSteps:
            if (v != std::floor(v) || v < 0.0 || v > 1e6) throw ConfigError("step counts must be non-negative integers");
            p.walk.steps = static_cast<int>(v);
            break;
        case SweepAxis::kFwhm: p.ensemble.fwhm = v; break;
        }
        p.validate();
        points.push_back(std::move(p));
    }
    const Route route = run.route;
    std::vector<MomentumDistribution> dists(points.size());
    // Points run in parallel; each ensemble runs on one thread.
    parallel_for(points.size(), [&](std::size_t i) { dists[i] = compute_distribution(points[i], route, 1); },
                 run.threads);

    std::ostringstream summary;
    summary << provenance_header("sweep " + std::string(to_string(axis)), route, run);
    summary << "value,sum,mean,std_dev,peaks,leakage,validity_product\n";
    std::vector<double> xs, stds;
    bool normalised = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& d = dists[i];
        warn_validity(d, err);
        const std::string label = value_label(values[i]);
        emit("sweep", points[i], d, route_file_stem(route) + "_" + std::string(to_string(axis)) + "_" + label, out);
        const bool norm = std::abs(d.sum() - 1.0) <= kLeakageTolerance;
        normalised = normalised && norm;
        summary << label << ',' << format_number(d.sum()) << ',';
        if (norm) {
            const double sd = std_dev(d);
            summary << format_number(mean_momentum(d)) << ',' << format_number(sd);
            xs.push_back(values[i]);
            stds.push_back(sd);
        } else {
            summary << ',';
        }
        summary << ',';
        const auto peaks = peak_positions(d);
        for (std::size_t j = 0; j < peaks.size(); ++j) summary << (j ? " " : "") << peaks[j];
        summary << ',' << format_number(d.leakage) << ',' << format_number(d.validity_product) << '\n';
    }
    if (axis == SweepAxis::kSteps && normalised && xs.size() >= 4) {
        const auto fit = fit_line(xs, stds);
        summary << "# ballistic_fit: slope=" << format_number(fit.slope) << " intercept=" << format_number(fit.intercept)
                << " r_squared=" << format_number(fit.r_squared) << '\n';
        out << "ballistic fit of std_dev vs T: slope " << fit.slope << ", intercept " << fit.intercept << ", r^2 "
            << fit.r_squared << '\n';
    }
    const auto path = run.output.directory / "sweep_summary.csv";
    write_file(path, summary.str());
    out << "wrote " << path.string() << '\n';
    if (run.output.plot) {
        std::vector<PlotSeries> series;
        for (std::size_t i = 0; i < dists.size(); ++i) {
            series.push_back({std::string(to_string(axis)) + " = " + value_label(values[i]), &dists[i]});
        }
        const auto svg = run.output.directory / "sweep.svg";
        write_file(svg, render_svg("sweep over " + std::string(to_string(axis)), series,
                                   provenance_header("sweep", route, run, "")));
        out << "wrote " << svg.string() << '\n';
    }
    return ExitCode::kOk;
}

namespace {

template <class T>
std::vector<T> split_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        T v{};
        if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string("empty ") + what);
    return out;
}

/// Flags shared by every subcommand; each overrides the config file.
struct Overrides {
    std::string config;
    std::optional<std::string> route, ratchet, weights, free_mode, out_dir, reference, path_sum;
    std::optional<double> k, beta, fwhm, tolerance, phase, period;
    std::optional<int> steps, samples, cutoff;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool plot = false;
    bool exclude_initial = false;

    void attach(CLI::App& app) {
        app.add_option("--config", config, "JSON run configuration (docs/config.md)");
        app.add_option("--route", route, "simulate | resonant | near-resonant");
        app.add_option("--reference", reference, "second route for compare (default simulate)");
        app.add_option("--k", k, "kick strength");
        app.add_option("--steps", steps, "number of steps T");
        app.add_option("--beta", beta, "quasimomentum");
        app.add_option("--period", period, "kick period tau (default 4 pi)");
        app.add_option("--fwhm", fwhm, "FWHM of a Gaussian beta ensemble (0 = single beta)");
        app.add_option("--samples", samples, "ensemble size");
        app.add_option("--seed", seed, "ensemble seed");
        app.add_option("--ratchet", ratchet, "initial momentum classes, e.g. \"0,1\"");
        app.add_option("--weights", weights, "level weights b1,b2 with b1^2 + b2^2 = 1");
        app.add_option("--phase", phase, "ratchet phase phi (amplitude e^{i s phi})");
        app.add_option("--free-mode", free_mode, "simplified | full");
        app.add_option("--cutoff", cutoff, "momentum grid half-width (0 = automatic)");
        app.add_option("--path-sum", path_sum, "auto | enumerate | grouped");
        app.add_option("--threads", threads, "worker threads (0 = all cores)");
        app.add_option("--out", out_dir, "output directory");
        app.add_flag("--plot", plot, "also write SVG plots");
        app.add_option("--tolerance", tolerance, "compare pass/fail tolerance on max |dP|");
        app.add_flag("--exclude-initial", exclude_initial, "compare outside the initial classes {0, 1}");
    }

    RunConfig resolve() const {
        RunConfig run = config.empty() ? RunConfig{} : load_run_config(config);
        if (route) run.route = parse_route(*route);
        if (reference) run.compare.reference = parse_route(*reference);
        if (k) run.walk.kick_strength = *k;
        if (steps) run.walk.steps = *steps;
        if (beta) run.walk.quasimomentum = *beta;
        if (period) run.walk.kick_period = *period;
        if (fwhm) run.ensemble.fwhm = *fwhm;
        if (samples) run.ensemble.n_samples = *samples;
        if (seed) run.ensemble.seed = *seed;
        if (ratchet) run.ratchet.classes = split_list<int>(*ratchet, "ratchet classes");
        if (weights) {
            const auto w = split_list<double>(*weights, "level weights");
            if (w.size() != 2) throw ConfigError("--weights takes exactly two numbers");
            run.ratchet.level_weights = {w[0], w[1]};
        }
        if (phase) run.ratchet.relative_phase = *phase;
        if (free_mode) run.walk.free_evolution = parse_free_evolution(*free_mode);
        if (cutoff) run.walk.momentum_cutoff = *cutoff;
        if (path_sum) run.path_sum = parse_path_sum_mode(*path_sum);
        if (threads) run.threads = *threads;
        if (out_dir) run.output.directory = *out_dir;
        if (plot) run.output.plot = true;
        if (tolerance) run.compare.tolerance = *tolerance;
        if (exclude_initial) run.compare.exclude_initial = true;
        run.validate();
        return run;
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-level quantum walk in momentum space of a kicked rotor", "qwalk"};
    app.require_subcommand(1);
    Overrides sim_o, ana_o, cmp_o, swp_o;
    auto* sim = app.add_subcommand("simulate", "propagate the walk numerically (optionally ensemble-averaged)");
    auto* ana = app.add_subcommand("analytic", "evaluate the resonant formula or the near-resonant path sum");
    auto* cmp = app.add_subcommand("compare", "compare --route against --reference and write compare_report.json");
    auto* swp = app.add_subcommand("sweep", "vary one parameter and tabulate the results");
    sim_o.attach(*sim);
    ana_o.attach(*ana);
    cmp_o.attach(*cmp);
    swp_o.attach(*swp);
    std::string axis;
    std::string values;
    swp->add_option("--axis", axis, "k | T | fwhm")->required();
    swp->add_option("--values", values, "comma-separated values")->required();

    std::vector<std::string> argv_store{"qwalk"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::Success&) {
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kConfig);
    }

    try {
        ExitCode code = ExitCode::kOk;
        if (sim->parsed()) code = cmd_simulate(sim_o.resolve(), out, err);
        if (ana->parsed()) code = cmd_analytic(ana_o.resolve(), out, err);
        if (cmp->parsed()) code = cmd_compare(cmp_o.resolve(), out, err);
        if (swp->parsed()) {
            code = cmd_sweep(swp_o.resolve(), parse_sweep_axis(axis), split_list<double>(values, "sweep values"),
                             out, err);
        }
        return static_cast<int>(code);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kConfig);
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kNumeric);
    }
}

}  // namespace qwalk::cli

#include "qwalk/cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qwalk::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const json& obj, const char* key, T& into, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        into = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "' in " + where);
    }
}

template <class Parse>
void read_enum(const json& obj, const char* key, Parse parse, const std::string& where) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) throw ConfigError(std::string("'") + key + "' in " + where + " must be a string");
    parse(obj.at(key).get<std::string>());
}

}  // namespace

std::string_view to_string(PathSumMode mode) {
    switch (mode) {
    case PathSumMode::kAuto: return "auto";
    case PathSumMode::kEnumerate: return "enumerate";
    case PathSumMode::kGrouped: return "grouped";
    }
    return "auto";
}

PathSumMode parse_path_sum_mode(std::string_view text) {
    if (text == "auto") return PathSumMode::kAuto;
    if (text == "enumerate") return PathSumMode::kEnumerate;
    if (text == "grouped") return PathSumMode::kGrouped;
    throw ConfigError("unknown path-sum mode '" + std::string(text) + "'");
}

void RunConfig::validate() const {
    walk.validate();
    ratchet.validate();
    if (!(ensemble.fwhm >= 0.0) || !std::isfinite(ensemble.fwhm)) throw ConfigError("fwhm must be finite and >= 0");
    if (ensemble.n_samples < 1) throw ConfigError("ensemble needs at least one sample");
    if (!(compare.tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
    validate_route(route);
}

void RunConfig::validate_route(Route r) const {
    if (r == Route::kResonant) {
        if (walk.quasimomentum != 0.0) throw ConfigError("the resonant route needs beta = 0");
        if (ensemble.fwhm > 0.0) throw ConfigError("the resonant route cannot average a beta ensemble");
        if (walk.steps < 1) throw ConfigError("the resonant route needs at least one step");
    }
    if (r == Route::kNearResonant) {
        if (walk.steps < 1 || walk.steps > kMaxEnumeratedSteps) {
            throw ConfigError("the near-resonant route needs 1 <= steps <= " + std::to_string(kMaxEnumeratedSteps));
        }
    }
}

RunConfig parse_run_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc,
                   {"route", "kick_strength", "kick_period", "steps", "quasimomentum", "momentum_cutoff",
                    "free_evolution", "path_sum", "threads", "ratchet", "ensemble", "compare", "output"},
                   "config");
    RunConfig run;
    read_enum(doc, "route", [&](const std::string& s) { run.route = parse_route(s); }, "config");
    read(doc, "kick_strength", run.walk.kick_strength, "config");
    read(doc, "kick_period", run.walk.kick_period, "config");
    read(doc, "steps", run.walk.steps, "config");
    read(doc, "quasimomentum", run.walk.quasimomentum, "config");
    read(doc, "momentum_cutoff", run.walk.momentum_cutoff, "config");
    read_enum(doc, "free_evolution", [&](const std::string& s) { run.walk.free_evolution = parse_free_evolution(s); },
              "config");
    read_enum(doc, "path_sum", [&](const std::string& s) { run.path_sum = parse_path_sum_mode(s); }, "config");
    read(doc, "threads", run.threads, "config");

    if (doc.contains("ratchet")) {
        const json& r = doc.at("ratchet");
        reject_unknown(r, {"classes", "level_weights", "relative_phase"}, "ratchet");
        read(r, "classes", run.ratchet.classes, "ratchet");
        read(r, "level_weights", run.ratchet.level_weights, "ratchet");
        read(r, "relative_phase", run.ratchet.relative_phase, "ratchet");
    }
    if (doc.contains("ensemble")) {
        const json& e = doc.at("ensemble");
        reject_unknown(e, {"fwhm", "samples", "seed"}, "ensemble");
        read(e, "fwhm", run.ensemble.fwhm, "ensemble");
        read(e, "samples", run.ensemble.n_samples, "ensemble");
        read(e, "seed", run.ensemble.seed, "ensemble");
    }
    if (doc.contains("compare")) {
        const json& c = doc.at("compare");
        reject_unknown(c, {"reference", "tolerance", "exclude_initial"}, "compare");
        read_enum(c, "reference", [&](const std::string& s) { run.compare.reference = parse_route(s); }, "compare");
        read(c, "tolerance", run.compare.tolerance, "compare");
        read(c, "exclude_initial", run.compare.exclude_initial, "compare");
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, {"directory", "plot"}, "output");
        std::string dir = run.output.directory.string();
        read(o, "directory", dir, "output");
        run.output.directory = dir;
        read(o, "plot", run.output.plot, "output");
    }
    return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str());
}

std::string to_json_string(const RunConfig& run) {
    json doc;
    doc["route"] = std::string(to_string(run.route));
    doc["kick_strength"] = run.walk.kick_strength;
    doc["kick_period"] = run.walk.kick_period;
    doc["steps"] = run.walk.steps;
    doc["quasimomentum"] = run.walk.quasimomentum;
    doc["momentum_cutoff"] = run.walk.momentum_cutoff;
    doc["free_evolution"] = std::string(to_string(run.walk.free_evolution));
    doc["path_sum"] = std::string(to_string(run.path_sum));
    doc["threads"] = run.threads;
    doc["ratchet"] = {{"classes", run.ratchet.classes},
                      {"level_weights", run.ratchet.level_weights},
                      {"relative_phase", run.ratchet.relative_phase}};
    doc["ensemble"] = {{"fwhm", run.ensemble.fwhm}, {"samples", run.ensemble.n_samples}, {"seed", run.ensemble.seed}};
    doc["compare"] = {{"reference", std::string(to_string(run.compare.reference))},
                      {"tolerance", run.compare.tolerance},
                      {"exclude_initial", run.compare.exclude_initial}};
    doc["output"] = {{"directory", run.output.directory.string()}, {"plot", run.output.plot}};
    return doc.dump();
}

}  // namespace qwalk::cli

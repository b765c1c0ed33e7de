// Command-line front end: fields, simulate, validate, reproduce.
//
// Exit codes: 0 success, 1 validation or physics failure, 2 usage or config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chiralsg/config.hpp"
#include "chiralsg/ensemble.hpp"
#include "chiralsg/output.hpp"
#include "chiralsg/validation.hpp"

namespace fs = std::filesystem;
using namespace chiralsg;

namespace {

constexpr int kOk = 0;
constexpr int kPhysicsFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
    bool json = false;
    std::string fault;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "TOML configuration file");
    cmd->add_option("--preset", o.preset, "parameter preset (fig3abc, fig3def)");
    cmd->add_option("--seed", o.seed, "ensemble RNG seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores (results do not depend on it)");
}

RunConfig resolve(const CommonOptions& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.preset.empty()) {
        const Preset p = parse_preset(o.preset);
        apply_preset(cfg, p);
        cfg.preset = p;
    }
    if (o.seed) cfg.ensemble.seed = *o.seed;
    if (!o.out.empty()) cfg.outputDir = o.out;
    if (auto problems = config_violations(cfg); !problems.empty()) throw ConfigError(std::move(problems));
    if (!cfg.physical.large_detuning_regime()) {
        std::cerr << "warning: parameters are outside the large-detuning regime; "
                     "the effective two-level reduction may be inaccurate\n";
    }
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw UsageError("failed writing " + path.string());
}

void emit_fields(const RunConfig& cfg, const NormalizedParams& params) {
    std::ostringstream csv;
    write_fields_csv(csv, params, cfg.grid, cfg.model.convention);
    write_file(cfg.outputDir / "fields.csv", csv.str());
}

void emit_simulation(const RunConfig& cfg, const NormalizedParams& params, unsigned threads) {
    const ExperimentResult result = run_experiment(params, cfg.ensemble, cfg.integrator, cfg.model, threads);
    std::ostringstream csv;
    write_snapshots_csv(csv, result, params);
    write_file(cfg.outputDir / "snapshots.csv", csv.str());
    write_file(cfg.outputDir / "stats.json", stats_json(cfg, params, result).dump(2) + "\n");
    emit_fields(cfg, params);
}

int cmd_fields(const CommonOptions& o) {
    const RunConfig cfg = resolve(o);
    emit_fields(cfg, normalize(cfg.physical));
    std::cout << "wrote " << (cfg.outputDir / "fields.csv").string() << '\n';
    return kOk;
}

int cmd_simulate(const CommonOptions& o) {
    const RunConfig cfg = resolve(o);
    emit_simulation(cfg, normalize(cfg.physical), o.threads);
    std::cout << "wrote snapshots.csv, stats.json, fields.csv to " << cfg.outputDir.string() << '\n';
    return kOk;
}

int cmd_reproduce(const CommonOptions& o) {
    if (!o.preset.empty()) throw UsageError("reproduce runs both presets; --preset is not accepted");
    for (Preset p : {Preset::Fig3abc, Preset::Fig3def}) {
        CommonOptions sub = o;
        sub.preset = std::string(to_string(p));
        RunConfig cfg = resolve(sub);
        cfg.outputDir /= std::string(to_string(p));
        emit_simulation(cfg, normalize(cfg.physical), o.threads);
        std::cout << "wrote " << cfg.outputDir.string() << '\n';
    }
    return kOk;
}

int cmd_validate(const CommonOptions& o) {
    ValidationOptions vo;
    vo.threads = o.threads;
    if (!o.fault.empty()) {
        if (o.fault != "gauge-sign") throw UsageError("unknown fault '" + o.fault + "'");
        vo.injectVectorPotentialSignError = true;
    }
    std::optional<RunConfig> cfg;
    if (!o.config.empty() || !o.preset.empty()) {
        cfg = resolve(o);
        vo.params = normalize(cfg->physical);
    }
    const auto checks = run_validation(vo);
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        std::printf("%s  %-20s measured=%-13.6g %s %-10g %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.measured, c.comparison.c_str(), c.tolerance, c.detail.c_str());
    }
    if (o.json) {
        const fs::path dir = !o.out.empty() ? fs::path(o.out) : cfg ? cfg->outputDir : fs::path("out");
        write_file(dir / "validate.json", to_json(checks).dump(2) + "\n");
    }
    std::printf("%s\n", all ? "all checks passed" : "validation FAILED");
    return all ? kOk : kPhysicsFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chirality- and spin-dependent optical gauge fields and Stern-Gerlach trajectories"};
    app.require_subcommand(1);

    CommonOptions fields_opt, sim_opt, val_opt, rep_opt;
    auto* fields = app.add_subcommand("fields", "tabulate A, V, B and theta on an x grid (fields.csv)");
    add_common(fields, fields_opt);
    auto* simulate = app.add_subcommand("simulate", "integrate the ensemble (snapshots.csv, stats.json, fields.csv)");
    add_common(simulate, sim_opt);
    auto* validate = app.add_subcommand("validate", "run the self-check suite");
    add_common(validate, val_opt);
    validate->add_flag("--json", val_opt.json, "also write validate.json");
    validate->add_option("--inject-fault", val_opt.fault)->group("");  // mutation-test hook
    auto* reproduce = app.add_subcommand("reproduce", "simulate both presets into <out>/fig3abc and <out>/fig3def");
    add_common(reproduce, rep_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageError;
    }

    try {
        if (*fields) return cmd_fields(fields_opt);
        if (*simulate) return cmd_simulate(sim_opt);
        if (*validate) return cmd_validate(val_opt);
        if (*reproduce) return cmd_reproduce(rep_opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << '\n';
        return kPhysicsFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPhysicsFailure;
    }
    return kUsageError;
}

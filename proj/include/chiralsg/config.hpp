#pragma once

// Run configuration: TOML ingestion with a strict schema, defaults and presets.
//
//   preset = "fig3abc"            # optional; overrides the physical parameters
//   scalarConvention = "paper"    # or "standard"
//   [physical]   wavelength massFactor detuning rabi12 rabi13 rabi23
//                sigma12 sigma13 sigma23 beamOffset gravity gaugeFields
//   [ensemble]   particlesPerSpecies sigmaR seed species pairedSampling
//   [integrator] dt tFinal snapshotTimes
//   [output]     dir fieldsXMin fieldsXMax fieldsPoints

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "dynamics.hpp"
#include "ensemble.hpp"
#include "gauge.hpp"
#include "units.hpp"

namespace chiralsg {

enum class Preset { Fig3abc, Fig3def };

inline Preset parse_preset(std::string_view name) {
    if (name == "fig3abc") return Preset::Fig3abc;
    if (name == "fig3def") return Preset::Fig3def;
    throw ValidationError("preset", "unknown preset '" + std::string(name) + "' (expected fig3abc or fig3def)");
}

constexpr std::string_view to_string(Preset p) noexcept {
    return p == Preset::Fig3abc ? "fig3abc" : "fig3def";
}

/// Sampling grid for the field export.
struct FieldGrid {
    double xMin = -30.0;
    double xMax = 30.0;
    std::size_t points = 601;

    double at(std::size_t i) const {
        if (points == 1) return xMin;
        // weighted form: -30 + 0.1 * 1 comes out as -29.9 rather than -29.899999999999999
        const double n = static_cast<double>(points - 1);
        const double k = static_cast<double>(i);
        return (xMin * (n - k) + xMax * k) / n;
    }
};

struct RunConfig {
    PhysicalParams physical;
    EnsembleConfig ensemble;
    IntegratorConfig integrator;
    FieldModel model;
    std::filesystem::path outputDir = "out";
    std::optional<Preset> preset;
    FieldGrid grid;
};

/// All problems found while loading a configuration, reported together.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& p : v) out += "\n  " + p;
        return out;
    }
    std::vector<std::string> problems_;
};

/// Weak coupling: Omega12 = Omega13 Omega23 / Delta = 1e-6 Delta.
/// Strong coupling: the same relation at 1e-4 Delta. Shared: Delta = 1e10 rad/s,
/// lambda = 1 um, m = 100 m_p, sigma13 = sigma23 = 10, sigma12 = 7, offset 3, sigma_r = 3.
inline void apply_preset(RunConfig& cfg, Preset preset) {
    PhysicalParams& p = cfg.physical;
    p.wavelength = 1e-6;
    p.massFactor = 100.0;
    p.detuning = 1e10;
    const double pump = preset == Preset::Fig3abc ? 1e7 : 1e8;  // Omega13 = 1e-3 or 1e-2 Delta
    p.rabi13 = pump;
    p.rabi23 = pump;
    p.rabi12 = p.rabi13 * p.rabi23 / p.detuning;
    p.sigma12 = 7.0;
    p.sigma13 = 10.0;
    p.sigma23 = 10.0;
    p.beamOffset = 3.0;
    p.ensembleWidth = 3.0;
    cfg.ensemble.sigmaR = 3.0;
    cfg.preset = preset;
}

inline std::vector<std::string> config_violations(const RunConfig& cfg) {
    std::vector<std::string> out;
    auto add = [&](const auto& list) {
        for (const auto& [field, msg] : list) out.push_back(field + ": " + msg);
    };
    add(cfg.physical.violations());
    add(cfg.ensemble.violations());
    add(cfg.integrator.violations());
    if (!(std::isfinite(cfg.grid.xMin) && std::isfinite(cfg.grid.xMax) && cfg.grid.xMax >= cfg.grid.xMin))
        out.push_back("output.fieldsXMin/fieldsXMax: need finite xMin <= xMax");
    if (cfg.grid.points < 1) out.push_back("output.fieldsPoints: must be at least 1");
    return out;
}

namespace detail {

class TableReader {
public:
    TableReader(const toml::table& table, std::string prefix, std::vector<std::string>& problems)
        : table_(table), prefix_(std::move(prefix)), problems_(problems) {}

    void number(std::string_view key, double& target) {
        const toml::node* n = take(key);
        if (!n) return;
        if (auto v = n->value_exact<double>()) {
            target = *v;
        } else if (auto i = n->value_exact<std::int64_t>()) {
            target = static_cast<double>(*i);
        } else {
            problems_.push_back(path(key) + ": expected a number");
        }
    }

    void integer(std::string_view key, std::int64_t& target) {
        const toml::node* n = take(key);
        if (!n) return;
        if (auto i = n->value_exact<std::int64_t>()) {
            target = *i;
        } else {
            problems_.push_back(path(key) + ": expected an integer");
        }
    }

    void boolean(std::string_view key, bool& target) {
        const toml::node* n = take(key);
        if (!n) return;
        if (auto b = n->value_exact<bool>()) {
            target = *b;
        } else {
            problems_.push_back(path(key) + ": expected true or false");
        }
    }

    bool string(std::string_view key, std::string& target) {
        const toml::node* n = take(key);
        if (!n) return false;
        if (auto s = n->value_exact<std::string>()) {
            target = *s;
            return true;
        }
        problems_.push_back(path(key) + ": expected a string");
        return false;
    }

    bool number_array(std::string_view key, std::vector<double>& target) {
        const toml::node* n = take(key);
        if (!n) return false;
        const toml::array* arr = n->as_array();
        if (!arr) {
            problems_.push_back(path(key) + ": expected an array of numbers");
            return false;
        }
        std::vector<double> values;
        for (const auto& el : *arr) {
            if (auto v = el.value_exact<double>()) {
                values.push_back(*v);
            } else if (auto i = el.value_exact<std::int64_t>()) {
                values.push_back(static_cast<double>(*i));
            } else {
                problems_.push_back(path(key) + ": expected an array of numbers");
                return false;
            }
        }
        target = std::move(values);
        return true;
    }

    bool string_array(std::string_view key, std::vector<std::string>& target) {
        const toml::node* n = take(key);
        if (!n) return false;
        const toml::array* arr = n->as_array();
        if (!arr) {
            problems_.push_back(path(key) + ": expected an array of strings");
            return false;
        }
        std::vector<std::string> values;
        for (const auto& el : *arr) {
            auto s = el.value_exact<std::string>();
            if (!s) {
                problems_.push_back(path(key) + ": expected an array of strings");
                return false;
            }
            values.push_back(*s);
        }
        target = std::move(values);
        return true;
    }

    void expect_table(std::string_view key) { seen_.emplace_back(key); }

    /// Reports every key that no reader call consumed.
    void reject_unknown() {
        for (const auto& [k, v] : table_) {
            const std::string key(k.str());
            bool known = false;
            for (const auto& s : seen_) known = known || s == key;
            if (!known) problems_.push_back(path(key) + ": unknown key");
        }
    }

    std::string path(std::string_view key) const {
        return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
    }

private:
    const toml::node* take(std::string_view key) {
        seen_.emplace_back(key);
        return table_.get(key);
    }

    const toml::table& table_;
    std::string prefix_;
    std::vector<std::string>& problems_;
    std::vector<std::string> seen_;
};

}  // namespace detail

/// Parses configuration text. `source` only labels parse errors.
inline RunConfig parse_config(std::string_view text, std::string_view source = "config") {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& err) {
        std::ostringstream msg;
        msg << source << ":" << err.source().begin.line << ":" << err.source().begin.column << ": "
            << err.description();
        throw ConfigError({msg.str()});
    }

    RunConfig cfg;
    std::vector<std::string> problems;
    detail::TableReader top(root, "", problems);

    std::string text_value;
    if (top.string("preset", text_value)) {
        try {
            cfg.preset = parse_preset(text_value);
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    }
    if (top.string("scalarConvention", text_value)) {
        try {
            cfg.model.convention = parse_scalar_convention(text_value);
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    }

    auto section = [&](std::string_view name, auto&& body) {
        top.expect_table(name);
        const toml::node* n = root.get(name);
        if (!n) return;
        const toml::table* t = n->as_table();
        if (!t) {
            problems.push_back(std::string(name) + ": expected a table");
            return;
        }
        detail::TableReader r(*t, std::string(name), problems);
        body(r);
        r.reject_unknown();
    };

    section("physical", [&](detail::TableReader& r) {
        PhysicalParams& p = cfg.physical;
        r.number("wavelength", p.wavelength);
        r.number("massFactor", p.massFactor);
        r.number("detuning", p.detuning);
        r.number("rabi12", p.rabi12);
        r.number("rabi13", p.rabi13);
        r.number("rabi23", p.rabi23);
        r.number("sigma12", p.sigma12);
        r.number("sigma13", p.sigma13);
        r.number("sigma23", p.sigma23);
        r.number("beamOffset", p.beamOffset);
        r.number("gravity", p.gravity);
        r.boolean("gaugeFields", cfg.model.gaugeFields);
    });
    section("ensemble", [&](detail::TableReader& r) {
        EnsembleConfig& e = cfg.ensemble;
        std::int64_t count = static_cast<std::int64_t>(e.particlesPerSpecies);
        r.integer("particlesPerSpecies", count);
        if (count < 1) {
            problems.push_back("ensemble.particlesPerSpecies: must be at least 1");
        } else {
            e.particlesPerSpecies = static_cast<std::size_t>(count);
        }
        r.number("sigmaR", e.sigmaR);
        std::int64_t seed = static_cast<std::int64_t>(e.seed);
        r.integer("seed", seed);
        if (seed < 0) {
            problems.push_back("ensemble.seed: must be non-negative");
        } else {
            e.seed = static_cast<std::uint64_t>(seed);
        }
        std::vector<std::string> names;
        if (r.string_array("species", names)) {
            e.species.clear();
            for (const auto& name : names) {
                try {
                    e.species.push_back(parse_species(name));
                } catch (const ValidationError& err) {
                    problems.push_back(std::string("ensemble.") + err.what());
                }
            }
        }
        r.boolean("pairedSampling", e.pairedSampling);
    });
    section("integrator", [&](detail::TableReader& r) {
        r.number("dt", cfg.integrator.dt);
        r.number("tFinal", cfg.integrator.tFinal);
        r.number_array("snapshotTimes", cfg.integrator.snapshotTimes);
    });
    section("output", [&](detail::TableReader& r) {
        std::string dir;
        if (r.string("dir", dir)) cfg.outputDir = dir;
        r.number("fieldsXMin", cfg.grid.xMin);
        r.number("fieldsXMax", cfg.grid.xMax);
        std::int64_t points = static_cast<std::int64_t>(cfg.grid.points);
        r.integer("fieldsPoints", points);
        if (points < 1) {
            problems.push_back("output.fieldsPoints: must be at least 1");
        } else {
            cfg.grid.points = static_cast<std::size_t>(points);
        }
    });
    top.reject_unknown();

    // Values written in the file are checked even when a preset replaces them.
    cfg.physical.ensembleWidth = cfg.ensemble.sigmaR;
    for (auto& v : config_violations(cfg)) problems.push_back(std::move(v));
    if (cfg.preset) apply_preset(cfg, *cfg.preset);
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

}  // namespace chiralsg

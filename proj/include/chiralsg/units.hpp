#pragma once

// Species tags and the dimensionless unit system.
//
// Simulation units: hbar = 1, length = lambda (the 1-2 transition wavelength),
// mass = molecular mass. Hence time T0 = m lambda^2 / hbar, momentum hbar/lambda,
// energy hbar^2 / (m lambda^2), k12 = 2 pi and m = 1 exactly.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chiralsg {

namespace codata {
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double proton_mass = 1.67262192369e-27;  // kg
}  // namespace codata

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Invalid user-facing input. `field()` names the offending parameter.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Chirality { Left, Right };
enum class Spin { Up, Down };

/// Sign carried by the 1-2 coupling: Omega12^L = +Omega12, Omega12^R = -Omega12.
constexpr double chirality_sign(Chirality c) noexcept {
    return c == Chirality::Left ? 1.0 : -1.0;
}

constexpr Chirality mirrored(Chirality c) noexcept {
    return c == Chirality::Left ? Chirality::Right : Chirality::Left;
}

constexpr std::string_view to_string(Chirality c) noexcept {
    return c == Chirality::Left ? "L" : "R";
}

constexpr std::string_view to_string(Spin s) noexcept {
    return s == Spin::Up ? "up" : "down";
}

struct Species {
    Chirality chirality = Chirality::Left;
    Spin spin = Spin::Up;

    friend constexpr bool operator==(const Species&, const Species&) = default;
};

inline std::string species_name(const Species& s) {
    return std::string(to_string(s.chirality)) + "_" + std::string(to_string(s.spin));
}

inline constexpr std::array<Species, 4> all_species{{
    {Chirality::Left, Spin::Up},
    {Chirality::Left, Spin::Down},
    {Chirality::Right, Spin::Up},
    {Chirality::Right, Spin::Down},
}};

/// Accepts "L_up", "L_down", "R_up", "R_down" (case-sensitive).
inline Species parse_species(std::string_view name) {
    for (const auto& s : all_species) {
        if (species_name(s) == name) return s;
    }
    throw ValidationError("species", "unknown species '" + std::string(name) +
                                         "' (expected L_up, L_down, R_up or R_down)");
}

/// Inputs in laboratory units. Defaults are the weak-coupling parameter set
/// (Omega12 = Omega13 Omega23 / Delta = 1e-6 Delta).
struct PhysicalParams {
    double wavelength = 1e-6;      // m
    double massFactor = 100.0;     // proton masses
    double detuning = 1e10;        // rad/s
    double rabi12 = 1e4;           // rad/s
    double rabi13 = 1e7;           // rad/s
    double rabi23 = 1e7;           // rad/s
    double sigma12 = 7.0;          // wavelengths
    double sigma13 = 10.0;         // wavelengths
    double sigma23 = 10.0;         // wavelengths
    double beamOffset = 3.0;       // wavelengths
    double gravity = 9.8;          // m/s^2
    double ensembleWidth = 3.0;    // wavelengths

    /// Throws ValidationError naming the first offending field.
    void validate() const {
        for (const auto& msg : violations()) throw ValidationError(msg.first, msg.second);
    }

    /// All invariant violations as (field, message) pairs.
    std::vector<std::pair<std::string, std::string>> violations() const {
        std::vector<std::pair<std::string, std::string>> out;
        auto positive = [&](double v, const char* name) {
            if (!(std::isfinite(v) && v > 0.0)) out.emplace_back(name, "must be a finite positive number");
        };
        auto finite = [&](double v, const char* name) {
            if (!std::isfinite(v)) out.emplace_back(name, "must be finite");
        };
        positive(wavelength, "physical.wavelength");
        positive(massFactor, "physical.massFactor");
        if (!std::isfinite(detuning) || detuning == 0.0)
            out.emplace_back("physical.detuning", "must be finite and nonzero");
        finite(rabi12, "physical.rabi12");
        finite(rabi13, "physical.rabi13");
        finite(rabi23, "physical.rabi23");
        positive(sigma12, "physical.sigma12");
        positive(sigma13, "physical.sigma13");
        positive(sigma23, "physical.sigma23");
        finite(beamOffset, "physical.beamOffset");
        finite(gravity, "physical.gravity");
        positive(ensembleWidth, "ensemble.sigmaR");
        return out;
    }

    /// |Delta| >> |Omega13| ~ |Omega23| >> |Omega12|, each ratio at least 10.
    bool large_detuning_regime() const {
        const double d = std::abs(detuning);
        const double a13 = std::abs(rabi13);
        const double a23 = std::abs(rabi23);
        const double a12 = std::abs(rabi12);
        return d >= 10.0 * a13 && d >= 10.0 * a23 && a13 >= 10.0 * a12 && a23 >= 10.0 * a12;
    }
};

/// Parameters in simulation units. Only `timeUnit` and `lengthUnit` remember SI.
struct NormalizedParams {
    double k12 = two_pi;
    double k23 = two_pi;  // only k12 enters the dynamics; k13 = k12 + k23
    double mass = 1.0;
    double detuning = 1.0;
    double rabi12 = 0.0;
    double rabi13 = 0.0;
    double rabi23 = 0.0;
    double gravity = 0.0;
    double sigma12 = 1.0;
    double sigma13 = 1.0;
    double sigma23 = 1.0;
    double beamOffset = 0.0;
    double ensembleWidth = 1.0;
    double timeUnit = 1.0;    // seconds per time unit
    double lengthUnit = 1.0;  // metres per length unit

    double k13() const { return k12 + k23; }
    double time_unit_ms() const { return timeUnit * 1e3; }
};

inline NormalizedParams normalize(const PhysicalParams& p) {
    p.validate();
    const double massSI = p.massFactor * codata::proton_mass;
    const double lambda = p.wavelength;
    const double t0 = massSI * lambda * lambda / codata::hbar;

    NormalizedParams n;
    n.k12 = two_pi;
    n.k23 = two_pi;
    n.mass = 1.0;
    n.detuning = p.detuning * t0;
    n.rabi12 = p.rabi12 * t0;
    n.rabi13 = p.rabi13 * t0;
    n.rabi23 = p.rabi23 * t0;
    n.gravity = p.gravity * t0 * t0 / lambda;
    n.sigma12 = p.sigma12;
    n.sigma13 = p.sigma13;
    n.sigma23 = p.sigma23;
    n.beamOffset = p.beamOffset;
    n.ensembleWidth = p.ensembleWidth;
    n.timeUnit = t0;
    n.lengthUnit = lambda;
    return n;
}

inline PhysicalParams denormalize(const NormalizedParams& n) {
    const double t0 = n.timeUnit;
    const double lambda = n.lengthUnit;
    PhysicalParams p;
    p.wavelength = lambda;
    p.massFactor = t0 * codata::hbar / (lambda * lambda) / codata::proton_mass;
    p.detuning = n.detuning / t0;
    p.rabi12 = n.rabi12 / t0;
    p.rabi13 = n.rabi13 / t0;
    p.rabi23 = n.rabi23 / t0;
    p.gravity = n.gravity * lambda / (t0 * t0);
    p.sigma12 = n.sigma12;
    p.sigma13 = n.sigma13;
    p.sigma23 = n.sigma23;
    p.beamOffset = n.beamOffset;
    p.ensembleWidth = n.ensembleWidth;
    return p;
}

}  // namespace chiralsg

// reservoir.hpp — Ohmic spectral densities and Bose/Fermi occupations of the
// charger and battery reservoirs (k_B = 1, frequencies in units of lambda).

#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "qbatt/error.hpp"

namespace qbatt {

enum class Statistics { boson, fermion };

inline std::string_view to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

struct ReservoirSpec {
    Statistics statistics = Statistics::boson;
    double temperature = 1.0;
    double chemical_potential = 0.0; // fermion only
    double alpha = 0.1;              // Ohmic prefactor
    double cutoff = 5.0;             // omega_c
    // Shifts every frequency argument. Extension knob; presets keep it at 0.
    double frequency_offset = 0.0;

    void validate() const {
        if (!(temperature > 0.0)) throw DomainError("ReservoirSpec: temperature must be positive");
        if (!(alpha >= 0.0)) throw DomainError("ReservoirSpec: alpha must be non-negative");
        if (!(cutoff > 0.0)) throw DomainError("ReservoirSpec: cutoff must be positive");
        if (statistics == Statistics::boson && chemical_potential != 0.0) {
            throw DomainError("ReservoirSpec: boson reservoirs carry no chemical potential");
        }
    }
};

struct BathPair {
    ReservoirSpec charger;
    ReservoirSpec battery;

    Statistics statistics() const { return charger.statistics; }
    double delta_T() const { return charger.temperature - battery.temperature; }
    double T_bar() const { return 0.5 * (charger.temperature + battery.temperature); }
    double delta_mu() const { return charger.chemical_potential - battery.chemical_potential; }
    double mu_bar() const { return 0.5 * (charger.chemical_potential + battery.chemical_potential); }

    const ReservoirSpec& operator[](std::size_t i) const { return i == 0 ? charger : battery; }

    void validate() const {
        charger.validate();
        battery.validate();
        if (charger.statistics != battery.statistics) {
            throw DomainError("BathPair: both reservoirs must share statistics");
        }
    }
};

// J(w) = alpha w exp(-w / w_c) for w > 0, else 0.
inline double spectral_density(const ReservoirSpec& r, double omega) {
    const double w = omega + r.frequency_offset;
    if (w <= 0.0) return 0.0;
    return r.alpha * w * std::exp(-w / r.cutoff);
}

inline double occupation(const ReservoirSpec& r, double omega) {
    const double w = omega + r.frequency_offset;
    if (r.statistics == Statistics::boson) {
        if (w <= 0.0) throw DomainError("occupation: Bose function needs omega > 0");
        return 1.0 / std::expm1(w / r.temperature);
    }
    return 1.0 / (std::exp((w - r.chemical_potential) / r.temperature) + 1.0);
}

// N + 1 for bosons, 1 - N for fermions.
inline double co_occupation(const ReservoirSpec& r, double omega) {
    if (r.statistics == Statistics::boson) return occupation(r, omega) + 1.0;
    const double w = omega + r.frequency_offset;
    // 1 - 1/(e^x + 1) evaluated without cancellation.
    return 1.0 / (std::exp(-(w - r.chemical_potential) / r.temperature) + 1.0);
}

} // namespace qbatt

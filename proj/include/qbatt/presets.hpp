// presets.hpp — Named sweep configurations, one per figure (fig2a … fig11).
// Each preset has one "panel" parameter that selects among the curves/panels
// of a figure; pass it through preset(name, value).

#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbatt/config.hpp"
#include "qbatt/error.hpp"

namespace qbatt {

struct PresetInfo {
    std::string_view name;
    std::string_view panel;         // parameter selected by --panel
    double panel_default;
    std::string_view panel_values;  // values used in the figure
    std::string_view description;
};

inline const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> list{
        {"fig2a", "dT", 0.0, "0", "efficiency vs detuning, bosonic reservoirs, T_bar=1"},
        {"fig2b", "dmu", 0.0, "0", "efficiency vs detuning, fermionic reservoirs, T=1, mu_bar=2"},
        {"fig3", "dT", 1.0, "0, 1, -1", "bosonic detuning profile; set initial_state=plus for the symmetric state"},
        {"fig4", "dmu", 0.0, "0", "fermionic detuning profile from the symmetric initial state"},
        {"fig5", "T_bar", 1.0, "1", "efficiency over the initial-state Bloch sphere (theta x phi)"},
        {"fig6a", "phi", 0.0, "0, pi/2", "efficiency vs temperature gradient, theta=pi/4"},
        {"fig6b", "dT", 0.0, "0", "efficiency vs initial phase phi, theta=pi/4"},
        {"fig7a", "delta", 0.0, "0", "efficiency vs common temperature, bosonic reservoirs"},
        {"fig7b", "T", 1.0, "1, 2, 3", "efficiency vs common chemical potential, fermionic reservoirs"},
        {"fig8", "T_bar", 1.0, "1, 2, 3", "efficiency map over drive F and detuning, bosonic reservoirs"},
        {"fig9", "T_bar", 1.0, "1", "efficiency map over temperature gradient and detuning, F=0.5"},
        {"fig10", "mu_bar", 3.0, "3, 6, -3, -6", "efficiency map over drive F and detuning, fermionic reservoirs"},
        {"fig11", "mu_bar", 0.0, "0, 3, 6, -6", "efficiency map over chemical-potential gradient and detuning"},
    };
    return list;
}

inline const PresetInfo& preset_info(std::string_view name) {
    for (const auto& p : preset_catalog())
        if (p.name == name) return p;
    throw UnknownPreset("unknown preset '" + std::string(name) + "'");
}

inline SweepConfig preset(std::string_view name, std::optional<double> panel = std::nullopt) {
    using std::numbers::pi;
    const PresetInfo& info = preset_info(name);
    SweepConfig c;
    c.preset = std::string(name);
    c.equation = SweepEquation::redfield;
    c.statistics = Statistics::boson;
    c.initial_state = "eg";
    c.fixed = {{"F", 0.5}, {"alpha", 0.1}, {"omega_c", 5.0}, {"delta_bar", 0.0}, {"T_bar", 1.0}};
    const Axis detuning{"delta", -4.0, 4.0, 121};
    const Axis detuning_map{"delta", -4.0, 4.0, 61};

    auto fermionic = [&] {
        c.statistics = Statistics::fermion;
        c.fixed["mu_bar"] = 2.0;
    };

    if (name == "fig2a" || name == "fig3") {
        c.axes = {detuning};
    } else if (name == "fig2b") {
        fermionic();
        c.axes = {detuning};
    } else if (name == "fig4") {
        fermionic();
        c.initial_state = "plus";
        c.axes = {detuning};
    } else if (name == "fig5") {
        c.initial_state = "bloch";
        c.axes = {{"theta", 0.0, pi, 61}, {"phi", 0.0, 2.0 * pi, 61}};
    } else if (name == "fig6a") {
        c.initial_state = "bloch";
        c.fixed["theta"] = pi / 4;
        c.axes = {{"dT", -1.8, 1.8, 121}};
    } else if (name == "fig6b") {
        c.initial_state = "bloch";
        c.fixed["theta"] = pi / 4;
        c.axes = {{"phi", 0.0, 2.0 * pi, 121}};
    } else if (name == "fig7a") {
        c.initial_state = "plus";
        c.fixed.erase("T_bar");
        c.axes = {{"T", 0.1, 5.0, 121}};
    } else if (name == "fig7b") {
        fermionic();
        c.fixed.erase("mu_bar");
        c.initial_state = "plus";
        c.axes = {{"mu", -8.0, 8.0, 121}};
    } else if (name == "fig8") {
        c.axes = {{"F", 0.05, 3.0, 61}, detuning_map};
    } else if (name == "fig9") {
        c.axes = {{"dT", -1.8, 1.8, 61}, detuning_map};
    } else if (name == "fig10") {
        fermionic();
        c.axes = {{"F", 0.05, 3.0, 61}, detuning_map};
    } else if (name == "fig11") {
        fermionic();
        c.axes = {{"dmu", -4.0, 4.0, 61}, detuning_map};
    }
    c.fixed[std::string(info.panel)] = panel.value_or(info.panel_default);
    validate_config(c);
    return c;
}

} // namespace qbatt

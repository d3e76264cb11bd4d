// test_sweep.cpp — Configuration parsing, presets, single points, sweeps, CSV
// round trips and the command-line exit codes.

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "qbatt/presets.hpp"
#include "qbatt/sweep.hpp"

using namespace qbatt;

namespace {

SweepConfig small_config() {
    return parse_config(R"(# detuning scan
equation = redfield
statistics = boson
initial_state = eg
F = 0.5
dT = 0.4
tau = 500
axis1 = delta:-2:2:5
axis2 = F:0.3:0.9:3
)");
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) continue;
        if (!header) {
            header = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QBATT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qbatt_test_" + name);
}

} // namespace

TEST(Config, ParsesKeysAndAxes) {
    const auto c = small_config();
    EXPECT_EQ(c.equation, SweepEquation::redfield);
    ASSERT_EQ(c.axes.size(), 2u);
    EXPECT_EQ(c.axes[0].name, "delta");
    EXPECT_EQ(c.axes[0].points, 5u);
    EXPECT_DOUBLE_EQ(c.axes[0].value(4), 2.0);
    EXPECT_DOUBLE_EQ(c.axes[0].value(1), -1.0);
    EXPECT_DOUBLE_EQ(c.fixed.at("dT"), 0.4);
    EXPECT_EQ(c.point_count(), 15u);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config("axis1 = omega_c:0:1:3\n"), ConfigError);     // not sweepable
    EXPECT_THROW(parse_config("axis1 = delta:0:1:1\n"), ConfigError);       // too few points
    EXPECT_THROW(parse_config("bogus = 1\naxis1 = delta:0:1:3\n"), ConfigError);
    EXPECT_THROW(parse_config("F = abc\naxis1 = delta:0:1:3\n"), ConfigError);
    EXPECT_THROW(parse_config("F = 1\n"), ConfigError);                     // no axis
    EXPECT_THROW(parse_config("axis2 = delta:0:1:3\n"), ConfigError);
    EXPECT_THROW(parse_config("axis1 = delta:0:1:3\naxis2 = delta:0:1:3\n"), ConfigError);
    EXPECT_THROW(parse_config("initial_state = sideways\naxis1 = delta:0:1:3\n"), ConfigError);
    EXPECT_THROW(parse_config("just words\n"), ConfigError);
}

TEST(Config, ResolvesAliasesAndGradients) {
    auto c = parse_config("statistics = fermion\nT = 2\ndT = 0.5\nmu = 3\ndmu = 1\naxis1 = delta:-1:1:3\n");
    const auto s = resolve_point(c, {1.0});
    EXPECT_DOUBLE_EQ(s.baths.charger.temperature, 2.25);
    EXPECT_DOUBLE_EQ(s.baths.battery.temperature, 1.75);
    EXPECT_DOUBLE_EQ(s.baths.charger.chemical_potential, 3.5);
    EXPECT_DOUBLE_EQ(s.baths.battery.chemical_potential, 2.5);
    EXPECT_DOUBLE_EQ(s.model.delta1, 0.5);
    EXPECT_DOUBLE_EQ(s.model.delta2, -0.5);
    // boson reservoirs ignore chemical potentials
    c.statistics = Statistics::boson;
    EXPECT_DOUBLE_EQ(resolve_point(c, {1.0}).baths.charger.chemical_potential, 0.0);
}

TEST(Config, PiSuffix) {
    const auto c = parse_config("initial_state = bloch\ntheta = 0.25pi\naxis1 = phi:0:2*pi:3\n");
    EXPECT_DOUBLE_EQ(c.fixed.at("theta"), std::numbers::pi / 4);
    EXPECT_DOUBLE_EQ(c.axes[0].max, 2.0 * std::numbers::pi);
}

TEST(Presets, CatalogAndErrors) {
    EXPECT_EQ(preset_catalog().size(), 13u);
    for (const auto& p : preset_catalog()) {
        const auto c = preset(p.name);
        EXPECT_EQ(c.preset, p.name);
        for (const auto& a : c.axes) EXPECT_EQ(a.points, c.axes.size() == 1 ? 121u : 61u) << p.name;
    }
    EXPECT_THROW(preset("fig12"), UnknownPreset);
}

TEST(Presets, CaptionParameters) {
    const auto f5 = preset("fig5");
    EXPECT_EQ(f5.statistics, Statistics::boson);
    EXPECT_EQ(f5.axes[0].name, "theta");
    EXPECT_DOUBLE_EQ(f5.axes[0].max, std::numbers::pi);
    EXPECT_DOUBLE_EQ(f5.axes[1].max, 2.0 * std::numbers::pi);
    const auto f2b = preset("fig2b");
    EXPECT_EQ(f2b.statistics, Statistics::fermion);
    EXPECT_DOUBLE_EQ(f2b.fixed.at("mu_bar"), 2.0);
    EXPECT_DOUBLE_EQ(f2b.fixed.at("T_bar"), 1.0);
    const auto f11 = preset("fig11", -6.0);
    EXPECT_DOUBLE_EQ(f11.fixed.at("mu_bar"), -6.0);
    EXPECT_EQ(f11.axes[0].name, "dmu");
    EXPECT_EQ(f11.axes[1].name, "delta");
}

TEST(Sweep, PaperPoints) {
    auto c = preset("fig2a");
    const auto gap0 = run_point(c, {0.0});
    ASSERT_TRUE(gap0.ok) << gap0.error;
    EXPECT_LT(gap0.gap, 1e-8);
    EXPECT_TRUE(gap0.bistable);

    const auto f5 = preset("fig5");
    const auto sep = run_point(f5, {0.0, 0.0});
    ASSERT_TRUE(sep.ok) << sep.error;
    EXPECT_NEAR(sep.metrics.efficiency, 0.0, 1e-6);
    const auto ent = run_point(f5, {std::numbers::pi / 4, 0.0});
    EXPECT_NEAR(ent.metrics.efficiency, 0.23, 0.02);
}

TEST(Sweep, GridOrderFirstAxisOutermost) {
    const auto c = small_config();
    EXPECT_EQ(grid_point(c, 0), (std::vector<double>{-2.0, 0.3}));
    EXPECT_EQ(grid_point(c, 1), (std::vector<double>{-2.0, c.axes[1].value(1)}));
    EXPECT_EQ(grid_point(c, 3), (std::vector<double>{-1.0, 0.3}));
    const auto r = run_sweep(c);
    EXPECT_EQ(r.points.size(), 15u);
    EXPECT_EQ(data_rows(to_csv(r)).size(), 15u);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
    auto c = small_config();
    c.threads = 1;
    const std::string one = to_csv(run_sweep(c));
    c.threads = 4;
    EXPECT_EQ(to_csv(run_sweep(c)), one);
    c.threads = 7;
    EXPECT_EQ(to_csv(run_sweep(c)), one);
}

TEST(Sweep, CsvMetadataReproducesRun) {
    const auto c = small_config();
    const std::string csv = to_csv(run_sweep(c));
    const auto again = parse_config(csv);
    EXPECT_EQ(to_csv(run_sweep(again)), csv);
}

TEST(Sweep, AxisSwapPermutesRows) {
    auto c = small_config();
    auto swapped = c;
    std::swap(swapped.axes[0], swapped.axes[1]);
    const auto a = run_sweep(c), b = run_sweep(swapped);
    auto key = [](const PointResult& p, bool flip) {
        std::ostringstream s;
        const double x = p.axis_values[flip ? 1 : 0], y = p.axis_values[flip ? 0 : 1];
        s << format_sig9(x) << ',' << format_sig9(y) << ',' << format_sig9(p.metrics.efficiency) << ','
          << format_sig9(p.concurrence) << ',' << format_sig9(p.gap);
        return s.str();
    };
    std::multiset<std::string> ka, kb;
    for (const auto& p : a.points) ka.insert(key(p, false));
    for (const auto& p : b.points) kb.insert(key(p, true));
    EXPECT_EQ(ka, kb);
}

TEST(Sweep, UnitaryLimitKeepsPurity) {
    // alpha = 0 removes dissipation: the state stays pure, efficiency from unitary motion only
    const auto c = parse_config("alpha = 0\ntau = 3\ndT = 0\naxis1 = delta:0.5:1.5:2\n");
    for (const auto& p : run_sweep(c).points) {
        ASSERT_TRUE(p.ok) << p.error;
        EXPECT_NEAR((p.rho * p.rho).trace().real(), 1.0, 1e-10);
        EXPECT_GE(p.metrics.efficiency, 0.0);
        EXPECT_LE(p.metrics.efficiency, 1.0 + 1e-12);
    }
}

TEST(Sweep, FailedPointsAreFlaggedNotFatal) {
    // omega_d small enough that a bare frequency goes negative in the Lindblad model
    const auto c = parse_config("equation = lindblad-pheno\nomega_d = 1.5\naxis1 = delta:-4:0:3\n");
    const auto r = run_sweep(c);
    EXPECT_EQ(r.failures(), 1u);
    EXPECT_FALSE(r.points[0].ok);
    EXPECT_TRUE(r.points[2].ok);
    const auto rows = data_rows(to_csv(r));
    EXPECT_NE(rows[0].find("error:"), std::string::npos);
    EXPECT_NE(rows[0].find("nan"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    const auto cfg = temp_file("ok.cfg"), bad = temp_file("bad.cfg"), fail = temp_file("fail.cfg");
    const auto out = temp_file("out.csv"), out2 = temp_file("out2.csv");
    std::ofstream(cfg) << "tau = 100\naxis1 = delta:-1:1:3\n";
    std::ofstream(bad) << "axis1 = nothing:0:1:3\n";
    std::ofstream(fail) << "equation = lindblad-pheno\nomega_d = 1.5\naxis1 = delta:-4:0:3\n";
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + out.string()), 0);
    EXPECT_EQ(run_cli("run --config " + out.string() + " --out " + out2.string()), 0);
    {
        std::ifstream a(out), b(out2);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        EXPECT_EQ(sa.str(), sb.str());
    }
    EXPECT_EQ(run_cli("run --config " + bad.string()), 2);
    EXPECT_EQ(run_cli("run --config /nonexistent/file.cfg"), 2);
    EXPECT_EQ(run_cli("run --config " + fail.string()), 3);
    EXPECT_EQ(run_cli("preset nosuchfig"), 2);
    EXPECT_EQ(run_cli("list-presets"), 0);
    EXPECT_EQ(run_cli("point --config " + cfg.string() + " --at delta=0.5"), 0);
    EXPECT_EQ(run_cli("point --config " + cfg.string() + " --at F=0.5"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    for (const auto& p : {cfg, bad, fail, out, out2}) std::filesystem::remove(p);
}

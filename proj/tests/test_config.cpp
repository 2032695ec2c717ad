#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cptsim/config.hpp"
#include "cptsim/errors.hpp"

using namespace cpt;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "t.ini");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool same_experiment(const Experiment& a, const Experiment& b) {
    return a.atom.gamma_sp == b.atom.gamma_sp && a.atom.ground_hfs == b.atom.ground_hfs &&
           a.atom.excited_hfs == b.atom.excited_hfs && a.atom.mass == b.atom.mass &&
           a.atom.wavelength == b.atom.wavelength && a.intensity == b.intensity &&
           a.laser_linewidth == b.laser_linewidth && a.rf == b.rf && a.optical_detuning == b.optical_detuning &&
           a.temperature == b.temperature && a.doppler_fwhm == b.doppler_fwhm && a.pressure_kpa == b.pressure_kpa &&
           a.broadening_per_kpa == b.broadening_per_kpa && a.shift_per_kpa == b.shift_per_kpa &&
           a.ground_relaxation == b.ground_relaxation && a.cell_length == b.cell_length &&
           a.rb_density == b.rb_density && a.beam_diameter == b.beam_diameter && a.layers == b.layers &&
           a.laser == b.laser && a.scheme == b.scheme && a.mode == b.mode && a.field_ut == b.field_ut &&
           a.assignment_cutoff == b.assignment_cutoff && a.dicke_narrowing == b.dicke_narrowing;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const auto cfg = parse_config_text("[cell]\npressure = 0.5\n[laser]\nintensity = 3.8\n[scan]\n");
    CHECK(cfg.has_section("cell"));
    CHECK(cfg.has_section("laser"));
    CHECK(cfg.has_section("scan"));
    CHECK(!cfg.has_section("atom"));
    CHECK(cfg.experiment.intensity == doctest::Approx(mw_per_cm2(3.8)));
    CHECK(cfg.experiment.temperature == doctest::Approx(celsius(68.0)));
    CHECK(cfg.experiment.laser == LaserKind::pl_pair);
    CHECK(cfg.scan.detuning_points == 57);
    CHECK(cfg.scan.raman.points == 801);
}

TEST_CASE("frequencies are entered in ordinary units") {
    const auto cfg = parse_config_text(
        "[laser]\ntype = vcsel-comb\nlinewidth = 100\nrf = 3417.341\ndetuning = 408\n"
        "[cell]\nground_relaxation = 400\nshift = -60   # MHz/kPa\n[atom]\nexcited_hfs = 817\n");
    CHECK(cfg.experiment.laser == LaserKind::vcsel_comb);
    CHECK(*cfg.experiment.laser_linewidth == doctest::Approx(mhz(100.0)));
    CHECK(*cfg.experiment.rf == doctest::Approx(mhz(3417.341)));
    CHECK(cfg.experiment.optical_detuning == doctest::Approx(mhz(408.0)));
    CHECK(cfg.experiment.ground_relaxation == doctest::Approx(hz(400.0)));
    CHECK(cfg.experiment.shift_per_kpa == doctest::Approx(mhz(-60.0)));
    CHECK(cfg.experiment.atom.excited_hfs == doctest::Approx(mhz(817.0)));
}

TEST_CASE("schema violations name the key and line") {
    auto e = error_of("[laser]\nintensity = 1\n[cell]\npressure = -1\n");
    CHECK(e.find("cell.pressure") != std::string::npos);
    CHECK(e.find("t.ini:4") != std::string::npos);
    e = error_of("[cell]\npresure = 1\n");
    CHECK(e.find("cell.presure") != std::string::npos);
    CHECK(e.find(":2") != std::string::npos);
    CHECK(error_of("[cel]\n").find("unknown section") != std::string::npos);
    CHECK(error_of("[laser]\ntype = dfb\n").find("laser.type") != std::string::npos);
    CHECK(error_of("[laser]\nintensity = abc\n").find("laser.intensity") != std::string::npos);
    CHECK(error_of("[laser]\nintensity = 1\nintensity = 2\n").find("duplicate") != std::string::npos);
    CHECK(error_of("intensity = 1\n").find("outside") != std::string::npos);
    CHECK(error_of("[cell]\nlayers = 2.5\n").find("cell.layers") != std::string::npos);
    CHECK(error_of("[cell]\ntemperature = -300\n").find("cell.temperature") != std::string::npos);
    CHECK(error_of("[scan]\ndetuning_start = 10\ndetuning_stop = 5\n").find("detuning_stop") != std::string::npos);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/cpt.ini"), ConfigError);
}

TEST_CASE("printed configuration parses back to identical values") {
    const auto a = parse_config_text(
        "[laser]\ntype = vcsel-comb\nintensity = 2.7\nbeta = 1.75\n[cell]\ntemperature = 71.3\n"
        "rb_density = 3.3e17\ndoppler_fwhm = 537.5\n[atom]\nground_hfs = 6834.682611\n[scan]\n"
        "intensities = 0.1, 0.7, 3\n");
    const auto b = parse_config_text(to_config_text(a));
    CHECK(effective_config(a) == effective_config(b));
    CHECK(same_experiment(a.experiment, b.experiment));
    CHECK(a.scan.intensities_mw_cm2 == b.scan.intensities_mw_cm2);
}

TEST_CASE("CSV header carries the full configuration") {
    const auto a = parse_config_text("[laser]\nintensity = 3.8\ndetuning = -123.25\n[cell]\npressure = 1.5\n"
                                     "ground_relaxation = 400\n[field]\nb = 2.5\n[scan]\nraman_points = 301\n");
    CsvTable t;
    t.run = {{"amplitude", "0.25"}};
    t.columns = {"raman_hz", "y"};
    t.rows = {{-1.0, 0.5}, {1.0, 0.25}};
    std::ostringstream os;
    write_csv(os, a, t);
    const std::string csv = os.str();
    CHECK(csv.find("# run.amplitude=0.25") != std::string::npos);
    CHECK(csv.find("raman_hz,y\n-1,0.5\n1,0.25\n") != std::string::npos);
    for (const auto& [k, v] : effective_config(a)) CHECK(csv.find("# " + k + "=" + v + "\n") != std::string::npos);
    const auto b = config_from_csv(csv);
    CHECK(same_experiment(a.experiment, b.experiment));
    CHECK(effective_config(a) == effective_config(b));
}

TEST_CASE("detuning grid") {
    ScanSettings s;
    const auto g = s.detunings_mhz();
    REQUIRE(g.size() == 57);
    CHECK(g.front() == -300.0);
    CHECK(g.back() == 1100.0);
    CHECK(g[1] - g[0] == doctest::Approx(25.0));
}

TEST_CASE("example configurations parse") {
    for (const char* name : {"detuning_scan.ini", "minimal.ini"}) {
        CAPTURE(name);
        const auto cfg = parse_config_file(std::string(CPT_CONFIG_DIR) + "/" + name);
        CHECK(cfg.has_section("laser"));
    }
    const auto f5 = parse_config_file(std::string(CPT_CONFIG_DIR) + "/detuning_scan.ini");
    CHECK(f5.experiment.intensity == doctest::Approx(mw_per_cm2(3.8)));
    CHECK(f5.experiment.pressure_kpa == 0.5);
    CHECK(f5.experiment.temperature == doctest::Approx(celsius(68.0)));
    CHECK(f5.experiment.laser == LaserKind::pl_pair);
}

// cpt_sim: command-line driver for the CPT simulator.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cptsim/config.hpp"
#include "cptsim/errors.hpp"
#include "cptsim/parallel.hpp"
#include "cptsim/scan.hpp"

namespace {

using namespace cpt;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Options {
    std::string config;
    std::string out;
    std::size_t layers = 0;
    std::size_t threads = 0;
    bool dump_matrices = false;
    bool dump_layers = false;
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string full(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_sections(const RunConfig& cfg, const std::vector<std::string>& needed) {
    for (const auto& s : needed)
        if (!cfg.has_section(s)) throw ConfigError("missing required section [" + s + "]");
}

// Side file next to the main output, or stdout without one.
void emit_side_table(const RunConfig& cfg, const std::string& suffix, const CsvTable& t) {
    if (cfg.output.empty()) {
        write_csv(std::cout, cfg, t);
        return;
    }
    const std::string path = cfg.output + suffix;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    write_csv(f, cfg, t);
}

void emit(const RunConfig& cfg, const CsvTable& table, const std::string& summary) {
    if (cfg.output.empty()) {
        write_csv(std::cout, cfg, table);
        std::cout << "# " << summary << "\n";
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw ConfigError("cannot write " + cfg.output);
    write_csv(f, cfg, table);
    std::cout << summary << "\n";
}

void add_features(CsvTable& t, const ResonanceFeatures& f) {
    t.run.emplace_back("found", f.found ? "true" : "false");
    t.run.emplace_back("amplitude", full(f.amplitude));
    t.run.emplace_back("fwhm_hz", full(f.fwhm));
    t.run.emplace_back("center_hz", full(f.center));
    t.run.emplace_back("background", full(f.background));
}

std::string feature_summary(const ResonanceFeatures& f) {
    if (!f.found) return "no resonance";
    return "A_C=" + num(f.amplitude) + " fwhm_hz=" + num(f.fwhm) + " center_hz=" + num(f.center);
}

int run_raman(const RunConfig& cfg) {
    require_sections(cfg, {"laser", "cell", "scan"});
    const auto& ex = cfg.experiment;
    const auto curve = raman_scan(ex, raman_grid(ex, cfg.scan.raman));
    const auto f = resonance(ex, curve);
    CsvTable t;
    add_features(t, f);
    t.columns = {"raman_hz", curve.observable};
    for (std::size_t i = 0; i < curve.x.size(); ++i) t.rows.push_back({curve.x[i], curve.y[i]});
    emit(cfg, t, "raman: " + feature_summary(f));
    return kOk;
}

int run_detuning(const RunConfig& cfg) {
    require_sections(cfg, {"laser", "cell", "scan"});
    const auto pts = detuning_scan(cfg.experiment, cfg.scan.detunings_mhz(), cfg.scan.raman);
    CsvTable t;
    t.columns = {"detuning_mhz", "amplitude", "fwhm_hz", "center_hz", "background", "G1", "G2", "G1_over_G2"};
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        t.rows.push_back({p.detuning_mhz, p.features.amplitude, p.features.fwhm, p.features.center, p.background,
                          p.profiles.p1.real(), p.profiles.p2.real(), p.profiles.ratio()});
        if (p.features.amplitude > pts[best].features.amplitude) best = i;
    }
    // interior null: smallest amplitude away from the grid ends
    std::size_t null = pts.size() > 2 ? 1 : 0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
        if (pts[i].features.amplitude < pts[null].features.amplitude) null = i;
    t.run.emplace_back("max_detuning_mhz", full(pts[best].detuning_mhz));
    t.run.emplace_back("null_detuning_mhz", full(pts[null].detuning_mhz));
    emit(cfg, t,
         "detuning: max A_C=" + num(pts[best].features.amplitude) + " at " + num(pts[best].detuning_mhz) +
             " MHz, null at " + num(pts[null].detuning_mhz) + " MHz");
    return kOk;
}

int run_power(const RunConfig& cfg) {
    require_sections(cfg, {"laser", "cell", "scan"});
    const auto& ex = cfg.experiment;
    std::vector<PowerVariant> variants;
    if (cfg.scan.standard_variants) {
        variants = default_power_variants();
    } else {
        variants.push_back({std::string(to_string(ex.laser)) + "-" + num(ex.pressure_kpa) + "kPa", ex.laser,
                            ex.pressure_kpa, ex.ground_relaxation});
    }
    const auto curves = power_scan(ex, cfg.scan.intensities_mw_cm2, variants, cfg.scan.raman);
    CsvTable t;
    t.columns = {"variant", "intensity_mw_cm2", "amplitude", "fwhm_hz"};
    std::string summary = "power:";
    for (std::size_t v = 0; v < curves.size(); ++v) {
        t.run.emplace_back("variant" + std::to_string(v), curves[v].variant.label);
        for (std::size_t i = 0; i < curves[v].intensity_mw_cm2.size(); ++i)
            t.rows.push_back({static_cast<double>(v), curves[v].intensity_mw_cm2[i], curves[v].features[i].amplitude,
                              curves[v].features[i].fwhm});
        if (!curves[v].features.empty())
            summary += " " + curves[v].variant.label + " A_C(" + num(curves[v].intensity_mw_cm2.back()) +
                       ")=" + num(curves[v].features.back().amplitude);
    }
    emit(cfg, t, summary);
    return kOk;
}

int run_compare(const RunConfig& cfg) {
    require_sections(cfg, {"laser", "cell", "scan"});
    const auto pc = polarization_compare(cfg.experiment, cfg.scan.polarization_detuning_mhz, cfg.scan.raman);
    CsvTable t;
    t.columns = {"detuning_mhz", "amplitude_sigma_sigma", "fwhm_sigma_sigma_hz", "amplitude_lin_lin",
                 "fwhm_lin_lin_hz", "ratio"};
    t.rows.push_back({pc.detuning_mhz, pc.sigma_sigma.amplitude, pc.sigma_sigma.fwhm, pc.lin_lin.amplitude,
                      pc.lin_lin.fwhm, pc.ratio});
    emit(cfg, t,
         "compare-pol: ratio=" + num(pc.ratio) + " at " + num(pc.detuning_mhz) + " MHz (sigma-sigma A_C=" +
             num(pc.sigma_sigma.amplitude) + ", lin-lin A_C=" + num(pc.lin_lin.amplitude) + ")");
    return kOk;
}

CsvTable matrix_table(const CoefficientSet& cs) {
    CsvTable t;
    t.columns = {"matrix", "row", "col", "re", "im"};
    auto put = [&](double id, const Eigen::MatrixXcd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                t.rows.push_back({id, static_cast<double>(r), static_cast<double>(c), m(r, c).real(), m(r, c).imag()});
    };
    t.run.emplace_back("matrix0", "theta (rad/s, diagonal)");
    t.run.emplace_back("matrix1", "K (rad/s)");
    put(0, cs.theta.cast<std::complex<double>>().asDiagonal().toDenseMatrix());
    put(1, cs.K);
    for (std::size_t d = 0; d < cs.drives.size(); ++d) {
        t.run.emplace_back("matrix" + std::to_string(2 + d),
                           "V drive " + std::to_string(d) + " component " + std::to_string(cs.drives[d].component) +
                               " F_g=" + std::to_string(cs.drives[d].ground_F) + " (rad/s)");
        put(static_cast<double>(2 + d), cs.drives[d].rabi);
    }
    return t;
}

CoefficientSet coefficients_at(const RunConfig& cfg) {
    const auto& ex = cfg.experiment;
    return build_coefficients(ex.system(), ex.spectrum(), ex.broadening(), ex.field_ut, hz(cfg.scan.raman_offset_hz),
                              ex.coefficient_options());
}

int run_coeffs(const RunConfig& cfg, const Options& opt) {
    require_sections(cfg, {"laser", "cell"});
    const auto& ex = cfg.experiment;
    const auto prof = resonant_profiles(ex);
    const auto p = six_level_params(ex, hz(cfg.scan.raman_offset_hz));
    const double width = to_hz(cpt_term_width(p));
    CsvTable t;
    t.columns = {"detuning_mhz", "G1", "G2", "F1", "F2", "W1_hz", "W2_hz", "W_hz", "W12_hz", "D12_hz", "Delta_hz",
                 "Gamma_hz", "fwhm_hz"};
    t.rows.push_back({to_mhz(ex.optical_detuning), prof.p1.real(), prof.p2.real(), prof.p1.imag(), prof.p2.imag(),
                      to_hz(p.W1), to_hz(p.W2), to_hz(p.W), to_hz(p.W12), to_hz(p.D12), to_hz(p.Delta),
                      to_hz(p.Gamma), width});
    if (opt.dump_matrices) emit_side_table(cfg, ".matrices.csv", matrix_table(coefficients_at(cfg)));
    emit(cfg, t,
         "coeffs: G1=" + num(prof.p1.real()) + " G2=" + num(prof.p2.real()) + " G1/G2=" + num(prof.ratio()) +
             " fwhm_hz=" + num(width));
    return kOk;
}

int run_propagate(const RunConfig& cfg, const Options& opt) {
    require_sections(cfg, {"laser", "cell"});
    const auto& ex = cfg.experiment;
    const auto spectrum = ex.spectrum();
    const auto cs = coefficients_at(cfg);
    if (opt.dump_matrices) emit_side_table(cfg, ".matrices.csv", matrix_table(cs));
    const auto res = propagate(ex.cell(), cs, spectrum, ex.atom.optical_frequency());
    CsvTable t;
    t.columns = {"layer", "z_m", "power_w", "rho_exc", "absorbed_power_w"};
    const double dz = ex.cell_length / static_cast<double>(res.layers.size());
    const double area = ex.cell().beam_area();
    for (const auto& l : res.layers) {
        double power = 0.0;
        for (const auto& e : l.field) power += 0.5 * phys::epsilon0 * phys::c * std::norm(e) * area;
        t.rows.push_back({static_cast<double>(l.index), dz * static_cast<double>(l.index), power, l.rho_exc,
                          l.absorbed_power});
    }
    t.run.emplace_back("input_power_w", full(res.input_power));
    t.run.emplace_back("output_power_w", full(res.output_power));
    t.run.emplace_back("transmittance", full(res.transmittance));
    if (opt.dump_layers) {
        CsvTable lt;
        lt.columns = {"layer", "component", "amplitude", "phase", "rho_exc"};
        for (const auto& l : res.layers)
            for (std::size_t j = 0; j < l.field.size(); ++j)
                lt.rows.push_back({static_cast<double>(l.index), static_cast<double>(j), std::abs(l.field[j]),
                                   std::arg(l.field[j]), l.rho_exc});
        emit_side_table(cfg, ".layers.csv", lt);
    }
    emit(cfg, t,
         "propagate: T=" + num(res.transmittance) + " absorbed_w=" + num(res.absorbed_power) +
             " layers=" + std::to_string(res.layers.size()));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent population trapping simulator for Rb-87 D1 vapor cells"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--config,-c", opt.config, "INI configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("--out,-o", opt.out, "CSV output path (overrides scan.output)");
    app.add_option("--layers", opt.layers, "number of propagation layers")->check(CLI::PositiveNumber);
    app.add_option("--threads", opt.threads, "worker threads (default: CPT_SIM_THREADS or all cores)");
    app.add_flag("--dump-matrices", opt.dump_matrices, "write theta, K and the drive matrices to <out>.matrices.csv");
    app.add_flag("--dump-layers", opt.dump_layers, "write per-layer component fields to <out>.layers.csv");

    struct Sub {
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs = {
        {"raman", "Raman detuning scan with resonance features"},
        {"detuning", "optical detuning scan: A_C and G1/G2"},
        {"power", "A_C and width against intensity"},
        {"compare-pol", "sigma-sigma against lin||lin amplitude ratio"},
        {"coeffs", "G, F and 6-level rates of the resonant pair"},
        {"propagate", "single layered propagation at scan.raman_offset"},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kConfigError;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg = parse_config_file(opt.config);
        if (!opt.out.empty()) cfg.output = opt.out;
        if (opt.layers > 0) cfg.experiment.layers = opt.layers;
        // A fixed count keeps the run reproducible from the CSV header.
        cfg.experiment.threads = resolve_threads(opt.threads > 0 ? opt.threads : cfg.experiment.threads);

        if (cmd == "raman") return run_raman(cfg);
        if (cmd == "detuning") return run_detuning(cfg);
        if (cmd == "power") return run_power(cfg);
        if (cmd == "compare-pol") return run_compare(cfg);
        if (cmd == "coeffs") return run_coeffs(cfg, opt);
        if (cmd == "propagate") return run_propagate(cfg, opt);
        std::cerr << app.help();
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
}

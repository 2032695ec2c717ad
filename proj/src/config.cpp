#include "cptsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "cptsim/errors.hpp"

namespace cpt {

namespace {

// Value problem without location; the parser adds key path and line.
struct BadValue {
    std::string what;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double number(const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out)) throw BadValue{"expected a number, got '" + v + "'"};
    return out;
}

double at_least(const std::string& v, double lo, bool strict = false) {
    const double x = number(v);
    if (strict ? !(x > lo) : !(x >= lo))
        throw BadValue{"must be " + std::string(strict ? "> " : ">= ") + format(lo) + ", got " + v};
    return x;
}

std::size_t count(const std::string& v, std::size_t lo) {
    const double x = number(v);
    if (x != std::floor(x) || x < static_cast<double>(lo) || x > 1e9)
        throw BadValue{"must be an integer >= " + std::to_string(lo) + ", got " + v};
    return static_cast<std::size_t>(x);
}

bool boolean(const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw BadValue{"expected true or false, got '" + v + "'"};
}

std::optional<double> optional_at_least(const std::string& v, double lo, bool strict = false) {
    if (v == "auto") return std::nullopt;
    return at_least(v, lo, strict);
}

std::string optional_text(const std::optional<double>& v, double scale) {
    return v ? format(*v / scale) : "auto";
}

std::vector<double> number_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(at_least(trim(item), 0.0));
    if (out.empty()) throw BadValue{"expected a comma-separated list"};
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format(v[i]);
    return s;
}

struct Key {
    std::string path;  // section.name
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

constexpr double kMHz = two_pi * 1e6;
constexpr double kHertz = two_pi;

const std::vector<Key>& schema() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        auto add = [&](std::string path, auto get, auto set) { k.push_back({std::move(path), get, set}); };
        using C = RunConfig;
        using S = const std::string&;

        add("atom.gamma_sp", [](const C& c) { return format(c.experiment.atom.gamma_sp / kMHz); },
            [](C& c, S v) { c.experiment.atom.gamma_sp = at_least(v, 0.0, true) * kMHz; });
        add("atom.ground_hfs", [](const C& c) { return format(c.experiment.atom.ground_hfs / kMHz); },
            [](C& c, S v) { c.experiment.atom.ground_hfs = at_least(v, 0.0, true) * kMHz; });
        add("atom.excited_hfs", [](const C& c) { return format(c.experiment.atom.excited_hfs / kMHz); },
            [](C& c, S v) { c.experiment.atom.excited_hfs = at_least(v, 0.0, true) * kMHz; });
        add("atom.nuclear_splitting", [](const C& c) { return format(c.experiment.atom.nuclear_splitting_hz_per_ut); },
            [](C& c, S v) { c.experiment.atom.nuclear_splitting_hz_per_ut = at_least(v, 0.0); });
        add("atom.electron_g", [](const C& c) { return format(c.experiment.atom.electron_g); },
            [](C& c, S v) { c.experiment.atom.electron_g = at_least(v, 0.0, true); });
        add("atom.mass", [](const C& c) { return format(c.experiment.atom.mass / phys::amu); },
            [](C& c, S v) { c.experiment.atom.mass = at_least(v, 0.0, true) * phys::amu; });
        add("atom.wavelength", [](const C& c) { return format(c.experiment.atom.wavelength * 1e9); },
            [](C& c, S v) { c.experiment.atom.wavelength = at_least(v, 0.0, true) * 1e-9; });
        add("atom.reduced", [](const C& c) { return std::string(c.experiment.reduced_system ? "true" : "false"); },
            [](C& c, S v) { c.experiment.reduced_system = boolean(v); });

        add("laser.type", [](const C& c) { return std::string(to_string(c.experiment.laser)); },
            [](C& c, S v) {
                if (v == "pl-pair") c.experiment.laser = LaserKind::pl_pair;
                else if (v == "vcsel-comb") c.experiment.laser = LaserKind::vcsel_comb;
                else throw BadValue{"expected pl-pair or vcsel-comb, got '" + v + "'"};
            });
        add("laser.polarization", [](const C& c) { return std::string(to_string(c.experiment.scheme)); },
            [](C& c, S v) {
                if (v == "lin-lin") c.experiment.scheme = Scheme::lin_lin;
                else if (v == "sigma-sigma") c.experiment.scheme = Scheme::sigma_sigma;
                else throw BadValue{"expected lin-lin or sigma-sigma, got '" + v + "'"};
            });
        add("laser.intensity", [](const C& c) { return format(to_mw_per_cm2(c.experiment.intensity)); },
            [](C& c, S v) { c.experiment.intensity = mw_per_cm2(at_least(v, 0.0)); });
        add("laser.linewidth", [](const C& c) { return optional_text(c.experiment.laser_linewidth, kMHz); },
            [](C& c, S v) {
                const auto x = optional_at_least(v, 0.0);
                c.experiment.laser_linewidth = x ? std::optional<double>(*x * kMHz) : std::nullopt;
            });
        add("laser.beta", [](const C& c) { return format(c.experiment.beta); },
            [](C& c, S v) { c.experiment.beta = at_least(v, 0.0); });
        add("laser.rf", [](const C& c) { return optional_text(c.experiment.rf, kMHz); },
            [](C& c, S v) {
                const auto x = optional_at_least(v, 0.0, true);
                c.experiment.rf = x ? std::optional<double>(*x * kMHz) : std::nullopt;
            });
        add("laser.order", [](const C& c) { return std::to_string(c.experiment.comb_order); },
            [](C& c, S v) { c.experiment.comb_order = static_cast<int>(count(v, 1)); });
        add("laser.detuning", [](const C& c) { return format(c.experiment.optical_detuning / kMHz); },
            [](C& c, S v) { c.experiment.optical_detuning = number(v) * kMHz; });

        add("cell.temperature", [](const C& c) { return format(c.experiment.temperature - 273.15); },
            [](C& c, S v) { c.experiment.temperature = celsius(at_least(v, -273.15, true)); });
        add("cell.length", [](const C& c) { return format(c.experiment.cell_length * 100.0); },
            [](C& c, S v) { c.experiment.cell_length = at_least(v, 0.0, true) * 0.01; });
        add("cell.rb_density", [](const C& c) { return optional_text(c.experiment.rb_density, 1.0); },
            [](C& c, S v) { c.experiment.rb_density = optional_at_least(v, 0.0); });
        add("cell.density_scale", [](const C& c) { return format(c.experiment.density_scale); },
            [](C& c, S v) { c.experiment.density_scale = at_least(v, 0.0); });
        add("cell.pressure", [](const C& c) { return format(c.experiment.pressure_kpa); },
            [](C& c, S v) { c.experiment.pressure_kpa = at_least(v, 0.0); });
        add("cell.broadening", [](const C& c) { return format(c.experiment.broadening_per_kpa / kMHz); },
            [](C& c, S v) { c.experiment.broadening_per_kpa = at_least(v, 0.0) * kMHz; });
        add("cell.shift", [](const C& c) { return format(c.experiment.shift_per_kpa / kMHz); },
            [](C& c, S v) { c.experiment.shift_per_kpa = number(v) * kMHz; });
        add("cell.ground_relaxation", [](const C& c) { return format(c.experiment.ground_relaxation / kHertz); },
            [](C& c, S v) { c.experiment.ground_relaxation = at_least(v, 0.0, true) * kHertz; });
        add("cell.layers", [](const C& c) { return std::to_string(c.experiment.layers); },
            [](C& c, S v) { c.experiment.layers = count(v, 1); });
        add("cell.beam_diameter", [](const C& c) { return format(c.experiment.beam_diameter * 1e3); },
            [](C& c, S v) { c.experiment.beam_diameter = at_least(v, 0.0, true) * 1e-3; });
        add("cell.doppler_fwhm", [](const C& c) { return optional_text(c.experiment.doppler_fwhm, kMHz); },
            [](C& c, S v) {
                const auto x = optional_at_least(v, 0.0);
                c.experiment.doppler_fwhm = x ? std::optional<double>(*x * kMHz) : std::nullopt;
            });
        add("cell.dicke_narrowing", [](const C& c) { return std::string(c.experiment.dicke_narrowing ? "true" : "false"); },
            [](C& c, S v) { c.experiment.dicke_narrowing = boolean(v); });

        add("field.b", [](const C& c) { return format(c.experiment.field_ut); },
            [](C& c, S v) { c.experiment.field_ut = at_least(v, 0.0); });

        add("scan.mode", [](const C& c) { return std::string(to_string(c.experiment.mode)); },
            [](C& c, S v) {
                if (v == "thick") c.experiment.mode = Mode::thick;
                else if (v == "thin") c.experiment.mode = Mode::thin;
                else if (v == "analytic6") c.experiment.mode = Mode::analytic6;
                else throw BadValue{"expected thick, thin or analytic6, got '" + v + "'"};
            });
        add("scan.detuning_start", [](const C& c) { return format(c.scan.detuning_start_mhz); },
            [](C& c, S v) { c.scan.detuning_start_mhz = number(v); });
        add("scan.detuning_stop", [](const C& c) { return format(c.scan.detuning_stop_mhz); },
            [](C& c, S v) { c.scan.detuning_stop_mhz = number(v); });
        add("scan.detuning_points", [](const C& c) { return std::to_string(c.scan.detuning_points); },
            [](C& c, S v) { c.scan.detuning_points = count(v, 1); });
        add("scan.raman_center", [](const C& c) { return format(c.scan.raman.center_hz); },
            [](C& c, S v) { c.scan.raman.center_hz = number(v); });
        add("scan.raman_half_span", [](const C& c) { return format(c.scan.raman.half_span_hz); },
            [](C& c, S v) { c.scan.raman.half_span_hz = at_least(v, 0.0); });
        add("scan.raman_span_factor", [](const C& c) { return format(c.scan.raman.span_factor); },
            [](C& c, S v) { c.scan.raman.span_factor = at_least(v, 0.0, true); });
        add("scan.raman_points", [](const C& c) { return std::to_string(c.scan.raman.points); },
            [](C& c, S v) { c.scan.raman.points = count(v, 5); });
        add("scan.neighbour_cap", [](const C& c) { return std::string(c.scan.raman.neighbour_cap ? "true" : "false"); },
            [](C& c, S v) { c.scan.raman.neighbour_cap = boolean(v); });
        add("scan.intensities", [](const C& c) { return list_text(c.scan.intensities_mw_cm2); },
            [](C& c, S v) { c.scan.intensities_mw_cm2 = number_list(v); });
        add("scan.variants", [](const C& c) { return std::string(c.scan.standard_variants ? "standard" : "config"); },
            [](C& c, S v) {
                if (v == "config") c.scan.standard_variants = false;
                else if (v == "standard") c.scan.standard_variants = true;
                else throw BadValue{"expected config or standard, got '" + v + "'"};
            });
        add("scan.pol_detuning", [](const C& c) { return format(c.scan.polarization_detuning_mhz); },
            [](C& c, S v) { c.scan.polarization_detuning_mhz = number(v); });
        add("scan.raman_offset", [](const C& c) { return format(c.scan.raman_offset_hz); },
            [](C& c, S v) { c.scan.raman_offset_hz = number(v); });
        add("scan.output", [](const C& c) { return c.output; }, [](C& c, S v) { c.output = v; });

        add("numerics.threads", [](const C& c) { return std::to_string(c.experiment.threads); },
            [](C& c, S v) { c.experiment.threads = count(v, 0); });
        add("numerics.assignment_cutoff", [](const C& c) { return format(c.experiment.assignment_cutoff / kMHz); },
            [](C& c, S v) { c.experiment.assignment_cutoff = at_least(v, 0.0, true) * kMHz; });
        add("numerics.off_resonant_pumping",
            [](const C& c) { return std::string(c.experiment.off_resonant_pumping ? "true" : "false"); },
            [](C& c, S v) { c.experiment.off_resonant_pumping = boolean(v); });
        add("numerics.quadrature",
            [](const C& c) {
                switch (c.experiment.quadrature) {
                    case Quadrature::gauss_hermite: return std::string("hermite");
                    case Quadrature::adaptive: return std::string("adaptive");
                    default: return std::string("auto");
                }
            },
            [](C& c, S v) {
                if (v == "auto") c.experiment.quadrature = Quadrature::automatic;
                else if (v == "hermite") c.experiment.quadrature = Quadrature::gauss_hermite;
                else if (v == "adaptive") c.experiment.quadrature = Quadrature::adaptive;
                else throw BadValue{"expected auto, hermite or adaptive, got '" + v + "'"};
            });
        add("numerics.dipole_scale", [](const C& c) { return format(c.experiment.dipole_scale); },
            [](C& c, S v) { c.experiment.dipole_scale = at_least(v, 0.0, true); });
        add("numerics.responsivity", [](const C& c) { return format(c.experiment.responsivity); },
            [](C& c, S v) { c.experiment.responsivity = at_least(v, 0.0, true); });
        return k;
    }();
    return keys;
}

const Key* find_key(const std::string& path) {
    for (const auto& k : schema())
        if (k.path == path) return &k;
    return nullptr;
}

bool known_section(const std::string& s) {
    for (const auto& k : schema())
        if (k.path.compare(0, s.size() + 1, s + ".") == 0) return true;
    return false;
}

}  // namespace

std::vector<double> ScanSettings::detunings_mhz() const {
    std::vector<double> v(detuning_points);
    for (std::size_t i = 0; i < detuning_points; ++i)
        v[i] = detuning_points == 1 ? detuning_start_mhz
                                    : detuning_start_mhz + (detuning_stop_mhz - detuning_start_mhz) *
                                                               static_cast<double>(i) /
                                                               static_cast<double>(detuning_points - 1);
    return v;
}

bool RunConfig::has_section(const std::string& name) const {
    return std::find(sections.begin(), sections.end(), name) != sections.end();
}

namespace {

RunConfig parse_raw(const std::string& text, const std::string& source) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::vector<std::string> seen;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError(source + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail("malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!known_section(section)) fail("unknown section [" + section + "]");
            if (!cfg.has_section(section)) cfg.sections.push_back(section);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected key = value, got '" + s + "'");
        if (section.empty()) fail("key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        // trailing comment
        for (const char c : {'#', ';'}) {
            const auto pos = value.find(c);
            if (pos != std::string::npos) value = trim(value.substr(0, pos));
        }
        const std::string path = section + "." + key;
        const Key* k = find_key(path);
        if (!k) fail("unknown key " + path);
        if (std::find(seen.begin(), seen.end(), path) != seen.end()) fail("duplicate key " + path);
        seen.push_back(path);
        try {
            k->set(cfg, value);
        } catch (const BadValue& e) {
            fail(path + ": " + e.what);
        }
    }
    if (cfg.scan.detuning_points > 1 && !(cfg.scan.detuning_stop_mhz > cfg.scan.detuning_start_mhz))
        throw ConfigError(source + ": scan.detuning_stop: must exceed scan.detuning_start");
    return cfg;
}

}  // namespace

// Unit conversions do not round-trip bit for bit through decimal text, so the
// parsed values are replaced by the fixpoint of print/parse. A CSV header then
// reproduces exactly the values the run used.
RunConfig parse_config_text(const std::string& text, const std::string& source) {
    RunConfig cfg = parse_raw(text, source);
    std::string printed = to_config_text(cfg);
    for (int i = 0; i < 16; ++i) {
        RunConfig next = parse_raw(printed, source);
        next.sections = cfg.sections;
        std::string again = to_config_text(next);
        cfg = std::move(next);
        if (again == printed) return cfg;
        printed = std::move(again);
    }
    throw ConfigError(source + ": values do not settle under print/parse");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    // a CSV written by write_csv starts with "# run." or "# atom." lines
    if (text.rfind("# ", 0) == 0) {
        const auto eol = text.find('\n');
        const std::string first = text.substr(2, eol == std::string::npos ? std::string::npos : eol - 2);
        const auto eq = first.find('='), dot = first.find('.');
        if (eq != std::string::npos && dot != std::string::npos && dot < eq &&
            first.find(' ') == std::string::npos) {
            return config_from_csv(text);
        }
    }
    return parse_config_text(text, path);
}

std::vector<ConfigEntry> effective_config(const RunConfig& cfg) {
    std::vector<ConfigEntry> out;
    for (const auto& k : schema()) out.emplace_back(k.path, k.get(cfg));
    return out;
}

std::string to_config_text(const RunConfig& cfg) {
    std::string out, section;
    for (const auto& [path, value] : effective_config(cfg)) {
        const auto dot = path.find('.');
        const std::string s = path.substr(0, dot);
        if (s != section) {
            out += (section.empty() ? "[" : "\n[") + s + "]\n";
            section = s;
        }
        out += path.substr(dot + 1) + " = " + value + "\n";
    }
    return out;
}

void write_csv(std::ostream& os, const RunConfig& cfg, const CsvTable& table) {
    for (const auto& [k, v] : table.run) os << "# run." << k << "=" << v << "\n";
    for (const auto& [k, v] : effective_config(cfg)) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format(row[i]);
        os << "\n";
    }
}

RunConfig config_from_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line, text, section;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string path = line.substr(2, eq - 2);
        const auto dot = path.find('.');
        if (dot == std::string::npos || path.find(' ') != std::string::npos || path.compare(0, 4, "run.") == 0)
            continue;
        const std::string s = path.substr(0, dot);
        if (s != section) {
            text += "[" + s + "]\n";
            section = s;
        }
        text += path.substr(dot + 1) + " = " + line.substr(eq + 1) + "\n";
    }
    return parse_config_text(text, "<csv header>");
}

}  // namespace cpt

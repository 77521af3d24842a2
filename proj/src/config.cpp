#include "pns/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace pns {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

// Section -> allowed keys.
const std::map<std::string, std::set<std::string>> kSchema = {
    {"grid", {"d", "n", "l"}},
    {"viscosity", {"mu", "nu"}},
    {"recipe",
     {"kind", "sigma0", "amplitude", "seed", "divergence_mix", "density_sigma",
      "density_amplitude", "calibration"}},
    {"stepper", {"dt", "scheme", "cfl_guard", "vacuum_floor"}},
    {"run", {"experiment", "t_end", "sample_every", "output_dir", "seed"}},
    {"probes", {"list"}},
    {"fit",
     {"window_start", "window_end", "sigmas", "tolerance", "high_tolerance", "band_ratio",
      "stability_gate", "perturbation", "samples_per_octave"}},
};

struct RawEntry {
    std::string value;
    int line = 0;
};

using RawConfig = std::map<std::string, RawEntry>;  // "section.key" -> entry

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Reader {
  public:
    Reader(const RawConfig& raw, std::vector<std::string>& errors)
        : raw_(raw), errors_(errors) {}

    bool has(const std::string& key) const { return raw_.count(key) > 0; }

    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? fallback : it->second.value;
    }

    double num(const std::string& key, double fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            fail(key, it->second, "expected a number, got '" + it->second.value + "'");
            return fallback;
        }
    }

    long integer(const std::string& key, long fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        try {
            std::size_t pos = 0;
            long v = std::stol(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            fail(key, it->second, "expected an integer, got '" + it->second.value + "'");
            return fallback;
        }
    }

    std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            fail(key, it->second, "expected a nonnegative integer, got '" + it->second.value + "'");
            return fallback;
        }
    }

    void fail(const std::string& key, const RawEntry& e, const std::string& what) {
        std::ostringstream msg;
        msg << "line " << e.line << ": " << key << ": " << what;
        errors_.push_back(msg.str());
    }

    void fail_key(const std::string& key, const std::string& what) {
        auto it = raw_.find(key);
        if (it != raw_.end())
            fail(key, it->second, what);
        else
            errors_.push_back(key + ": " + what);
    }

  private:
    const RawConfig& raw_;
    std::vector<std::string>& errors_;
};

}  // namespace

std::string probe_to_string(const ProbeSpec& p) {
    std::ostringstream out;
    out << p.field << ":" << fmt_double(p.spec.s) << ":" << (p.spec.is_inf() ? "inf" : "1")
        << ":" << to_string(p.spec.regime);
    return out.str();
}

ProbeSpec probe_from_string(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 4)
        throw Error(ErrorKind::BadArgument,
                    "probe '" + s + "' must be field:s:r:regime (e.g. u:0:1:all)");
    ProbeSpec p;
    p.field = parts[0];
    if (p.field != "u" && p.field != "a")
        throw Error(ErrorKind::BadArgument, "probe field must be 'u' or 'a' in '" + s + "'");
    p.spec.s = std::stod(parts[1]);
    if (parts[2] == "inf")
        p.spec.r = BesovSpec::kInf;
    else if (parts[2] == "1")
        p.spec.r = 1;
    else
        throw Error(ErrorKind::BadArgument, "probe r must be 1 or inf in '" + s + "'");
    p.spec.regime = regime_from_string(parts[3]);
    return p;
}

RunConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    RawConfig raw;

    // Pass 1: tokenize into section.key -> value with duplicate detection.
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": malformed section header '" +
                                 line + "'");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (kSchema.find(section) == kSchema.end())
                errors.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value, got '" +
                             line + "'");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": key '" + key +
                             "' outside any section");
            continue;
        }
        auto sec = kSchema.find(section);
        if (sec != kSchema.end() && sec->second.find(key) == sec->second.end()) {
            errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key +
                             "' in section [" + section + "]");
            continue;
        }
        std::string full = section + "." + key;
        auto prev = raw.find(full);
        if (prev != raw.end()) {
            errors.push_back("duplicate key '" + full + "' at lines " +
                             std::to_string(prev->second.line) + " and " +
                             std::to_string(lineno));
            continue;
        }
        raw[full] = RawEntry{value, lineno};
    }

    // Pass 2: typed extraction with invariant checks.
    Reader r(raw, errors);
    RunConfig cfg;

    int d = static_cast<int>(r.integer("grid.d", 2));
    int n = static_cast<int>(r.integer("grid.n", 64));
    double length = r.num("grid.l", 64.0);
    if (d != 2 && d != 3) r.fail_key("grid.d", "dimension must be 2 or 3");
    if (n < 16 || n % 2 != 0 || (n & (n - 1)) != 0)
        r.fail_key("grid.n", "grid points per axis must be an even power of two >= 16");
    if (!(length > 0.0)) r.fail_key("grid.l", "box length must be positive");

    double mu = r.num("viscosity.mu", 1.0);
    double nu = r.num("viscosity.nu", 0.0);
    if (!(mu > 0.0)) r.fail_key("viscosity.mu", "mu must satisfy mu > 0");
    if (!(2.0 * mu + nu > 0.0)) r.fail_key("viscosity.nu", "must satisfy 2 mu + nu > 0");

    cfg.seed = r.uinteger("run.seed", 1);

    DataRecipe recipe;
    try {
        recipe.kind = recipe_kind_from_string(r.str("recipe.kind", "lower-bound-class"));
    } catch (const Error& e) {
        r.fail_key("recipe.kind", e.what());
    }
    recipe.sigma0 = r.num("recipe.sigma0", -1.0);
    recipe.amplitude = r.num("recipe.amplitude", 1.0);
    recipe.seed = r.uinteger("recipe.seed", cfg.seed);
    recipe.divergence_mix = r.num("recipe.divergence_mix", 0.5);
    recipe.density_sigma = r.num("recipe.density_sigma", recipe.sigma0 + 1.0);
    recipe.density_amplitude = r.num("recipe.density_amplitude", -1.0);
    std::string calib = r.str("recipe.calibration", "low-norm");
    if (calib == "low-norm")
        recipe.calibration = CalibrationTarget::LowNorm;
    else if (calib == "critical-norm")
        recipe.calibration = CalibrationTarget::CriticalNorm;
    else
        r.fail_key("recipe.calibration", "must be low-norm or critical-norm");
    if (d == 2 || d == 3) {
        double lo = -0.5 * d, hi = 0.5 * d - 1.0;
        if (!(recipe.sigma0 >= lo && recipe.sigma0 < hi)) {
            std::ostringstream msg;
            msg << "sigma0 = " << recipe.sigma0 << " outside the admissible range [" << lo << ", "
                << hi << ")";
            r.fail_key("recipe.sigma0", msg.str());
        }
    }
    if (!(recipe.amplitude >= 0.0)) r.fail_key("recipe.amplitude", "amplitude must be >= 0");
    if (!(recipe.divergence_mix >= 0.0 && recipe.divergence_mix <= 1.0))
        r.fail_key("recipe.divergence_mix", "must lie in [0, 1]");

    StepperConfig stepper;
    stepper.dt = r.num("stepper.dt", 0.05);
    try {
        stepper.scheme = scheme_from_string(r.str("stepper.scheme", "etdrk2"));
    } catch (const Error& e) {
        r.fail_key("stepper.scheme", e.what());
    }
    stepper.cfl_guard = r.num("stepper.cfl_guard", 0.3);
    stepper.vacuum_floor = r.num("stepper.vacuum_floor", 0.1);
    if (!(stepper.dt > 0.0)) r.fail_key("stepper.dt", "dt must be positive");
    if (!(stepper.cfl_guard > 0.0 && stepper.cfl_guard < 1.0))
        r.fail_key("stepper.cfl_guard", "must lie in (0, 1)");
    if (!(stepper.vacuum_floor > 0.0))
        r.fail_key("stepper.vacuum_floor", "must be positive");

    cfg.experiment = r.str("run.experiment", "simulate");
    if (cfg.experiment != "simulate" && cfg.experiment != "linear" &&
        cfg.experiment != "stability" && cfg.experiment != "lower-bound")
        r.fail_key("run.experiment",
                   "must be one of simulate, linear, stability, lower-bound");
    cfg.t_end = r.num("run.t_end", 16.0);
    cfg.sample_every = static_cast<int>(r.integer("run.sample_every", 4));
    if (cfg.sample_every < 1) r.fail_key("run.sample_every", "must be >= 1");
    cfg.output_dir = r.str("run.output_dir", "out");

    if (r.has("probes.list")) {
        for (const auto& item : split(r.str("probes.list", ""), ',')) {
            if (item.empty()) continue;
            try {
                cfg.probes.push_back(probe_from_string(item));
            } catch (const Error& e) {
                r.fail_key("probes.list", e.what());
            }
        }
    }

    cfg.fit.window.t_start = r.num("fit.window_start", 1.0);
    cfg.fit.window.t_end = r.num("fit.window_end", cfg.t_end);
    if (r.has("fit.sigmas")) {
        cfg.fit.sigmas.clear();
        for (const auto& item : split(r.str("fit.sigmas", ""), ',')) {
            if (item.empty()) continue;
            try {
                cfg.fit.sigmas.push_back(std::stod(item));
            } catch (...) {
                r.fail_key("fit.sigmas", "expected a comma-separated list of numbers");
            }
        }
    }
    cfg.fit.tolerance = r.num("fit.tolerance", 0.10);
    cfg.fit.high_tolerance = r.num("fit.high_tolerance", 0.20);
    cfg.fit.band_ratio = r.num("fit.band_ratio", 10.0);
    cfg.fit.stability_gate = r.num("fit.stability_gate", 10.0);
    cfg.fit.perturbation = r.num("fit.perturbation", 1e-3);
    cfg.fit.samples_per_octave = static_cast<int>(r.integer("fit.samples_per_octave", 8));
    if (cfg.fit.samples_per_octave < 1)
        r.fail_key("fit.samples_per_octave", "must be >= 1");
    if (!(cfg.fit.window.t_start >= 0.0 && cfg.fit.window.t_end > cfg.fit.window.t_start))
        r.fail_key("fit.window_end", "fit window must satisfy 0 <= start < end");

    if (!errors.empty()) throw ConfigError(errors);

    cfg.grid = BoxGrid(d, n, length);
    cfg.visc = Viscosity(mu, nu);
    cfg.recipe = recipe;
    cfg.stepper = stepper;
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "d = " << cfg.grid.d << "\n";
    out << "n = " << cfg.grid.n << "\n";
    out << "l = " << fmt_double(cfg.grid.length) << "\n\n";

    out << "[viscosity]\n";
    out << "mu = " << fmt_double(cfg.visc.mu) << "\n";
    out << "nu = " << fmt_double(cfg.visc.nu) << "\n\n";

    out << "[recipe]\n";
    out << "kind = " << to_string(cfg.recipe.kind) << "\n";
    out << "sigma0 = " << fmt_double(cfg.recipe.sigma0) << "\n";
    out << "amplitude = " << fmt_double(cfg.recipe.amplitude) << "\n";
    out << "seed = " << cfg.recipe.seed << "\n";
    out << "divergence_mix = " << fmt_double(cfg.recipe.divergence_mix) << "\n";
    out << "density_sigma = " << fmt_double(cfg.recipe.density_sigma) << "\n";
    out << "density_amplitude = " << fmt_double(cfg.recipe.density_amplitude) << "\n";
    out << "calibration = "
        << (cfg.recipe.calibration == CalibrationTarget::LowNorm ? "low-norm" : "critical-norm")
        << "\n\n";

    out << "[stepper]\n";
    out << "dt = " << fmt_double(cfg.stepper.dt) << "\n";
    out << "scheme = " << to_string(cfg.stepper.scheme) << "\n";
    out << "cfl_guard = " << fmt_double(cfg.stepper.cfl_guard) << "\n";
    out << "vacuum_floor = " << fmt_double(cfg.stepper.vacuum_floor) << "\n\n";

    out << "[run]\n";
    out << "experiment = " << cfg.experiment << "\n";
    out << "t_end = " << fmt_double(cfg.t_end) << "\n";
    out << "sample_every = " << cfg.sample_every << "\n";
    out << "output_dir = " << cfg.output_dir << "\n";
    out << "seed = " << cfg.seed << "\n\n";

    if (!cfg.probes.empty()) {
        out << "[probes]\n";
        out << "list = ";
        for (std::size_t i = 0; i < cfg.probes.size(); ++i) {
            if (i) out << ", ";
            out << probe_to_string(cfg.probes[i]);
        }
        out << "\n\n";
    }

    out << "[fit]\n";
    out << "window_start = " << fmt_double(cfg.fit.window.t_start) << "\n";
    out << "window_end = " << fmt_double(cfg.fit.window.t_end) << "\n";
    out << "sigmas = ";
    for (std::size_t i = 0; i < cfg.fit.sigmas.size(); ++i) {
        if (i) out << ",";
        out << fmt_double(cfg.fit.sigmas[i]);
    }
    out << "\n";
    out << "tolerance = " << fmt_double(cfg.fit.tolerance) << "\n";
    out << "high_tolerance = " << fmt_double(cfg.fit.high_tolerance) << "\n";
    out << "band_ratio = " << fmt_double(cfg.fit.band_ratio) << "\n";
    out << "stability_gate = " << fmt_double(cfg.fit.stability_gate) << "\n";
    out << "perturbation = " << fmt_double(cfg.fit.perturbation) << "\n";
    out << "samples_per_octave = " << cfg.fit.samples_per_octave << "\n";
    return out.str();
}

std::string config_hash(const RunConfig& cfg) {
    std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pns

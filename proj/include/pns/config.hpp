#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pns/data_gen.hpp"
#include "pns/decay.hpp"
#include "pns/solver.hpp"

namespace pns {

// Fit/verdict knobs shared by the experiment pipelines.
struct FitConfig {
    FitWindow window{1.0, 64.0};
    std::vector<double> sigmas{0.0, 1.0};
    double tolerance = 0.10;        // relative slope tolerance
    double high_tolerance = 0.20;   // high-frequency regime tolerance
    double band_ratio = 10.0;       // lower-bound compensated band gate
    double stability_gate = 10.0;   // amplification gate
    double perturbation = 1e-3;     // stability perturbation size on u0
    int samples_per_octave = 8;     // linear-run sampling density
};

struct RunConfig {
    BoxGrid grid{2, 64, 64.0};
    Viscosity visc{1.0, 0.0};
    DataRecipe recipe;
    StepperConfig stepper;
    std::vector<ProbeSpec> probes;
    std::string experiment = "simulate";  // simulate | linear | stability | lower-bound
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    double t_end = 16.0;
    int sample_every = 4;
    FitConfig fit;
};

// Parse the sectioned key=value config grammar. Collects every violation
// (unknown keys, duplicate keys with both line numbers, invariant
// violations with the admissible range cited) into a single ConfigError.
RunConfig parse_config(const std::string& text);

// Canonical serialization; parse_config(serialize_config(c)) reproduces c
// bit-exactly (doubles are printed with round-trip precision).
std::string serialize_config(const RunConfig& cfg);

// FNV-1a hash of the canonical serialization, for run metadata.
std::string config_hash(const RunConfig& cfg);

std::string probe_to_string(const ProbeSpec& p);
ProbeSpec probe_from_string(const std::string& s);

}  // namespace pns

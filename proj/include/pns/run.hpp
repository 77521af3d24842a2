#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pns/checkpoint.hpp"
#include "pns/config.hpp"
#include "pns/decay.hpp"

namespace pns {

inline constexpr const char* kVersionTag = "pnsim 1.0.0";

// One science verdict line: experiment id, predicted, measured, stderr,
// pass/fail.
struct Verdict {
    std::string id;
    double predicted = 0.0;
    double measured = 0.0;
    double stderr_measure = 0.0;
    bool pass = false;
    std::string note;
};

struct ExperimentResult {
    std::vector<Verdict> verdicts;
    nlohmann::json metadata;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

// Invariant suite behind `pnsim verify`: projector algebra, semigroup
// exactness, and Besov-norm oracle equivalence, each against stated
// tolerances and runtime budgets.
ExperimentResult run_verify(const RunConfig& cfg);

// Exact-propagator decay experiment: fits the configured sigmas, checks
// the compensated lower-bound band, and records the analytic envelope.
ExperimentResult run_linear(const RunConfig& cfg);

// Nonlinear run: velocity decay fits, high-frequency rate, density
// boundedness/non-decay, functional evaluation. `from_checkpoint` skips
// data generation and restarts from the stored state.
ExperimentResult run_simulate(const RunConfig& cfg,
                              const std::optional<std::string>& from_checkpoint = std::nullopt);

// Two lockstep pairs (perturbation and perturbation/10): amplification
// gate plus linear-scaling agreement.
ExperimentResult run_stability(const RunConfig& cfg);

// Generate initial data and write it (plus certificate) as a checkpoint.
ExperimentResult run_gen_data(const RunConfig& cfg);

// Instantaneous norms of a checkpoint under the configured probes.
ExperimentResult run_norms(const RunConfig& cfg, const std::string& checkpoint_path);

// Fit a previously written norm-series CSV.
ExperimentResult run_fit(const RunConfig& cfg, const std::string& csv_path);

// Dispatch by subcommand name; writes CSVs, verdict report, and metadata
// into cfg.output_dir. Returns the process exit status (0 pass, 2 verdict
// failure; execution errors throw).
int run(const std::string& subcommand, const RunConfig& cfg,
        const std::optional<std::string>& from_checkpoint, std::ostream& out);

// CSV helpers (schemas fixed: "t,sigma,r,regime,norm" and "t,k,block_norm").
std::string norm_series_csv(const std::vector<NormTrajectory>& trajs, const std::string& field);
std::string block_series_csv(const NormTrajectory& traj);

}  // namespace pns

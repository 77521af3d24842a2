#pragma once

#include <string>

#include <json.hpp>

#include "pns/solver.hpp"

namespace pns {

// Self-describing binary checkpoint: magic + version, a JSON header with
// grid/viscosity/time and arbitrary extra metadata, then the raw complex
// amplitudes of a and u as little-endian doubles. Round trips bit-exactly.
void write_checkpoint(const std::string& path, const FluidState& state,
                      const nlohmann::json& extra = {});

struct Checkpoint {
    FluidState state;
    nlohmann::json header;
};

Checkpoint read_checkpoint(const std::string& path);

}  // namespace pns

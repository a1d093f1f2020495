#pragma once

#include <memory>

#include "phasespace/config.hpp"
#include "phasespace/tvmc.hpp"

namespace phasespace {

/// Builds the initial variational state requested by the config: analytic
/// coherent/cat construction, a saved parameter file, or a least-squares fit
/// against a reference grid.
std::unique_ptr<Ansatz> build_initial_ansatz(const RunConfig& rc);

/// Compiles the generator for (model, qpd) and wires sampler and engine.
std::unique_ptr<TvmcEngine> build_engine(const RunConfig& rc);

}  // namespace phasespace

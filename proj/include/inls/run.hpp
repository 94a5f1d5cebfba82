// Mode dispatch for the command-line front end.
#pragma once

#include <ostream>
#include <string>

#include "inls/config.hpp"

namespace inls {

/// Runs one mode and writes its files under cfg.output_dir. Returns 0 on
/// success and 1 when a verify suite fails. Module errors propagate as
/// inls::Error.
int run(const RunConfig& cfg, std::ostream& log);

/// {"error": {"kind": ..., "message": ...}}
std::string error_json(const std::string& kind, const std::string& message);

/// Worker count for sweep: INLSLAB_THREADS when set and positive, else the
/// hardware concurrency.
unsigned sweep_threads();

}  // namespace inls

// Locale-independent CSV emission and profile reload.
#pragma once

#include <span>
#include <string>

#include "inls/core.hpp"

namespace inls {

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double v);

/// "r,Q" header followed by one row per sample.
std::string profile_csv(const RadialProfile& profile);

/// Header t,mass,energy,grad_sq,variance,variance_rate,virial_rhs.
std::string trajectory_csv(std::span<const InvariantRecord> records);

/// Reads an r,Q table. The derivative is left empty; alpha is Q at the
/// first sample.
RadialProfile read_profile_csv(const std::string& path, const ModelParams& params);

void write_text(const std::string& path, const std::string& text);

}  // namespace inls

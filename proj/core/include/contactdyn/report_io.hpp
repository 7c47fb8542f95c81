#pragma once

// Structured text reports: one `key = value` pair per line, `#` comments.
// Doubles are written with 17 significant digits.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "contactdyn/integrate.hpp"
#include "contactdyn/systems.hpp"
#include "contactdyn/virial.hpp"

namespace contactdyn {

const char* version();

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_metadata(const TrajectoryMetadata& meta, std::ostream& out);
void write_report(const VirialReport& report, std::ostream& out);
void write_report(const EnsembleReport& report, std::ostream& out);

// Columns `t,<term names>,rate,boundary`: running averages from the window
// start up to t. Every `stride`-th sample plus the last one.
void write_running_averages(const SystemSpec& system, const Trajectory& traj, Chart chart,
                            double t_begin, std::ostream& out, std::size_t stride = 1);

KeyValues read_key_values(std::istream& in);
// Value for `key`; throws ParameterError when absent.
const std::string& lookup(const KeyValues& kv, std::string_view key);

}  // namespace contactdyn

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dctfuse/fusion.hpp"
#include "dctfuse/hwmodel.hpp"

namespace dctfuse::cli {

// Entry point of the dctfuse tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// Convenience for tests: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Contents of counts.json for a fusion run.
std::string counts_json(const FusionReport& report);
// Contents of stats.json for a datapath simulation.
std::string stats_json(const hw::CycleStats& stats, const hw::DatapathConfig& cfg);

// Text export of a fused coefficient stream. Fixed streams store raw
// datapath words (value = raw * 2^scale_log2); float streams store
// coefficients with 17 significant digits.
std::string coefficient_stream(const std::vector<FixedCoeffBlock>& blocks, int blocks_x, int blocks_y);
std::string coefficient_stream(const std::vector<CoeffBlock>& blocks, int blocks_x, int blocks_y);

}  // namespace dctfuse::cli

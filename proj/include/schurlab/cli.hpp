#pragma once

#include "schurlab/geom.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace schurlab::cli {

inline constexpr const char* kVersion = "0.1.0";

// master seed used by every randomized subcommand unless --seed overrides
// it; fixed so repeated CI runs compare byte-identical reports
inline constexpr std::uint64_t kDefaultSeed = 42;

inline constexpr int kOk = 0;         // all asserted properties passed
inline constexpr int kUsageError = 1;  // bad flags, unreadable input, or IO
inline constexpr int kViolation = 2;   // a property failed; witness written

// Writes a violation witness file. When `config` is present its space and
// points are inlined at the top level, so the same file feeds --input for
// replay; the violating report fields and the run manifest ride alongside.
void write_witness(const std::string& path,
                   const nlohmann::ordered_json& manifest,
                   const nlohmann::ordered_json& payload,
                   const std::optional<PointConfig>& config);

// Parses and executes one invocation (program name excluded). Report lines
// go to `out` unless --out redirects them to a file; diagnostics go to
// `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace schurlab::cli

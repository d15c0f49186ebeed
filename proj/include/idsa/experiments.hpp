#pragma once

#include <exception>
#include <iosfwd>
#include <string>

#include "idsa/config.hpp"

namespace idsa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

/// Exit code for an exception escaping an experiment.
auto exit_code_for(const std::exception &e) -> int;

/// Machine-readable error record (JSON text) for an exception.
auto error_record(const std::exception &e) -> std::string;

/// Writes `content` to `path` through a temporary file in the same
/// directory and a rename. Throws IoError.
void write_atomically(const std::string &path, const std::string &content);

/// Runs one experiment, writing its CSV files, manifest.json and, on
/// failure, error.json into config.output_dir. Progress lines go to `log`.
/// Returns the process exit code.
auto run(const RunConfig &config, std::ostream &log) -> int;

}  // namespace idsa

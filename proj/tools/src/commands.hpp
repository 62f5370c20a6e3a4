#pragma once

#include <string>

#include "config.hpp"

namespace mfsde::cli {

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_config = 2;

inline const char* const suite_names[] = {"kernel", "lemma", "selfsim", "moments", "jumps"};

/// Each command writes its files plus manifest.txt into `out` and returns
/// the process exit status.
int cmd_simulate(const RunConfig& c, const std::string& out);
int cmd_verify(const RunConfig& c, const std::string& suite, const std::string& out,
               bool double_kappa = false);
int cmd_convergence(const RunConfig& c, const std::string& out);

/// Reruns the command recorded in a manifest into `out` and compares the
/// artifact hashes. Returns exit_fail on any mismatch, otherwise the rerun's
/// status.
int cmd_replay(const std::string& manifest_path, const std::string& out);

}  // namespace mfsde::cli

#pragma once

#include "obmbo/scheme.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace obmbo::cli {

/// Bad configuration or usage; maps to exit code 2. Runtime failures keep
/// std::runtime_error and map to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Commands return process exit codes: 0 success, 1 runtime failure,
/// 2 configuration error. They print their own diagnostics to stderr.
int cmd_run(const std::string& config_path);
int cmd_invasion(const std::string& config_path);
int cmd_study(const std::string& config_path);
int cmd_bench(const std::vector<int>& sizes, double h, int iters,
              const std::string& out_csv);
int cmd_verify(const std::string& suite);
int cmd_render(const std::string& state_path, const std::string& out_path,
               const std::string& phi_path = "", const std::string& psi_path = "");

/// Deterministic metrics serialization shared by commands and tests.
std::string metrics_csv(const RunRecord& record);

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kThreadsEnvVar = "OBSTACLE_MBO_THREADS";

/// Value of OBSTACLE_MBO_THREADS clamped to [1, 64]; 1 when unset or
/// unparsable.
int worker_threads();

} // namespace obmbo::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace nadegen {

enum class Task { DualComplex, MaMeasure, CurveLimit, Skeleton, Retraction, Blowup, HybridSim, ChartCheck };

/// Throws ValidationError for unknown names.
Task parse_task(std::string_view name);
std::string_view task_name(Task task);

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDomain = 3;

/// Command-line values that take precedence over the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::vector<double>> t;
  std::optional<double> epsilon;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
};

struct RunOutput {
  std::string text;
  /// "json" or "csv".
  std::string format;
};

/// Validates `config` against the shipped schema and the task's required
/// blocks, then computes. Throws ValidationError or DomainError.
RunOutput execute(Task task, const nlohmann::json& config);

/// Merges overrides into a parsed config.
nlohmann::json apply_overrides(nlohmann::json config, const RunOverrides& overrides);

/// Writes `text` to a temporary file next to `path` and renames it into place.
void write_atomically(const std::filesystem::path& path, std::string_view text);

/// Full CLI flow: load, override, validate, execute, write. Returns the exit
/// status and prints a one-line diagnostic to `err` on failure. Output goes to
/// the configured path, or to `out` when none is set.
int run(std::string_view task, const std::filesystem::path& config_path, const RunOverrides& overrides,
        std::ostream& out, std::ostream& err);

}  // namespace nadegen

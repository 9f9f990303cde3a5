#pragma once

// Subcommand bodies. Each returns the process exit code:
// 0 success, 1 verify found failing checks, 2 config or validation error,
// 3 runtime regularity failure.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace cnduality::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

using TolMap = std::map<std::string, double>;

struct SimulateArgs {
    std::string config_path;
    std::string out_path;
    bool emit_plot_data = false;
    TolMap tol;
};

struct DualizeArgs {
    std::string config_path;
    std::string direction;  // "", "s2r" or "r2s"
    TolMap tol;
};

struct VerifyArgs {
    std::uint64_t seed = 1;
    int n_max = 4;
    int draws = 200;
    std::string report_path;
    TolMap tol;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_dualize(const DualizeArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

/// Shortest text that is stable across runs: 17 significant digits.
std::string format_real(double v);

/// `dir/name.ext` -> `dir/name.<tag>.ext`; without an extension the tag is appended.
std::string tagged_path(const std::string& path, const std::string& tag);

}  // namespace cnduality::cli

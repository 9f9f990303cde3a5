#pragma once

// Run configuration for the command-line tool: a flat JSON object.
//
//   {
//     "model": "rsvd",            // or "sutherland"
//     "n": 1, "g": 1.0, "g2": 1.0,
//     "initial_state": [1.0, 0.0],  // (q, p) or (lambda, theta), 2n numbers
//     "t_end": 2.0, "samples": 5,
//     "solver": "spectral",       // "rk4" or "both"
//     "seed": 1,
//     "rk4_dt": 1e-3,
//     "sidecar": true,
//     "tolerances": {"gap": 1e-6}
//   }
//
// `dualize` also accepts "states": [[...], ...] in place of "initial_state".

#include "cnduality/matkit.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cnduality::cli {

enum class Model { Sutherland, Rsvd };
enum class Solver { Spectral, Rk4, Both };

struct RunConfig {
    Model model = Model::Rsvd;
    int n = 1;
    double g = 1.0;
    double g2 = 1.0;
    std::vector<RealVector> states;  // one entry unless a batch was given
    double t_end = 0.0;
    int samples = 2;
    Solver solver = Solver::Spectral;
    std::uint64_t seed = 1;
    double rk4_dt = 1e-3;
    bool sidecar = true;
    std::map<std::string, double> tolerances;
};

enum class Purpose { Simulate, Dualize };

/// Parses and validates. Throws Error(ConfigError) or Error(DomainError) with
/// a message naming the offending key.
RunConfig parse_config_text(const std::string& text, Purpose purpose);
RunConfig load_config(const std::string& path, Purpose purpose);

/// "name=value" pairs from repeated --tol flags.
std::map<std::string, double> parse_tol_flags(const std::vector<std::string>& flags);

const char* to_string(Model m);
const char* to_string(Solver s);

}  // namespace cnduality::cli

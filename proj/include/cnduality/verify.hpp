#pragma once

// Randomized verification suite. Each named check draws its own states from
// a stream derived from (seed, name), so records do not depend on which
// checks run or in what order, and the report is identical across runs.

#include "cnduality/matkit.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace cnduality {

struct CheckRecord {
    std::string name;
    std::string anchor;  // the identity being checked, written out
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string error;  // set when the check threw instead of finishing
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int n_max = 0;
    int draws = 0;
    std::vector<CheckRecord> checks;  // sorted by name

    bool all_pass() const noexcept;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int n_max = 4;
    // Base sample size. Structure checks use 5/2 of it, roundtrips and
    // constraints use it as is, brackets a quarter, flows a fortieth.
    int draws = 200;
    // 0 means: read CN_DUALITY_THREADS, sequential when unset.
    int threads = 0;
    std::map<std::string, double> tol_overrides;
    // Replaces the closed-form gradient of tr(y y^*)/2 in the checks that use
    // it. Meant for mutation testing.
    std::function<CxMatrix(const CxMatrix&)> grad_f1_override;
};

/// Names of all checks, sorted.
std::vector<std::string> check_names();

/// Runs one check by name. Throws ConfigError for an unknown name.
CheckRecord run_check(const std::string& name, const VerifyOptions& opt);

VerifyReport run_verify(const VerifyOptions& opt);

/// Thread count from CN_DUALITY_THREADS (1 when unset or invalid).
int threads_from_env();

}  // namespace cnduality

#pragma once

// Deterministic random draws of couplings and phase-space points for the
// property suites. Same seed, same draws, on any platform: the uniform
// variate is built from raw mt19937_64 output rather than a std distribution.

#include "cnduality/phase_space.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace cnduality {

/// FNV-1a, used to give every named check its own stream.
std::uint64_t name_hash(std::string_view name) noexcept;

double coupling_scale(const CouplingParams& c) noexcept;

struct StateRanges {
    double first_lo = 0.2;  // smallest chamber coordinate
    double first_hi = 0.8;
    double gap_lo = 0.3;    // spacing between neighbours
    double gap_hi = 0.9;
    double mom = 0.8;       // |p| or |theta| bound
};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed);
    Sampler(std::uint64_t seed, std::string_view stream);

    double uniform(double lo, double hi);
    int integer(int lo, int hi);  // inclusive
    double sign();

    /// Decreasing positive vector with the given spacing ranges.
    RealVector chamber(Eigen::Index n, const StateRanges& r);
    RealVector box(Eigen::Index n, double bound);

    /// |g|, |g2| uniform in [lo, hi] with random signs.
    CouplingParams couplings(double lo = 0.25, double hi = 3.0);

    SutherlandState sutherland(Eigen::Index n, const StateRanges& r = {});
    RsvdState rsvd(Eigen::Index n, const StateRanges& r = {});

    /// Draws in units of the coupling scale max(|g|, |g2|): p for Sutherland,
    /// lambda for RSvD. The Lax matrices depend on lambda/g and g2/g only, so
    /// this keeps their conditioning independent of the coupling draw.
    SutherlandState sutherland(Eigen::Index n, const CouplingParams& c, const StateRanges& r = {});
    RsvdState rsvd(Eigen::Index n, const CouplingParams& c, const StateRanges& r = {});

    /// Real and imaginary parts uniform in [-bound, bound].
    CxVector complex_vector(Eigen::Index n, double bound);

private:
    std::mt19937_64 gen_;
};

}  // namespace cnduality

#include "cnduality/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace cnduality {

std::uint64_t name_hash(std::string_view name) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char ch : name) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

double coupling_scale(const CouplingParams& c) noexcept { return std::max(std::abs(c.g()), std::abs(c.g2())); }

Sampler::Sampler(std::uint64_t seed) : gen_(seed) {}

Sampler::Sampler(std::uint64_t seed, std::string_view stream) : gen_(seed ^ name_hash(stream)) {}

double Sampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

int Sampler::integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(gen_() % span);
}

double Sampler::sign() { return (gen_() >> 63) ? 1.0 : -1.0; }

RealVector Sampler::chamber(Eigen::Index n, const StateRanges& r) {
    RealVector v(n);
    double cur = uniform(r.first_lo, r.first_hi);
    for (Eigen::Index a = n - 1; a >= 0; --a) {
        v(a) = cur;
        cur += uniform(r.gap_lo, r.gap_hi);
    }
    return v;
}

RealVector Sampler::box(Eigen::Index n, double bound) {
    RealVector v(n);
    for (Eigen::Index a = 0; a < n; ++a) v(a) = uniform(-bound, bound);
    return v;
}

CouplingParams Sampler::couplings(double lo, double hi) {
    const double g = sign() * uniform(lo, hi);
    const double g2 = sign() * uniform(lo, hi);
    return {g, g2};
}

SutherlandState Sampler::sutherland(Eigen::Index n, const StateRanges& r) {
    SutherlandState s;
    s.q = chamber(n, r);
    s.p = box(n, r.mom);
    return s;
}

RsvdState Sampler::rsvd(Eigen::Index n, const StateRanges& r) {
    RsvdState st;
    st.lambda = chamber(n, r);
    st.theta = box(n, r.mom);
    return st;
}

SutherlandState Sampler::sutherland(Eigen::Index n, const CouplingParams& c, const StateRanges& r) {
    SutherlandState s = sutherland(n, r);
    s.p *= coupling_scale(c);
    return s;
}

RsvdState Sampler::rsvd(Eigen::Index n, const CouplingParams& c, const StateRanges& r) {
    RsvdState st = rsvd(n, r);
    st.lambda *= coupling_scale(c);
    return st;
}

CxVector Sampler::complex_vector(Eigen::Index n, double bound) {
    CxVector v(n);
    for (Eigen::Index a = 0; a < n; ++a) v(a) = cplx(uniform(-bound, bound), uniform(-bound, bound));
    return v;
}

}  // namespace cnduality

#include "cnduality/phase_space.hpp"

#include "cnduality/errors.hpp"

#include <cmath>
#include <sstream>

namespace cnduality {

CouplingParams::CouplingParams(double g, double g2) : g_(g), g2_(g2) {
    if (!(std::isfinite(g) && std::isfinite(g2)) || g == 0.0 || g2 == 0.0) {
        std::ostringstream os;
        os << "coupling constants must be finite and non-zero (g=" << g << ", g2=" << g2 << ")";
        throw Error(ErrorKind::DomainError, os.str());
    }
}

bool CouplingParams::at_exceptional_ratio() const noexcept {
    return std::abs(g2_ - 2.0 * g_) <= 1e-12 * std::abs(g_);
}

bool in_chamber(const RealVector& v, double margin) noexcept {
    const auto n = v.size();
    if (n == 0 || !v.allFinite()) return false;
    if (!(v(n - 1) > margin)) return false;
    for (Eigen::Index a = 0; a + 1 < n; ++a) {
        if (!(v(a) - v(a + 1) > margin)) return false;
    }
    return true;
}

void require_chamber(const RealVector& v, double margin, const char* what) {
    if (in_chamber(v, margin)) return;
    std::ostringstream os;
    os << what << " = (";
    for (Eigen::Index a = 0; a < v.size(); ++a) os << (a ? ", " : "") << v(a);
    os << ") is not strictly decreasing and positive (margin " << margin << ")";
    throw Error(ErrorKind::DomainError, os.str());
}

void validate(const SutherlandState& s, double margin) {
    if (s.q.size() != s.p.size())
        throw Error(ErrorKind::InvalidDimension, "Sutherland state: q and p differ in length");
    if (!s.p.allFinite()) throw Error(ErrorKind::DomainError, "Sutherland state: p is not finite");
    require_chamber(s.q, margin, "q");
}

void validate(const RsvdState& s, double margin) {
    if (s.lambda.size() != s.theta.size())
        throw Error(ErrorKind::InvalidDimension, "RSvD state: lambda and theta differ in length");
    if (!s.theta.allFinite()) throw Error(ErrorKind::DomainError, "RSvD state: theta is not finite");
    require_chamber(s.lambda, margin, "lambda");
}

}  // namespace cnduality

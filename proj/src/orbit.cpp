#include "cnduality/orbit.hpp"

#include "cnduality/errors.hpp"

#include <sstream>

namespace cnduality {

CxVector orbit_vector_E(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidDimension, "orbit_vector_E: n must be at least 1");
    const auto m = static_cast<Eigen::Index>(n);
    CxVector E(2 * m);
    E.head(m).setOnes();
    E.tail(m).setConstant(-1.0);
    return E;
}

CxMatrix xi_of(const CxVector& V, const CouplingParams& c, double tol) {
    const auto N = V.size();
    if (N == 0 || N % 2 != 0) throw Error(ErrorKind::InvalidDimension, "xi_of: V must have even length");
    const auto n = N / 2;
    const double norm_gap = std::abs(V.squaredNorm() - static_cast<double>(N));
    const double c_gap = (V.head(n) + V.tail(n)).norm() * std::sqrt(2.0);  // ||CV + V||
    if (norm_gap > tol || c_gap > tol) {
        std::ostringstream os;
        os << "xi_of: |V^*V - N| = " << norm_gap << ", ||CV + V|| = " << c_gap;
        throw Error(ErrorKind::InvalidOrbitVector, os.str());
    }
    const cplx I(0.0, 1.0);
    const CxMatrix C = build_C(static_cast<std::size_t>(n));
    return I * c.g() * (V * V.adjoint() - CxMatrix::Identity(N, N)) + I * (c.g() - c.g2()) * C;
}

double constraint_residual(const CxMatrix& y, const CxMatrix& Y, const CxMatrix& rho) {
    const CxMatrix conj = y * Y * y.partialPivLu().inverse();
    return (decompose_kp(conj).plus + rho).norm() + decompose_kp(Y).plus.norm();
}

}  // namespace cnduality

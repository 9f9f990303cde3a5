#include "cnduality/duality.hpp"

#include "cnduality/errors.hpp"
#include "cnduality/rsvd.hpp"
#include "cnduality/sutherland.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cnduality {

namespace {

// Compares two Hermitian matrices modulo conjugation by diagonal phases:
// sorted spectra and entrywise moduli.
DualityDiagnostics compare_gauge_free(const CxMatrix& built, const CxMatrix& rebuilt) {
    DualityDiagnostics d;
    const double scale = std::max(1.0, built.cwiseAbs().maxCoeff());
    const RealVector e1 = Eigen::SelfAdjointEigenSolver<CxMatrix>(0.5 * (built + built.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
    const RealVector e2 = Eigen::SelfAdjointEigenSolver<CxMatrix>(0.5 * (rebuilt + rebuilt.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
    d.spectrum_mismatch = (e1 - e2).cwiseAbs().maxCoeff() / scale;
    d.modulus_mismatch = (built.cwiseAbs() - rebuilt.cwiseAbs()).cwiseAbs().maxCoeff() / scale;
    return d;
}

void require_consistent(const DualityDiagnostics& d, const char* who) {
    if (d.spectrum_mismatch <= kDualSpectrumTol && d.modulus_mismatch <= kDualModulusTol) return;
    std::ostringstream os;
    os << who << ": image point does not reproduce the Lax matrix (spectrum mismatch " << d.spectrum_mismatch
       << ", modulus mismatch " << d.modulus_mismatch << ")";
    throw Error(ErrorKind::StructureViolation, os.str());
}

}  // namespace

SToR dualize_s_to_r_checked(const SutherlandState& s, const CouplingParams& c, const SpectralTol& tol) {
    const auto n = s.n();
    const PairedSpectrum ps = eig_paired_p(lax_l(s, c), tol);
    const CxMatrix& eta_r = ps.frame.mat;
    const CxMatrix A_rec = eta_r.adjoint() * paired_exp_diag(2.0 * s.q) * eta_r;

    SToR out;
    out.state.lambda = ps.positive_part;
    const CxVector z = z_values(RsvdState{out.state.lambda, RealVector::Zero(n)}, c);
    out.state.theta.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        out.diagnostics.imag_residue = std::max(out.diagnostics.imag_residue, std::abs(A_rec(a, a).imag()));
        out.state.theta(a) = 0.5 * std::log(A_rec(a, a).real() / std::abs(z(a)));
    }

    const DualityDiagnostics cmp = compare_gauge_free(lax_a_compact(out.state, c), A_rec);
    out.diagnostics.spectrum_mismatch = cmp.spectrum_mismatch;
    out.diagnostics.modulus_mismatch = cmp.modulus_mismatch;
    require_consistent(out.diagnostics, "dualize_s_to_r");
    return out;
}

RsvdState dualize_s_to_r(const SutherlandState& s, const CouplingParams& c, const SpectralTol& tol) {
    return dualize_s_to_r_checked(s, c, tol).state;
}

RToS dualize_r_to_s_checked(const RsvdState& st, const CouplingParams& c, const SpectralTol& tol) {
    const auto n = st.n();
    const RsvdLaxBundle b = lax_a(st, c);
    const PairedSpectrum ps = eig_paired_expp(b.A, tol);
    // A^{1/2} = eta_L e^Q eta_R^{-1}, hence eta_R = A^{-1/2} eta_L e^Q.
    const CxMatrix eta_r = b.R.llt().solve(ps.frame.mat * paired_exp_diag(ps.positive_part));
    const CxMatrix L_rec = eta_r.adjoint() * paired_diag(st.lambda) * eta_r;

    RToS out;
    out.state.q = ps.positive_part;
    out.state.p.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        out.diagnostics.imag_residue = std::max(out.diagnostics.imag_residue, std::abs(L_rec(a, a).imag()));
        out.state.p(a) = L_rec(a, a).real();
    }

    const DualityDiagnostics cmp = compare_gauge_free(lax_l(out.state, c), L_rec);
    out.diagnostics.spectrum_mismatch = cmp.spectrum_mismatch;
    out.diagnostics.modulus_mismatch = cmp.modulus_mismatch;
    require_consistent(out.diagnostics, "dualize_r_to_s");
    return out;
}

SutherlandState dualize_r_to_s(const RsvdState& st, const CouplingParams& c, const SpectralTol& tol) {
    return dualize_r_to_s_checked(st, c, tol).state;
}

ActionAngle pullback_coords(const SutherlandState& s, const CouplingParams& c) {
    RsvdState r = dualize_s_to_r(s, c);
    return {std::move(r.lambda), std::move(r.theta)};
}

ActionAngle pullback_coords_r(const RsvdState& st, const CouplingParams& c) {
    SutherlandState s = dualize_r_to_s(st, c);
    return {std::move(s.q), std::move(s.p)};
}

}  // namespace cnduality

#include "check_error.hpp"

#include "cnduality/rsvd.hpp"
#include "cnduality/verify.hpp"

#include <algorithm>
#include <cstring>

using namespace cnduality;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void check_identical(const VerifyReport& a, const VerifyReport& b) {
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t k = 0; k < a.checks.size(); ++k) {
        CHECK(a.checks[k].name == b.checks[k].name);
        CHECK(same_bits(a.checks[k].max_residual, b.checks[k].max_residual));
        CHECK(a.checks[k].pass == b.checks[k].pass);
    }
}

}  // namespace

TEST_CASE("suite composition") {
    const auto names = check_names();
    CHECK(names.size() >= 18);
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
    for (const char* must : {"flows.rsvd_vs_rk4", "flows.sutherland_vs_rk4", "rsvd.lax_group", "rsvd.orbit_vector",
                             "duality.roundtrip_s2r2s", "brackets.sutherland_side", "cauchy.identities"})
        CHECK(std::find(names.begin(), names.end(), must) != names.end());
}

TEST_CASE("default run passes and is reproducible") {
    VerifyOptions opt;
    const VerifyReport a = run_verify(opt);
    CHECK(a.checks.size() == check_names().size());
    for (const auto& r : a.checks) {
        CHECK_MESSAGE(r.pass, r.name << " residual " << r.max_residual << " tol " << r.tolerance << " " << r.error);
        CHECK_FALSE(r.anchor.empty());
    }
    CHECK(a.all_pass());

    opt.threads = 4;
    check_identical(a, run_verify(opt));
}

TEST_CASE("n_max = 1 still runs every check") {
    VerifyOptions opt;
    opt.n_max = 1;
    opt.draws = 40;
    const VerifyReport rep = run_verify(opt);
    CHECK_FALSE(rep.checks.empty());
    CHECK(rep.all_pass());
}

TEST_CASE("mutation: a sign error in grad f1 is caught by the flow cross-check") {
    VerifyOptions opt;
    opt.draws = 80;
    opt.grad_f1_override = [](const CxMatrix& y) { return CxMatrix(-grad_f1(y)); };
    const CheckRecord flow = run_check("flows.rsvd_vs_rk4", opt);
    CHECK_FALSE(flow.pass);
    CHECK(flow.max_residual > flow.tolerance);
    CHECK_FALSE(run_check("gradient.fd", opt).pass);

    opt.grad_f1_override = nullptr;
    CHECK(run_check("flows.rsvd_vs_rk4", opt).pass);
}

TEST_CASE("tolerance overrides and option errors") {
    VerifyOptions opt;
    opt.draws = 20;
    opt.tol_overrides["rsvd.lax_group"] = 1e-300;
    const auto rec = run_check("rsvd.lax_group", opt);
    CHECK(rec.tolerance == 1e-300);
    CHECK_FALSE(rec.pass);

    CHECK_ERROR_KIND(run_check("no.such.check", opt), ErrorKind::ConfigError);
    opt.tol_overrides = {{"no.such.check", 1.0}};
    CHECK_ERROR_KIND(run_verify(opt), ErrorKind::ConfigError);
    opt.tol_overrides.clear();
    opt.n_max = 0;
    CHECK_ERROR_KIND(run_verify(opt), ErrorKind::ConfigError);
    opt.n_max = 2;
    opt.draws = 0;
    CHECK_ERROR_KIND(run_verify(opt), ErrorKind::ConfigError);
}

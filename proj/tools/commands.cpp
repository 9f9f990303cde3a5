#include "commands.hpp"

#include "config.hpp"

#include "cnduality/duality.hpp"
#include "cnduality/errors.hpp"
#include "cnduality/oracle.hpp"
#include "cnduality/rsvd.hpp"
#include "cnduality/sutherland.hpp"
#include "cnduality/verify.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cnduality::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

bool is_config_kind(ErrorKind k) { return k == ErrorKind::ConfigError || k == ErrorKind::DomainError; }

json to_json(const RealVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

double sup_diff(const RealVector& a, const RealVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Config tolerances first, then --tol flags on top. Keys outside `defaults`
// are rejected so a typo never silently falls back to a default.
TolMap merge_tolerances(const TolMap& from_config, const TolMap& from_flags, const TolMap& defaults) {
    TolMap tol = defaults;
    for (const TolMap* src : {&from_config, &from_flags}) {
        for (const auto& [k, v] : *src) {
            if (!defaults.count(k)) {
                std::string known;
                for (const auto& d : defaults) known += (known.empty() ? "" : ", ") + d.first;
                config_error("unknown tolerance '" + k + "' (known: " + known + ")");
            }
            tol[k] = v;
        }
    }
    return tol;
}

SpectralTol spectral_tol(const TolMap& tol) { return {tol.at("structure"), tol.at("gap")}; }

// ---- simulate ----------------------------------------------------------

struct Row {
    double t = 0.0;
    RealVector pos;  // q or lambda
    RealVector mom;  // p or theta
    double energy = 0.0;
    RealVector actions;  // lambda_hat or q_check
};

struct Series {
    std::string solver;
    std::vector<Row> rows;
    bool aborted = false;
    double last_safe_t = 0.0;
    std::string abort_reason;
    double richardson_error = kNaN;
    double dt = kNaN;
};

struct Dynamics {
    Model kind;
    CouplingParams c;
    SpectralTol tol;

    Row row(double t, const RealVector& pos, const RealVector& mom) const {
        Row r{t, pos, mom, 0.0, {}};
        if (kind == Model::Sutherland) {
            const SutherlandState s{pos, mom};
            r.energy = hamiltonian_s(s, c);
            r.actions = action_variables(s, c, tol);
        } else {
            const RsvdState s{pos, mom};
            r.energy = hamiltonian_r(s, c);
            r.actions = dual_actions(s, c, tol);
        }
        return r;
    }
};

void mark_abort(Series& s, const Error& e, double fallback_t) {
    s.aborted = true;
    s.last_safe_t = e.last_safe_t().value_or(fallback_t);
    s.abort_reason = e.what();
}

Series run_spectral(const Dynamics& m, const RealVector& x0, const std::vector<double>& times) {
    Series out{"spectral", {}, false, 0.0, {}, kNaN, kNaN};
    const Eigen::Index n = x0.size() / 2;
    double prev_t = 0.0;
    for (const double t : times) {
        try {
            if (m.kind == Model::Sutherland) {
                const auto s = solve_flow_s({x0.head(n), x0.tail(n)}, m.c, t, m.tol);
                out.rows.push_back(m.row(t, s.q, s.p));
            } else {
                const auto s = solve_flow_r({x0.head(n), x0.tail(n)}, m.c, t, m.tol);
                out.rows.push_back(m.row(t, s.lambda, s.theta));
            }
        } catch (const Error& e) {
            if (is_config_kind(e.kind())) throw;
            mark_abort(out, e, prev_t);
            break;
        }
        prev_t = t;
    }
    return out;
}

template <class State>
void collect_rk4(Series& out, const Dynamics& m, const Trajectory<State>& traj) {
    out.richardson_error = traj.richardson_error;
    out.dt = traj.dt;
    double prev_t = 0.0;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        try {
            if constexpr (std::is_same_v<State, SutherlandState>)
                out.rows.push_back(m.row(traj.t[i], traj.states[i].q, traj.states[i].p));
            else
                out.rows.push_back(m.row(traj.t[i], traj.states[i].lambda, traj.states[i].theta));
        } catch (const Error& e) {
            mark_abort(out, e, prev_t);
            return;
        }
        prev_t = traj.t[i];
    }
    if (traj.aborted) {
        out.aborted = true;
        out.last_safe_t = traj.last_safe_t;
        out.abort_reason = traj.abort_reason;
    }
}

Series run_rk4(const Dynamics& m, const RealVector& x0, const std::vector<double>& times, double dt, double target) {
    Series out{"rk4", {}, false, 0.0, {}, kNaN, kNaN};
    const Eigen::Index n = x0.size() / 2;
    Rk4Options opt;
    opt.dt = dt;
    opt.richardson = true;
    opt.richardson_target = target;
    opt.keep_partial = true;
    if (m.kind == Model::Sutherland)
        collect_rk4(out, m, rk4_sutherland_at({x0.head(n), x0.tail(n)}, m.c, times, opt));
    else
        collect_rk4(out, m, rk4_rsvd_at({x0.head(n), x0.tail(n)}, m.c, times, opt));
    return out;
}

std::string csv_header(Model kind, int n) {
    const bool s = kind == Model::Sutherland;
    std::string h = "t";
    for (const char* prefix : {s ? "q_" : "lambda_", s ? "p_" : "theta_"})
        for (int a = 1; a <= n; ++a) h += "," + std::string(prefix) + std::to_string(a);
    h += ",energy";
    for (int a = 1; a <= n; ++a) h += std::string(s ? ",lambda_hat_" : ",q_check_") + std::to_string(a);
    return h + "\n";
}

std::string csv_text(const Series& s, Model kind, int n) {
    std::string text = csv_header(kind, n);
    for (const auto& r : s.rows) {
        std::string line = format_real(r.t);
        for (const RealVector* v : {&r.pos, &r.mom})
            for (Eigen::Index a = 0; a < v->size(); ++a) line += "," + format_real((*v)(a));
        line += "," + format_real(r.energy);
        for (Eigen::Index a = 0; a < r.actions.size(); ++a) line += "," + format_real(r.actions(a));
        text += line + "\n";
    }
    return text;
}

// Whitespace-separated columns: t, energy, then the position-like coordinates.
std::string plot_text(const Series& s, Model kind, int n) {
    std::string text = "# t energy";
    for (int a = 1; a <= n; ++a) text += std::string(kind == Model::Sutherland ? " q_" : " lambda_") + std::to_string(a);
    text += "\n";
    for (const auto& r : s.rows) {
        std::string line = format_real(r.t) + " " + format_real(r.energy);
        for (Eigen::Index a = 0; a < r.pos.size(); ++a) line += " " + format_real(r.pos(a));
        text += line + "\n";
    }
    return text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) config_error("cannot write '" + path + "'");
    f << text;
    if (!f.flush()) config_error("write to '" + path + "' failed");
}

json series_summary(const Series& s) {
    double e_drift = 0.0, a_drift = 0.0;
    for (const auto& r : s.rows) {
        e_drift = std::max(e_drift, std::abs(r.energy - s.rows.front().energy));
        a_drift = std::max(a_drift, sup_diff(r.actions, s.rows.front().actions));
    }
    json j{{"rows", s.rows.size()}, {"energy_drift", e_drift}, {"action_drift", a_drift}};
    if (s.solver == "rk4") {
        j["dt"] = s.dt;
        j["richardson_error"] = s.richardson_error;
    }
    return j;
}

json config_echo(const RunConfig& cfg, const TolMap& tol) {
    return json{{"model", to_string(cfg.model)}, {"n", cfg.n},
                {"g", cfg.g},
                {"g2", cfg.g2},
                {"initial_state", to_json(cfg.states.front())},
                {"t_end", cfg.t_end},
                {"samples", cfg.samples},
                {"solver", to_string(cfg.solver)},
                {"seed", cfg.seed},
                {"rk4_dt", cfg.rk4_dt},
                {"tolerances", tol}};
}

int simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_config(args.config_path, Purpose::Simulate);
    const TolMap tol = merge_tolerances(cfg.tolerances, args.tol,
                                        {{"structure", kStructureTol}, {"gap", kRegularityTol}, {"solver_agreement", 1e-5}});
    const Dynamics model{cfg.model, CouplingParams(cfg.g, cfg.g2), spectral_tol(tol)};

    std::vector<double> times(static_cast<std::size_t>(cfg.samples));
    for (int i = 0; i < cfg.samples; ++i) times[i] = cfg.t_end * i / (cfg.samples - 1);

    json warnings = json::array();
    if (model.c.at_exceptional_ratio()) warnings.push_back("g2 = 2g sits on the edge of the covered coupling range");

    std::vector<Series> runs;
    if (cfg.solver != Solver::Rk4) runs.push_back(run_spectral(model, cfg.states.front(), times));
    if (cfg.solver != Solver::Spectral)
        runs.push_back(run_rk4(model, cfg.states.front(), times, cfg.rk4_dt, tol.at("solver_agreement") * 1e-2));

    json sidecar{{"config", config_echo(cfg, tol)}, {"outputs", json::array()}, {"runs", json::object()}};
    for (const auto& s : runs) {
        const std::string path = cfg.solver == Solver::Both ? tagged_path(args.out_path, s.solver) : args.out_path;
        write_file(path, csv_text(s, cfg.model, cfg.n));
        if (args.emit_plot_data) write_file(path + ".plot.dat", plot_text(s, cfg.model, cfg.n));
        sidecar["outputs"].push_back(path);
        sidecar["runs"][s.solver] = series_summary(s);
        out << "wrote " << path << " (" << s.rows.size() << " rows, " << s.solver << ")\n";
    }

    if (runs.size() == 2) {
        const auto& a = runs[0].rows;
        const auto& b = runs[1].rows;
        double dev = 0.0;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            dev = std::max({dev, sup_diff(a[i].pos, b[i].pos), sup_diff(a[i].mom, b[i].mom)});
        const bool ok = dev <= tol.at("solver_agreement");
        sidecar["deviation"] = {{"max_state_deviation", dev}, {"tolerance", tol.at("solver_agreement")}, {"within_tolerance", ok}};
        out << "max spectral/rk4 deviation " << format_real(dev) << (ok ? " (within " : " (ABOVE ")
            << format_real(tol.at("solver_agreement")) << ")\n";
        if (!ok) warnings.push_back("spectral and rk4 trajectories disagree beyond solver_agreement");
    }

    int code = kExitOk;
    for (const auto& s : runs) {
        if (!s.aborted) continue;
        code = kExitRuntime;
        sidecar["abort"][s.solver] = {{"reason", s.abort_reason}, {"last_safe_t", s.last_safe_t}};
        err << "error: " << s.solver << " run stopped: " << s.abort_reason << "\n"
            << "last safe t = " << format_real(s.last_safe_t) << "\n";
    }
    sidecar["warnings"] = warnings;
    sidecar["status"] = code == kExitOk ? "ok" : "aborted";
    for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << "\n";
    if (cfg.sidecar) write_file(args.out_path + ".json", sidecar.dump(2) + "\n");
    return code;
}

// ---- dualize -----------------------------------------------------------

json state_json(const char* a_name, const RealVector& a, const char* b_name, const RealVector& b) {
    return json{{a_name, to_json(a)}, {b_name, to_json(b)}};
}

json diagnostics_json(const DualityDiagnostics& d) {
    return json{{"spectrum_mismatch", d.spectrum_mismatch}, {"modulus_mismatch", d.modulus_mismatch},
                {"imag_residue", d.imag_residue}};
}

int dualize(const DualizeArgs& args, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_config(args.config_path, Purpose::Dualize);
    const std::string natural = cfg.model == Model::Sutherland ? "s2r" : "r2s";
    if (!args.direction.empty() && args.direction != natural)
        config_error("--direction " + args.direction + " does not match model '" + to_string(cfg.model) +
                     "' (expected " + natural + ")");
    const TolMap tol = merge_tolerances(cfg.tolerances, args.tol,
                                        {{"structure", kStructureTol}, {"gap", kRegularityTol}, {"roundtrip", 1e-8}});
    const CouplingParams c(cfg.g, cfg.g2);
    const SpectralTol st = spectral_tol(tol);
    const Eigen::Index n = cfg.n;

    int code = kExitOk;
    for (std::size_t i = 0; i < cfg.states.size(); ++i) {
        const RealVector& x = cfg.states[i];
        json rec{{"index", i}, {"direction", natural}};
        json warnings = json::array();
        if (c.at_exceptional_ratio()) warnings.push_back("g2 = 2g sits on the edge of the covered coupling range");
        try {
            double residual = 0.0;
            if (natural == "s2r") {
                const SutherlandState s{x.head(n), x.tail(n)};
                const SToR img = dualize_s_to_r_checked(s, c, st);
                const SutherlandState back = dualize_r_to_s(img.state, c, st);
                residual = std::max(sup_diff(back.q, s.q), sup_diff(back.p, s.p));
                rec["input"] = state_json("q", s.q, "p", s.p);
                rec["output"] = state_json("lambda", img.state.lambda, "theta", img.state.theta);
                rec["diagnostics"] = diagnostics_json(img.diagnostics);
                if (img.diagnostics.imag_warning()) warnings.push_back("imaginary residue on a diagonal read as real");
            } else {
                const RsvdState s{x.head(n), x.tail(n)};
                const RToS img = dualize_r_to_s_checked(s, c, st);
                const RsvdState back = dualize_s_to_r(img.state, c, st);
                residual = std::max(sup_diff(back.lambda, s.lambda), sup_diff(back.theta, s.theta));
                rec["input"] = state_json("lambda", s.lambda, "theta", s.theta);
                rec["output"] = state_json("q", img.state.q, "p", img.state.p);
                rec["diagnostics"] = diagnostics_json(img.diagnostics);
                if (img.diagnostics.imag_warning()) warnings.push_back("imaginary residue on a diagonal read as real");
            }
            rec["roundtrip_residual"] = residual;
            if (!(residual <= tol.at("roundtrip"))) warnings.push_back("roundtrip residual above tolerance");
        } catch (const Error& e) {
            if (is_config_kind(e.kind())) throw;
            rec["error"] = e.what();
            err << "error: state " << i << ": " << e.what() << "\n";
            code = kExitRuntime;
        }
        rec["warnings"] = warnings;
        for (const auto& w : warnings) err << "warning: state " << i << ": " << w.get<std::string>() << "\n";
        out << rec.dump() << "\n";
    }
    return code;
}

// ---- verify ------------------------------------------------------------

json report_json(const VerifyReport& rep) {
    json checks = json::array();
    for (const auto& r : rep.checks) {
        json j{{"name", r.name},
               {"anchor", r.anchor},
               {"max_residual", std::isfinite(r.max_residual) ? json(r.max_residual) : json(nullptr)},
               {"tolerance", r.tolerance},
               {"pass", r.pass}};
        if (!r.error.empty()) j["error"] = r.error;
        checks.push_back(std::move(j));
    }
    return json{{"status", rep.all_pass() ? "pass" : "fail"},
                {"seed", rep.seed},
                {"n_max", rep.n_max},
                {"draws", rep.draws},
                {"checks", checks}};
}

int verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    VerifyOptions opt;
    opt.seed = args.seed;
    opt.n_max = args.n_max;
    opt.draws = args.draws;
    opt.tol_overrides = args.tol;
    const VerifyReport rep = run_verify(opt);

    int failed = 0;
    for (const auto& r : rep.checks) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << "  residual=" << format_real(r.max_residual)
            << "  tol=" << format_real(r.tolerance) << "\n";
        if (!r.error.empty()) err << "  " << r.name << ": " << r.error << "\n";
        failed += r.pass ? 0 : 1;
    }
    out << (failed == 0 ? "all " : "") << rep.checks.size() - failed << "/" << rep.checks.size()
        << " checks passed\n";
    if (!args.report_path.empty()) write_file(args.report_path, report_json(rep).dump(2) + "\n");
    return failed == 0 ? kExitOk : kExitChecksFailed;
}

// Config problems map to 2 and runtime failures to 3; anything else
// escaping the library is a bug, reported as a runtime failure.
template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (is_config_kind(e.kind())) return kExitConfig;
        if (e.last_safe_t()) err << "last safe t = " << format_real(*e.last_safe_t()) << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string tagged_path(const std::string& path, const std::string& tag) {
    const std::filesystem::path p(path);
    if (!p.has_extension()) return path + "." + tag;
    std::filesystem::path q = p;
    q.replace_extension("." + tag + p.extension().string());
    return q.string();
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded([&] { return simulate(args, out, err); }, err);
}

int cmd_dualize(const DualizeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded([&] { return dualize(args, out, err); }, err);
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    return guarded([&] { return verify(args, out, err); }, err);
}

}  // namespace cnduality::cli

#include "config.hpp"

#include "cnduality/errors.hpp"
#include "cnduality/phase_space.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cnduality::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

double number(const json& j, const char* key) {
    if (!j.is_number()) config_error(std::string("'") + key + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) config_error(std::string("'") + key + "' must be finite");
    return v;
}

long long integer(const json& j, const char* key) {
    if (!j.is_number_integer()) config_error(std::string("'") + key + "' must be an integer");
    return j.get<long long>();
}

RealVector state_vector(const json& j, const char* key) {
    if (!j.is_array()) config_error(std::string("'") + key + "' must be an array of numbers");
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], key);
    return v;
}

// Chamber condition on the position-like half of a state.
void check_state(const RealVector& v, int n, Model model) {
    if (v.size() != 2 * n) {
        std::ostringstream os;
        os << "state has " << v.size() << " entries, expected 2n = " << 2 * n;
        config_error(os.str());
    }
    try {
        require_chamber(v.head(n), kChamberMargin, model == Model::Sutherland ? "q" : "lambda");
    } catch (const Error& e) {
        config_error(std::string("chamber violation: ") + e.what());
    }
}

}  // namespace

const char* to_string(Model m) { return m == Model::Sutherland ? "sutherland" : "rsvd"; }

const char* to_string(Solver s) {
    switch (s) {
    case Solver::Spectral: return "spectral";
    case Solver::Rk4: return "rk4";
    case Solver::Both: return "both";
    }
    return "spectral";
}

RunConfig parse_config_text(const std::string& text, Purpose purpose) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        config_error(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("config must be a JSON object");

    static const std::set<std::string> known{"model", "n", "g", "g2", "initial_state", "states", "t_end", "samples",
                                             "solver", "seed", "rk4_dt", "sidecar", "tolerances"};
    for (const auto& item : j.items())
        if (!known.count(item.key())) config_error("unknown key '" + item.key() + "'");

    RunConfig cfg;
    if (!j.contains("model") || !j["model"].is_string()) config_error("'model' must be \"sutherland\" or \"rsvd\"");
    const auto model = j["model"].get<std::string>();
    if (model == "sutherland") cfg.model = Model::Sutherland;
    else if (model == "rsvd") cfg.model = Model::Rsvd;
    else config_error("'model' must be \"sutherland\" or \"rsvd\", got \"" + model + "\"");

    if (!j.contains("n")) config_error("missing 'n'");
    const long long n = integer(j["n"], "n");
    if (n < 1 || n > 64) config_error("'n' must be between 1 and 64");
    cfg.n = static_cast<int>(n);

    if (!j.contains("g") || !j.contains("g2")) config_error("missing 'g' or 'g2'");
    cfg.g = number(j["g"], "g");
    cfg.g2 = number(j["g2"], "g2");
    if (cfg.g == 0.0 || cfg.g2 == 0.0) config_error("'g' and 'g2' must be non-zero");

    const bool single = j.contains("initial_state");
    const bool batch = j.contains("states");
    if (single && batch) config_error("give either 'initial_state' or 'states', not both");
    if (batch && purpose != Purpose::Dualize) config_error("'states' is only accepted by dualize");
    if (!single && !batch) config_error("missing 'initial_state'");
    if (single) {
        cfg.states.push_back(state_vector(j["initial_state"], "initial_state"));
    } else {
        if (!j["states"].is_array() || j["states"].empty()) config_error("'states' must be a non-empty array");
        for (const auto& s : j["states"]) cfg.states.push_back(state_vector(s, "states"));
    }
    for (const auto& s : cfg.states) check_state(s, cfg.n, cfg.model);

    if (j.contains("t_end")) cfg.t_end = number(j["t_end"], "t_end");
    if (j.contains("samples")) {
        const long long s = integer(j["samples"], "samples");
        if (s < 2 || s > 10'000'000) config_error("'samples' must be at least 2");
        cfg.samples = static_cast<int>(s);
    }
    if (purpose == Purpose::Simulate) {
        if (!j.contains("t_end")) config_error("missing 't_end'");
        if (!(cfg.t_end > 0.0)) config_error("'t_end' must be positive (samples >= 2 needs distinct times)");
    }

    if (j.contains("solver")) {
        if (!j["solver"].is_string()) config_error("'solver' must be a string");
        const auto s = j["solver"].get<std::string>();
        if (s == "spectral") cfg.solver = Solver::Spectral;
        else if (s == "rk4") cfg.solver = Solver::Rk4;
        else if (s == "both") cfg.solver = Solver::Both;
        else config_error("'solver' must be spectral, rk4 or both, got \"" + s + "\"");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            config_error("'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("rk4_dt")) {
        cfg.rk4_dt = number(j["rk4_dt"], "rk4_dt");
        if (!(cfg.rk4_dt > 0.0)) config_error("'rk4_dt' must be positive");
    }
    if (j.contains("sidecar")) {
        if (!j["sidecar"].is_boolean()) config_error("'sidecar' must be true or false");
        cfg.sidecar = j["sidecar"].get<bool>();
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) config_error("'tolerances' must map names to numbers");
        for (const auto& item : j["tolerances"].items()) {
            const double v = number(item.value(), "tolerances");
            if (!(v > 0.0)) config_error("tolerance '" + item.key() + "' must be positive");
            cfg.tolerances[item.key()] = v;
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path, Purpose purpose) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), purpose);
}

std::map<std::string, double> parse_tol_flags(const std::vector<std::string>& flags) {
    std::map<std::string, double> out;
    for (const auto& f : flags) {
        const auto eq = f.find('=');
        if (eq == std::string::npos || eq == 0) config_error("--tol expects name=value, got '" + f + "'");
        const std::string name = f.substr(0, eq);
        const std::string value = f.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size() || !(v > 0.0) || !std::isfinite(v))
            config_error("--tol " + name + ": '" + value + "' is not a positive number");
        out[name] = v;
    }
    return out;
}

}  // namespace cnduality::cli

#include "rotirs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rotirs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) fail(where + key, "unknown key");
    }
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& key, int min_value) {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < min_value || x > 1'000'000'000) fail(key, "out of range (minimum " + std::to_string(min_value) + ")");
    return static_cast<int>(x);
}

Vec3 position(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 3) fail(key, "expected a list of 3 numbers");
    Vec3 p;
    for (int i = 0; i < 3; ++i) {
        if (!v[static_cast<size_t>(i)].is_number()) fail(key, "expected a list of 3 numbers");
        p[i] = v[static_cast<size_t>(i)].get<double>();
    }
    return p;
}

double decibels_or_inf(const json& v, const std::string& key) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kPureLos;
        fail(key, "expected a number of dB or \"inf\"");
    }
    return db_to_linear(number(v, key));
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "element_count") return SweepAxis::ElementCount;
    if (name == "tx_power_dbm") return SweepAxis::TxPowerDbm;
    if (name == "rician_factor_db") return SweepAxis::RicianFactorDb;
    fail("sweep.axis", "expected element_count, tx_power_dbm or rician_factor_db, got '" + name + "'");
}

void parse_pso(const json& j, PsoConfig& pso) {
    if (!j.is_object()) fail("pso", "expected an object");
    reject_unknown(j, {"swarm_size", "max_iters", "c1", "c2", "omega_initial", "omega_final", "penalty", "early_stop",
                        "velocity_first"},
                   "pso.");
    if (j.contains("swarm_size")) pso.swarm_size = integer(j["swarm_size"], "pso.swarm_size", 2);
    if (j.contains("max_iters")) pso.max_iters = integer(j["max_iters"], "pso.max_iters", 1);
    if (j.contains("c1")) pso.c1 = number(j["c1"], "pso.c1");
    if (j.contains("c2")) pso.c2 = number(j["c2"], "pso.c2");
    if (j.contains("omega_initial")) pso.omega_initial = number(j["omega_initial"], "pso.omega_initial");
    if (j.contains("omega_final")) pso.omega_final = number(j["omega_final"], "pso.omega_final");
    if (j.contains("penalty")) pso.penalty = number(j["penalty"], "pso.penalty");
    if (j.contains("early_stop")) {
        if (!j["early_stop"].is_boolean()) fail("pso.early_stop", "expected true or false");
        pso.early_stop = j["early_stop"].get<bool>();
    }
    if (j.contains("velocity_first")) {
        if (!j["velocity_first"].is_boolean()) fail("pso.velocity_first", "expected true or false");
        pso.velocity_first = j["velocity_first"].get<bool>();
    }
}

void parse_ao(const json& j, AoOptions& ao) {
    if (!j.is_object()) fail("ao", "expected an object");
    reject_unknown(j, {"convergence_eps", "max_outer_iters", "joint_swarm", "redraw_nlos", "los_model",
                       "nlos_amplitude"},
                   "ao.");
    if (j.contains("convergence_eps")) ao.convergence_eps = number(j["convergence_eps"], "ao.convergence_eps");
    if (j.contains("max_outer_iters")) ao.max_outer_iters = integer(j["max_outer_iters"], "ao.max_outer_iters", 1);
    for (const char* flag : {"joint_swarm", "redraw_nlos"}) {
        if (!j.contains(flag)) continue;
        if (!j[flag].is_boolean()) fail(std::string("ao.") + flag, "expected true or false");
        (std::string(flag) == "joint_swarm" ? ao.joint_swarm : ao.redraw_nlos) = j[flag].get<bool>();
    }
    if (j.contains("los_model")) {
        const std::string m = j["los_model"].is_string() ? j["los_model"].get<std::string>() : "";
        if (m == "spherical") ao.channel.los_model = LosModel::Spherical;
        else if (m == "planar") ao.channel.los_model = LosModel::Planar;
        else fail("ao.los_model", "expected \"spherical\" or \"planar\"");
    }
    if (j.contains("nlos_amplitude")) {
        const std::string m = j["nlos_amplitude"].is_string() ? j["nlos_amplitude"].get<std::string>() : "";
        if (m == "anchor") ao.channel.nlos_amplitude = NlosAmplitude::AnchorDistance;
        else if (m == "per_element") ao.channel.nlos_amplitude = NlosAmplitude::PerElement;
        else fail("ao.nlos_amplitude", "expected \"anchor\" or \"per_element\"");
    }
}

}  // namespace

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::ElementCount: return "element_count";
        case SweepAxis::TxPowerDbm: return "tx_power_dbm";
        case SweepAxis::RicianFactorDb: return "rician_factor_db";
    }
    return "unknown";
}

ExperimentSpec default_spec() {
    ExperimentSpec s;
    for (SchemeKind k : {SchemeKind::DoubleRotatable, SchemeKind::SingleRotatable, SchemeKind::DoubleFixed,
                         SchemeKind::SingleFixed}) {
        s.schemes.push_back(Scheme{k, {-kPi / 4.0, -kPi / 4.0}});
    }
    s.pso.swarm_size = 800;
    s.pso.max_iters = 50;
    return s;
}

void ExperimentSpec::validate() const {
    if (!(carrier_frequency_hz > 0.0)) fail("carrier_frequency_hz", "must be positive");
    if (bs_antennas < 1) fail("bs_antennas", "must be at least 1");
    if (irs1_elements < 1) fail("irs1_elements", "must be at least 1");
    if (irs2_elements < 1) fail("irs2_elements", "must be at least 1");
    if (!(element_spacing_wavelengths > 0.0)) fail("element_spacing_wavelengths", "must be positive");
    if (!(antenna_spacing_wavelengths > 0.0)) fail("antenna_spacing_wavelengths", "must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) fail("beta_db", "must be finite");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) fail("noise_dbm", "must be finite");
    if (!(pt > 0.0) || !std::isfinite(pt)) fail("tx_power_dbm", "must be finite");
    if (!(kappa >= 0.0)) fail("rician_factor_db", "must be a dB value or \"inf\"");
    if (values.empty()) fail("sweep.values", "must be nonempty");
    for (size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) fail("sweep.values", "must be finite");
        if (i > 0 && !(values[i] > values[i - 1])) fail("sweep.values", "must be strictly increasing");
    }
    if (axis == SweepAxis::ElementCount) {
        for (double v : values) {
            if (v < 1.0 || v != std::floor(v)) fail("sweep.values", "element counts must be positive integers");
        }
    }
    if (schemes.empty()) fail("schemes", "must be nonempty");
    if (trials < 1) fail("trials", "must be at least 1");
    if (threads < 0) fail("threads", "must be nonnegative");
    try {
        pso.validate();
    } catch (const DomainError& e) {
        fail("pso", e.what());
    }
    if (!(ao.convergence_eps > 0.0)) fail("ao.convergence_eps", "must be positive");
    for (const Scheme& s : schemes) {
        try {
            check_feasible(s.fixed);
        } catch (const DomainError& e) {
            fail("fixed_orientation_deg", e.what());
        }
    }
    try {
        (void)build_geometry(*this, irs1_elements, irs2_elements, bs_antennas);
        (void)SingleIrsGeometry(bs_position, single_irs_position, user_position, near_square_layout(1, 1.0),
                                near_square_layout(1, 1.0), wavelength());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config positions: ") + e.what());
    }
}

ExperimentSpec parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"bs_position", "irs1_position", "irs2_position", "user_position", "single_irs_position",
                    "carrier_frequency_hz", "bs_antennas", "irs1_elements", "irs2_elements",
                    "element_spacing_wavelengths", "antenna_spacing_wavelengths", "beta_db", "noise_dbm",
                    "tx_power_dbm", "rician_factor_db", "sweep", "schemes", "trials", "seed", "threads", "pso",
                    "fixed_orientation_deg", "ao"},
                   "");
    for (const char* key : {"bs_position", "irs1_position", "irs2_position", "user_position", "carrier_frequency_hz",
                            "bs_antennas", "irs1_elements", "irs2_elements", "sweep"}) {
        if (!j.contains(key)) fail(key, "missing required key");
    }

    ExperimentSpec s = default_spec();
    s.bs_position = position(j["bs_position"], "bs_position");
    s.irs1_position = position(j["irs1_position"], "irs1_position");
    s.irs2_position = position(j["irs2_position"], "irs2_position");
    s.user_position = position(j["user_position"], "user_position");
    s.single_irs_position =
        j.contains("single_irs_position") ? position(j["single_irs_position"], "single_irs_position") : s.irs1_position;
    s.carrier_frequency_hz = number(j["carrier_frequency_hz"], "carrier_frequency_hz");
    s.bs_antennas = integer(j["bs_antennas"], "bs_antennas", 1);
    s.irs1_elements = integer(j["irs1_elements"], "irs1_elements", 1);
    s.irs2_elements = integer(j["irs2_elements"], "irs2_elements", 1);
    if (j.contains("element_spacing_wavelengths")) {
        s.element_spacing_wavelengths = number(j["element_spacing_wavelengths"], "element_spacing_wavelengths");
    }
    if (j.contains("antenna_spacing_wavelengths")) {
        s.antenna_spacing_wavelengths = number(j["antenna_spacing_wavelengths"], "antenna_spacing_wavelengths");
    }
    if (j.contains("beta_db")) s.beta = db_to_linear(number(j["beta_db"], "beta_db"));
    if (j.contains("noise_dbm")) s.noise_power = dbm_to_watts(number(j["noise_dbm"], "noise_dbm"));
    if (j.contains("tx_power_dbm")) s.pt = dbm_to_watts(number(j["tx_power_dbm"], "tx_power_dbm"));
    if (j.contains("rician_factor_db")) s.kappa = decibels_or_inf(j["rician_factor_db"], "rician_factor_db");

    const json& sweep = j["sweep"];
    if (!sweep.is_object()) fail("sweep", "expected an object with axis and values");
    reject_unknown(sweep, {"axis", "values"}, "sweep.");
    if (!sweep.contains("axis") || !sweep["axis"].is_string()) fail("sweep.axis", "missing required key");
    s.axis = parse_axis(sweep["axis"].get<std::string>());
    if (!sweep.contains("values") || !sweep["values"].is_array()) fail("sweep.values", "expected a list of numbers");
    s.values.clear();
    for (const auto& v : sweep["values"]) s.values.push_back(number(v, "sweep.values"));

    Orientation fixed{-kPi / 4.0, -kPi / 4.0};
    if (j.contains("fixed_orientation_deg")) {
        const json& f = j["fixed_orientation_deg"];
        if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number()) {
            fail("fixed_orientation_deg", "expected [theta, phi] in degrees");
        }
        fixed = {deg_to_rad(f[0].get<double>()), deg_to_rad(f[1].get<double>())};
    }
    if (j.contains("schemes")) {
        if (!j["schemes"].is_array()) fail("schemes", "expected a list of scheme names");
        s.schemes.clear();
        for (const auto& v : j["schemes"]) {
            const auto kind = v.is_string() ? parse_scheme_name(v.get<std::string>()) : std::nullopt;
            if (!kind) fail("schemes", "unknown scheme " + v.dump());
            s.schemes.push_back(Scheme{*kind, fixed});
        }
    } else {
        for (Scheme& sc : s.schemes) sc.fixed = fixed;
    }
    if (j.contains("trials")) s.trials = integer(j["trials"], "trials", 1);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) fail("seed", "expected an integer");
        if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0) fail("seed", "must be nonnegative");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("threads")) s.threads = integer(j["threads"], "threads", 0);
    if (j.contains("pso")) parse_pso(j["pso"], s.pso);
    if (j.contains("ao")) parse_ao(j["ao"], s.ao);
    s.validate();
    return s;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_preset(ExperimentSpec& spec, const std::string& name) {
    if (name == "desk") {
        spec.bs_antennas = 8;
        spec.irs1_elements = spec.irs2_elements = 32;
        spec.pso.swarm_size = 60;
        spec.pso.max_iters = 40;
        spec.trials = 50;
    } else if (name == "paper") {
        spec.bs_antennas = 64;
        spec.irs1_elements = spec.irs2_elements = 256;
        spec.pso.swarm_size = 800;
        spec.pso.max_iters = 50;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected desk or paper)");
    }
}

ScenarioGeometry build_geometry(const ExperimentSpec& spec, int irs1_elements, int irs2_elements, int bs_antennas) {
    const double lambda = spec.wavelength();
    return ScenarioGeometry(spec.bs_position, spec.irs1_position, spec.irs2_position, spec.user_position,
                            near_square_layout(bs_antennas, spec.antenna_spacing_wavelengths * lambda),
                            near_square_layout(irs1_elements, spec.element_spacing_wavelengths * lambda),
                            near_square_layout(irs2_elements, spec.element_spacing_wavelengths * lambda), lambda);
}

}  // namespace rotirs

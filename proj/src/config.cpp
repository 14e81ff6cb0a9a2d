#include "ffs/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace windffs {

using json = nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += "\n";
        out += s;
    }
    return out;
}

template <class T>
struct Field {
    const char* name;
    double T::*member;
};

constexpr Field<SystemParams> kSystemFields[] = {
    {"inertia_h", &SystemParams::inertia_h},     {"damping_df", &SystemParams::damping_df},
    {"droop_inv_r", &SystemParams::droop_inv_r}, {"base_mva", &SystemParams::base_mva},
    {"f_nom", &SystemParams::f_nom},
};

constexpr Field<IeeeG1Params> kG1Fields[] = {
    {"s_mva", &IeeeG1Params::s_mva}, {"h", &IeeeG1Params::h},       {"k", &IeeeG1Params::k},
    {"k1", &IeeeG1Params::k1},       {"k2", &IeeeG1Params::k2},     {"k3", &IeeeG1Params::k3},
    {"k4", &IeeeG1Params::k4},       {"k5", &IeeeG1Params::k5},     {"k6", &IeeeG1Params::k6},
    {"k7", &IeeeG1Params::k7},       {"k8", &IeeeG1Params::k8},     {"t1", &IeeeG1Params::t1},
    {"t2", &IeeeG1Params::t2},       {"t3", &IeeeG1Params::t3},     {"t4", &IeeeG1Params::t4},
    {"t5", &IeeeG1Params::t5},       {"t6", &IeeeG1Params::t6},     {"t7", &IeeeG1Params::t7},
    {"uo", &IeeeG1Params::uo},       {"uc", &IeeeG1Params::uc},     {"pmin", &IeeeG1Params::pmin},
    {"pmax", &IeeeG1Params::pmax},
};

constexpr Field<IeeeG3Params> kG3Fields[] = {
    {"s_mva", &IeeeG3Params::s_mva}, {"h", &IeeeG3Params::h},     {"inv_rp", &IeeeG3Params::inv_rp},
    {"rr", &IeeeG3Params::rr},       {"tg", &IeeeG3Params::tg},   {"tp", &IeeeG3Params::tp},
    {"tr", &IeeeG3Params::tr},       {"tw", &IeeeG3Params::tw},   {"a11", &IeeeG3Params::a11},
    {"a13", &IeeeG3Params::a13},     {"a21", &IeeeG3Params::a21}, {"a23", &IeeeG3Params::a23},
    {"uo", &IeeeG3Params::uo},       {"uc", &IeeeG3Params::uc},   {"pmin", &IeeeG3Params::pmin},
    {"pmax", &IeeeG3Params::pmax},
};

constexpr Field<SimplifiedGovernor> kSimplifiedFields[] = {
    {"tg", &SimplifiedGovernor::tg},
    {"inv_r", &SimplifiedGovernor::inv_r},
};

constexpr Field<TurbineParams> kTurbineFields[] = {
    {"rated_mw", &TurbineParams::rated_mw},     {"rated_wind", &TurbineParams::rated_wind},
    {"beta", &TurbineParams::beta},             {"j_wt", &TurbineParams::j_wt},
    {"nominal_rpm", &TurbineParams::nominal_rpm}, {"omega_min", &TurbineParams::omega_min},
    {"omega_max", &TurbineParams::omega_max},   {"k_v", &TurbineParams::k_v},
};

class Reader {
public:
    std::vector<std::string> errors;

    void error(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    bool object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        error(path, "expected an object");
        return false;
    }

    void only(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
        for (const auto& item : j.items()) {
            bool ok = false;
            for (auto a : allowed) ok = ok || item.key() == a;
            if (!ok) error(path + "." + item.key(), "unknown key");
        }
    }

    template <class T, std::size_t N>
    void only_fields(const json& j, const std::string& path, const Field<T> (&fields)[N],
                     std::initializer_list<std::string_view> extra = {}) {
        for (const auto& item : j.items()) {
            bool ok = false;
            for (const auto& f : fields) ok = ok || item.key() == f.name;
            for (auto a : extra) ok = ok || item.key() == a;
            if (!ok) error(path + "." + item.key(), "unknown key");
        }
    }

    bool number(const json& j, const std::string& path, const char* key, double& out,
                bool required = false) {
        if (!j.contains(key)) {
            if (required) error(path + "." + key, "missing required field");
            return false;
        }
        const json& v = j.at(key);
        if (!v.is_number()) {
            error(path + "." + key, "expected a number");
            return false;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            error(path + "." + key, "must be finite");
            return false;
        }
        out = d;
        return true;
    }

    template <class I>
    bool integer(const json& j, const std::string& path, const char* key, I& out,
                 bool required = false) {
        if (!j.contains(key)) {
            if (required) error(path + "." + key, "missing required field");
            return false;
        }
        const json& v = j.at(key);
        if (!v.is_number_integer()) {
            error(path + "." + key, "expected an integer");
            return false;
        }
        if constexpr (std::is_unsigned_v<I>) {
            if (v.is_number_unsigned()) {
                out = v.get<I>();
            } else if (v.get<long long>() >= 0) {
                out = static_cast<I>(v.get<long long>());
            } else {
                error(path + "." + key, "must be non-negative");
                return false;
            }
        } else {
            out = v.get<I>();
        }
        return true;
    }

    bool boolean(const json& j, const std::string& path, const char* key, bool& out) {
        if (!j.contains(key)) return false;
        if (!j.at(key).is_boolean()) {
            error(path + "." + key, "expected a boolean");
            return false;
        }
        out = j.at(key).get<bool>();
        return true;
    }

    bool string(const json& j, const std::string& path, const char* key, std::string& out,
                bool required = false) {
        if (!j.contains(key)) {
            if (required) error(path + "." + key, "missing required field");
            return false;
        }
        if (!j.at(key).is_string()) {
            error(path + "." + key, "expected a string");
            return false;
        }
        out = j.at(key).get<std::string>();
        return true;
    }

    template <class T, std::size_t N>
    void fields(const json& j, const std::string& path, const Field<T> (&fs)[N], T& out) {
        for (const auto& f : fs) number(j, path, f.name, out.*(f.member));
    }
};

template <class T, std::size_t N>
json fields_to_json(const Field<T> (&fs)[N], const T& v) {
    json j = json::object();
    for (const auto& f : fs) j[f.name] = v.*(f.member);
    return j;
}

std::string idx(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void read_governor(Reader& r, const json& j, const std::string& path, Scenario& sc) {
    if (!r.object(j, path)) return;
    std::string model;
    r.string(j, path, "model", model, true);
    double dispatch = 0.5;
    r.number(j, path, "dispatch", dispatch, true);
    const json empty = json::object();
    const json& pj = j.contains("params") ? j.at("params") : empty;
    const std::string ppath = path + ".params";
    if (j.contains("params") && !r.object(pj, ppath)) return;

    GovernorParams params;
    double s_mva = 0.0, h = 0.0;
    if (model == "ieeeg1") {
        r.only(j, path, {"model", "dispatch", "params"});
        r.only_fields(pj, ppath, kG1Fields);
        IeeeG1Params p;
        r.fields(pj, ppath, kG1Fields, p);
        params = p;
    } else if (model == "ieeeg3") {
        r.only(j, path, {"model", "dispatch", "params"});
        r.only_fields(pj, ppath, kG3Fields);
        IeeeG3Params p;
        r.fields(pj, ppath, kG3Fields, p);
        params = p;
    } else if (model == "simplified") {
        r.only(j, path, {"model", "dispatch", "params", "s_mva", "h"});
        r.only_fields(pj, ppath, kSimplifiedFields);
        SimplifiedGovernor p;
        r.fields(pj, ppath, kSimplifiedFields, p);
        r.number(j, path, "s_mva", s_mva, true);
        r.number(j, path, "h", h, true);
        params = p;
    } else {
        if (!model.empty()) r.error(path + ".model", "unknown governor model '" + model + "'");
        return;
    }
    try {
        sc.generators.push_back(make_unit(Governor(params, dispatch), s_mva, h));
    } catch (const std::invalid_argument& e) {
        r.error(path, e.what());
    }
}

void read_farm(Reader& r, const json& j, const std::string& path, Scenario& sc) {
    if (!r.object(j, path)) return;
    r.only(j, path, {"n_wt", "v_w", "controller", "gain_mode", "turbine"});
    FarmSpec f;
    r.integer(j, path, "n_wt", f.n_wt, true);
    r.number(j, path, "v_w", f.v_w, true);
    std::string s;
    if (r.string(j, path, "controller", s)) {
        try {
            f.controller = controller_from_string(s);
        } catch (const std::invalid_argument& e) {
            r.error(path + ".controller", e.what());
        }
    }
    if (r.string(j, path, "gain_mode", s)) {
        try {
            f.gain_mode = gain_mode_from_string(s);
        } catch (const std::invalid_argument& e) {
            r.error(path + ".gain_mode", e.what());
        }
    }
    bool ok = true;
    if (j.contains("turbine")) {
        const json& tj = j.at("turbine");
        const std::string tpath = path + ".turbine";
        if (r.object(tj, tpath)) {
            r.only_fields(tj, tpath, kTurbineFields, {"cp_coeffs"});
            r.fields(tj, tpath, kTurbineFields, f.turbine);
            if (tj.contains("cp_coeffs")) {
                const json& c = tj.at("cp_coeffs");
                if (!c.is_array() || c.size() != 6) {
                    r.error(tpath + ".cp_coeffs", "expected an array of 6 numbers");
                    ok = false;
                } else {
                    for (std::size_t i = 0; i < 6; ++i) {
                        if (!c[i].is_number()) {
                            r.error(idx(tpath + ".cp_coeffs", i), "expected a number");
                            ok = false;
                        } else {
                            f.turbine.cp_coeffs[i] = c[i].get<double>();
                        }
                    }
                }
            }
            if (!(f.turbine.omega_min < f.turbine.omega_max)) {
                r.error(tpath + ".omega_min", "must be below omega_max");
                ok = false;
            }
        }
    }
    if (ok) {
        try {
            WindFarm check(f.n_wt, f.v_w, f.turbine);
        } catch (const std::invalid_argument& e) {
            r.error(path, e.what());
        }
    }
    sc.farms.push_back(f);
}

void read_disturbance(Reader& r, const json& j, const std::string& path, Scenario& sc) {
    if (!r.object(j, path)) return;
    r.only(j, path, {"kind", "magnitude_pu", "magnitude_mw", "time", "generator"});
    Disturbance d;
    std::string kind;
    r.string(j, path, "kind", kind, true);
    r.number(j, path, "time", d.time, true);
    if (kind == "load_surge") {
        d.kind = DisturbanceKind::LoadSurge;
        const bool pu = j.contains("magnitude_pu"), mw = j.contains("magnitude_mw");
        if (pu == mw) {
            r.error(path, "exactly one of magnitude_pu or magnitude_mw is required");
        } else if (pu) {
            r.number(j, path, "magnitude_pu", d.magnitude_pd);
        } else {
            double m = 0.0;
            if (r.number(j, path, "magnitude_mw", m)) d.magnitude_pd = m / sc.system.base_mva;
        }
        if (j.contains("generator")) r.error(path + ".generator", "only valid for generator_trip");
    } else if (kind == "generator_trip") {
        d.kind = DisturbanceKind::GeneratorTrip;
        int g = 0;
        if (r.integer(j, path, "generator", g, true)) {
            if (g < 1) r.error(path + ".generator", "generator numbers start at 1");
            d.generator = g - 1;
        }
        if (j.contains("magnitude_pu") || j.contains("magnitude_mw"))
            r.error(path, "a trip's deficit is the unit's dispatch; omit the magnitude");
    } else if (!kind.empty()) {
        r.error(path + ".kind", "unknown disturbance kind '" + kind + "'");
    }
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        r.error(path, e.what());
    }
    sc.disturbance = d;
}

void read_controller(Reader& r, const json& j, const std::string& path, Scenario& sc) {
    if (!r.object(j, path)) return;
    r.only(j, path, {"gains", "estimator_window_s", "exit_strategy", "vic", "sic", "model_based"});
    auto& c = sc.controller;
    if (j.contains("gains")) {
        const json& g = j.at("gains");
        const std::string gp = path + ".gains";
        if (r.object(g, gp)) {
            r.only(g, gp, {"kp", "ki"});
            PiGains gains;
            const bool a = r.number(g, gp, "kp", gains.kp, true);
            const bool b = r.number(g, gp, "ki", gains.ki, true);
            if (a && b) {
                try {
                    gains.validate();
                    c.gains = gains;
                } catch (const std::invalid_argument& e) {
                    r.error(gp, e.what());
                }
            }
        }
    }
    r.number(j, path, "estimator_window_s", c.estimator_window);
    r.boolean(j, path, "exit_strategy", c.exit_strategy);
    if (j.contains("vic")) {
        const json& v = j.at("vic");
        const std::string vp = path + ".vic";
        if (r.object(v, vp)) {
            r.only(v, vp, {"k_df", "k_pf"});
            double kdf = 0.0;
            if (r.number(v, vp, "k_df", kdf)) c.vic_k_df = kdf;
            r.number(v, vp, "k_pf", c.vic_k_pf);
        }
    }
    if (j.contains("sic")) {
        const json& v = j.at("sic");
        const std::string vp = path + ".sic";
        if (r.object(v, vp)) {
            r.only(v, vp, {"dp0", "duration", "withdrawal"});
            r.number(v, vp, "dp0", c.sic.dp0);
            r.number(v, vp, "duration", c.sic.duration);
            r.number(v, vp, "withdrawal", c.sic.withdrawal);
        }
    }
    if (j.contains("model_based")) {
        const json& v = j.at("model_based");
        const std::string vp = path + ".model_based";
        if (r.object(v, vp)) {
            r.only(v, vp, {"error_level", "seed", "include_droop"});
            r.number(v, vp, "error_level", c.model_based.error_level);
            r.integer(v, vp, "seed", c.model_based.seed);
            r.boolean(v, vp, "include_droop", c.model_based.include_droop);
        }
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

Scenario parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("$: malformed JSON: ") + e.what()});
    }
    Reader r;
    Scenario sc;
    sc.generators.clear();
    sc.farms.clear();
    if (!r.object(doc, "$")) throw ConfigError(r.errors);
    r.only(doc, "$",
           {"name", "system", "governors", "windfarms", "disturbance", "trajectory", "controller", "sim"});
    r.string(doc, "$", "name", sc.name);

    if (!doc.contains("system")) {
        r.error("$.system", "missing required field");
    } else if (r.object(doc.at("system"), "$.system")) {
        r.only_fields(doc.at("system"), "$.system", kSystemFields);
        r.fields(doc.at("system"), "$.system", kSystemFields, sc.system);
        try {
            sc.system.validate();
        } catch (const std::invalid_argument& e) {
            r.error("$.system", e.what());
        }
    }

    if (!doc.contains("governors")) {
        r.error("$.governors", "missing required field");
    } else if (!doc.at("governors").is_array() || doc.at("governors").empty()) {
        r.error("$.governors", "expected a non-empty array");
    } else {
        const json& g = doc.at("governors");
        for (std::size_t i = 0; i < g.size(); ++i) read_governor(r, g[i], idx("$.governors", i), sc);
    }

    if (doc.contains("windfarms")) {
        const json& w = doc.at("windfarms");
        if (!w.is_array()) {
            r.error("$.windfarms", "expected an array");
        } else {
            for (std::size_t i = 0; i < w.size(); ++i) read_farm(r, w[i], idx("$.windfarms", i), sc);
        }
    }

    if (doc.contains("disturbance") && !doc.at("disturbance").is_null())
        read_disturbance(r, doc.at("disturbance"), "$.disturbance", sc);

    if (!doc.contains("trajectory")) {
        r.error("$.trajectory", "missing required field");
    } else if (r.object(doc.at("trajectory"), "$.trajectory")) {
        const json& t = doc.at("trajectory");
        r.only(t, "$.trajectory", {"alpha", "target_nadir_hz"});
        const bool a = t.contains("alpha"), n = t.contains("target_nadir_hz");
        if (a == n) r.error("$.trajectory", "exactly one of alpha or target_nadir_hz is required");
        if (a && r.number(t, "$.trajectory", "alpha", sc.trajectory.alpha) && sc.trajectory.alpha < 1.0)
            r.error("$.trajectory.alpha", "must be at least 1");
        if (n && r.number(t, "$.trajectory", "target_nadir_hz", sc.trajectory.target_nadir_hz) &&
            !(sc.trajectory.target_nadir_hz > 0.0))
            r.error("$.trajectory.target_nadir_hz", "must be positive");
    }

    if (doc.contains("controller")) read_controller(r, doc.at("controller"), "$.controller", sc);

    if (doc.contains("sim") && r.object(doc.at("sim"), "$.sim")) {
        const json& s = doc.at("sim");
        r.only(s, "$.sim", {"dt", "t_end", "seed", "record_every"});
        r.number(s, "$.sim", "dt", sc.sim.dt);
        r.number(s, "$.sim", "t_end", sc.sim.t_end);
        r.integer(s, "$.sim", "seed", sc.sim.seed);
        r.integer(s, "$.sim", "record_every", sc.sim.record_every);
    }

    if (r.errors.empty()) {
        try {
            sc.validate();
        } catch (const std::invalid_argument& e) {
            r.error("$", e.what());
        }
    }
    if (!r.errors.empty()) throw ConfigError(r.errors);
    return sc;
}

Scenario load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open file"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const Scenario& sc) {
    json doc = json::object();
    doc["name"] = sc.name;
    doc["system"] = fields_to_json(kSystemFields, sc.system);
    json govs = json::array();
    for (const auto& u : sc.generators) {
        json g = json::object();
        g["model"] = u.governor.name();
        g["dispatch"] = u.governor.dispatch();
        const auto& p = u.governor.params();
        if (const auto* g1 = std::get_if<IeeeG1Params>(&p)) {
            g["params"] = fields_to_json(kG1Fields, *g1);
        } else if (const auto* g3 = std::get_if<IeeeG3Params>(&p)) {
            g["params"] = fields_to_json(kG3Fields, *g3);
        } else {
            g["params"] = fields_to_json(kSimplifiedFields, std::get<SimplifiedGovernor>(p));
            g["s_mva"] = u.s_mva;
            g["h"] = u.h;
        }
        govs.push_back(g);
    }
    doc["governors"] = govs;
    json farms = json::array();
    for (const auto& f : sc.farms) {
        json t = fields_to_json(kTurbineFields, f.turbine);
        t["cp_coeffs"] = f.turbine.cp_coeffs;
        farms.push_back({{"n_wt", f.n_wt},
                         {"v_w", f.v_w},
                         {"controller", to_string(f.controller)},
                         {"gain_mode", to_string(f.gain_mode)},
                         {"turbine", t}});
    }
    doc["windfarms"] = farms;
    if (sc.disturbance) {
        const auto& d = *sc.disturbance;
        if (d.kind == DisturbanceKind::LoadSurge)
            doc["disturbance"] = {{"kind", "load_surge"}, {"magnitude_pu", d.magnitude_pd}, {"time", d.time}};
        else
            doc["disturbance"] = {{"kind", "generator_trip"}, {"generator", d.generator + 1}, {"time", d.time}};
    }
    if (sc.trajectory.alpha > 0.0)
        doc["trajectory"] = {{"alpha", sc.trajectory.alpha}};
    else
        doc["trajectory"] = {{"target_nadir_hz", sc.trajectory.target_nadir_hz}};
    const auto& c = sc.controller;
    json ctrl = json::object();
    if (c.gains) ctrl["gains"] = {{"kp", c.gains->kp}, {"ki", c.gains->ki}};
    ctrl["estimator_window_s"] = c.estimator_window;
    ctrl["exit_strategy"] = c.exit_strategy;
    json vic = {{"k_pf", c.vic_k_pf}};
    if (c.vic_k_df) vic["k_df"] = *c.vic_k_df;
    ctrl["vic"] = vic;
    ctrl["sic"] = {{"dp0", c.sic.dp0}, {"duration", c.sic.duration}, {"withdrawal", c.sic.withdrawal}};
    ctrl["model_based"] = {{"error_level", c.model_based.error_level},
                           {"seed", c.model_based.seed},
                           {"include_droop", c.model_based.include_droop}};
    doc["controller"] = ctrl;
    doc["sim"] = {{"dt", sc.sim.dt},
                  {"t_end", sc.sim.t_end},
                  {"seed", sc.sim.seed},
                  {"record_every", sc.sim.record_every}};
    return doc.dump(2) + "\n";
}

IeeeG1Params reference_ieeeg1() { return IeeeG1Params{}; }

IeeeG3Params reference_ieeeg3() { return IeeeG3Params{}; }

std::vector<IeeeG1Params> multi_unit_fleet() {
    struct Row {
        double s, h, k1, k3, k5, k7, t1, t3, t4, t5, t6, t7;
    };
    static constexpr Row rows[] = {
        {1200, 5.0, 0.2, 0.2, 0.35, 0.25, 0.2, 0.2, 0.4, 5.0, 6.0, 0.4},
        {700, 4.329, 0.3, 0.32, 0.18, 0.2, 0.1, 0.2, 0.3, 4.0, 4.5, 0.4},
        {800, 4.475, 0.22, 0.22, 0.3, 0.26, 0.15, 0.1, 0.4, 5.5, 5.0, 0.4},
        {800, 3.575, 0.26, 0.28, 0.3, 0.16, 0.1, 0.1, 0.2, 4.0, 4.5, 0.4},
        {600, 4.333, 0.25, 0.3, 0.3, 0.15, 0.15, 0.15, 0.4, 5.0, 4.0, 0.5},
        {800, 4.35, 0.2, 0.3, 0.3, 0.2, 0.3, 0.2, 0.3, 4.5, 4.5, 0.4},
        {700, 3.771, 0.25, 0.25, 0.3, 0.2, 0.25, 0.1, 0.1, 4.5, 4.0, 0.4},
        {700, 3.471, 0.2, 0.25, 0.35, 0.2, 0.1, 0.15, 0.3, 5.5, 5.0, 0.5},
        {1000, 3.45, 0.2, 0.25, 0.35, 0.2, 0.3, 0.25, 0.4, 5.0, 4.0, 0.5},
        {1000, 4.2, 0.25, 0.3, 0.25, 0.2, 0.2, 0.15, 0.3, 4.0, 4.0, 0.4},
    };
    std::vector<IeeeG1Params> out;
    for (const auto& r : rows) {
        IeeeG1Params p;
        p.s_mva = r.s;
        p.h = r.h;
        p.k = 17.0;
        p.k1 = r.k1;
        p.k3 = r.k3;
        p.k5 = r.k5;
        p.k7 = r.k7;
        p.k2 = p.k4 = p.k6 = p.k8 = 0.0;
        p.t1 = r.t1;
        p.t2 = 0.0;
        p.t3 = r.t3;
        p.t4 = r.t4;
        p.t5 = r.t5;
        p.t6 = r.t6;
        p.t7 = r.t7;
        out.push_back(p);
    }
    return out;
}

Scenario preset_single_wf(const std::string& governor) {
    Scenario sc;
    sc.name = "single_wf_" + governor;
    sc.system = SystemParams{4.0, 1.0, 20.0, 200.0, 50.0};
    constexpr double dispatch = 0.475;
    if (governor == "ieeeg1") {
        sc.generators.push_back(make_unit(Governor(reference_ieeeg1(), dispatch)));
    } else if (governor == "ieeeg3") {
        sc.generators.push_back(make_unit(Governor(reference_ieeeg3(), dispatch)));
    } else if (governor == "simplified") {
        sc.generators.push_back(make_unit(Governor(SimplifiedGovernor{5.0, 20.0}, dispatch), 200.0, 4.0));
    } else {
        throw std::invalid_argument("unknown governor preset '" + governor + "'");
    }
    FarmSpec f;
    f.n_wt = 20;
    f.v_w = 9.0;
    sc.farms.push_back(f);
    sc.disturbance = Disturbance{DisturbanceKind::LoadSurge, 15.0 / 200.0, 2.0};
    sc.trajectory.alpha = 1.18;
    sc.sim.t_end = 120.0;
    return sc;
}

Scenario preset_multi_wf(DisturbanceKind kind) {
    Scenario sc;
    sc.name = kind == DisturbanceKind::LoadSurge ? "multi_wf_load_surge" : "multi_wf_generator_trip";
    sc.system = SystemParams{4.1289, 1.47, 17.0, 8300.0, 50.0};
    for (const auto& p : multi_unit_fleet()) sc.generators.push_back(make_unit(Governor(p, 0.6)));
    for (int i = 0; i < 5; ++i) {
        FarmSpec f;
        f.n_wt = 80;
        f.v_w = 9.0;
        f.gain_mode = GainMode::Adaptive;
        sc.farms.push_back(f);
    }
    if (kind == DisturbanceKind::LoadSurge)
        sc.disturbance = Disturbance{DisturbanceKind::LoadSurge, 500.0 / 8300.0, 2.0};
    else
        sc.disturbance = Disturbance{DisturbanceKind::GeneratorTrip, 0.0, 2.0, 4};
    sc.trajectory.alpha = 1.226;
    sc.sim.t_end = 120.0;
    return sc;
}

}  // namespace windffs

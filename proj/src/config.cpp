#include "clusterem/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace clusterem {

namespace {

void check_keys(const Json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    for (const auto& k : allowed)
        if (!j.contains(k)) throw ConfigError("missing key \"" + k + "\" in " + where);
}

double num(const Json& j, const std::string& key) {
    if (!j.at(key).is_number()) throw ConfigError(key + " must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError(key + " must be finite");
    return v;
}

double positive(const Json& j, const std::string& key) {
    const double v = num(j, key);
    if (!(v > 0)) throw ConfigError(key + " must be positive");
    return v;
}

int integer(const Json& j, const std::string& key, int lo) {
    if (!j.at(key).is_number_integer()) throw ConfigError(key + " must be an integer");
    const int v = j.at(key).get<int>();
    if (v < lo) throw ConfigError(key + " must be >= " + std::to_string(lo));
    return v;
}

std::vector<double> num_list(const Json& j, const std::string& key) {
    if (!j.at(key).is_array() || j.at(key).empty()) throw ConfigError(key + " must be a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError(key + " must be a nonempty array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<int> int_list(const Json& j, const std::string& key) {
    if (!j.at(key).is_array() || j.at(key).empty()) throw ConfigError(key + " must be a nonempty array of integers");
    std::vector<int> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number_integer() || v.get<int>() < 1) throw ConfigError(key + " must hold positive integers");
        out.push_back(v.get<int>());
    }
    return out;
}

Point vec3(const Json& j, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_array() || v.size() != 3) throw ConfigError(key + " must be an array of 3 numbers");
    Point p;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError(key + " must be an array of 3 numbers");
        p(i) = v[i].get<double>();
    }
    return p;
}

Json vec_json(const Point& p) { return Json::array({p(0), p(1), p(2)}); }

Sign sign_of(const Json& j) {
    if (!j.at("sign").is_string()) throw ConfigError("sign must be \"plus\" or \"minus\"");
    const std::string s = j.at("sign").get<std::string>();
    if (s == "plus") return Sign::Plus;
    if (s == "minus") return Sign::Minus;
    throw ConfigError("sign must be \"plus\" or \"minus\"");
}

WaveSpec wave_of(const Json& j) {
    check_keys(j, "wave", {"theta", "p"});
    WaveSpec w;
    w.theta = vec3(j, "theta");
    w.p = vec3(j, "p");
    if (std::abs(w.theta.norm() - 1.0) > 1e-9) throw ConfigError("wave.theta must be a unit vector");
    if (std::abs(w.p.norm() - 1.0) > 1e-9) throw ConfigError("wave.p must be a unit vector");
    if (std::abs(w.theta.dot(w.p)) > 1e-9) throw ConfigError("wave: theta . p must be 0 (transverse polarization)");
    w.theta.normalize();
    w.p.normalize();
    // remove the residual projection left by rounding
    w.p = (w.p - w.theta.dot(w.p) * w.theta).normalized();
    return w;
}

Json wave_json(const WaveSpec& w) {
    Json j = Json::object();
    j["theta"] = vec_json(w.theta);
    j["p"] = vec_json(w.p);
    return j;
}

double h_exponent(const Json& j) {
    const double h = num(j, "h");
    if (!(h > kHLower && h < 1.0)) throw ConfigError("h must lie in (9/11, 1)");
    return h;
}

double particle_scale(const Json& j, const std::string& key) {
    const double a = num(j, key);
    if (!(a > 0 && a < 1)) throw ConfigError(key + " must lie in (0, 1)");
    return a;
}

ScaleInputs scale_inputs(const Json& j) {
    ScaleInputs s;
    s.a = particle_scale(j, "a");
    s.h = h_exponent(j);
    s.eta0 = positive(j, "eta0");
    s.c0 = positive(j, "c0");
    s.cr = positive(j, "c_r");
    s.lambda_nB = positive(j, "lambda_n0_B");
    s.sign = sign_of(j);
    try {
        derive_scales(s.a, s.h, s.eta0, s.c0, s.sign, s.cr, s.lambda_nB);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return s;
}

void put_scales(Json& j, const ScaleInputs& s) {
    j["a"] = s.a;
    j["h"] = s.h;
    j["eta0"] = s.eta0;
    j["c0"] = s.c0;
    j["c_r"] = s.cr;
    j["lambda_n0_B"] = s.lambda_nB;
    j["sign"] = sign_name(s.sign);
}

const std::set<std::string> kScaleKeys{"a", "h", "eta0", "c0", "c_r", "lambda_n0_B", "sign"};

std::set<std::string> with(std::set<std::string> base, std::initializer_list<std::string> more) {
    base.insert(more.begin(), more.end());
    return base;
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    try {
        return Json::parse(is);
    } catch (const std::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

void apply_override(Json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const std::exception&) {
        value = raw;
    }
    Json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(part))
            throw ConfigError("override names unknown key \"" + key + "\"");
        node = &(*node)[part];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = value;
}

FoldylaxConfig parse_foldylax(const Json& j) {
    check_keys(j, "foldylax config", with(kScaleKeys, {"domain", "wave", "direction_level"}));
    FoldylaxConfig c;
    c.domain = domain_from_json(j.at("domain"));
    c.scales = scale_inputs(j);
    c.wave = wave_of(j.at("wave"));
    c.direction_level = integer(j, "direction_level", 1);
    return c;
}

Json to_json(const FoldylaxConfig& c) {
    Json j = Json::object();
    j["domain"] = domain_to_json(c.domain);
    put_scales(j, c.scales);
    j["wave"] = wave_json(c.wave);
    j["direction_level"] = c.direction_level;
    return j;
}

LseConfig parse_lse(const Json& j) {
    check_keys(j, "lse config", with(kScaleKeys, {"domain", "wave", "grid_n", "direction_level"}));
    LseConfig c;
    c.domain = domain_from_json(j.at("domain"));
    c.scales = scale_inputs(j);
    c.wave = wave_of(j.at("wave"));
    c.grid_n = integer(j, "grid_n", 2);
    c.direction_level = integer(j, "direction_level", 1);
    return c;
}

Json to_json(const LseConfig& c) {
    Json j = Json::object();
    j["domain"] = domain_to_json(c.domain);
    put_scales(j, c.scales);
    j["wave"] = wave_json(c.wave);
    j["grid_n"] = c.grid_n;
    j["direction_level"] = c.direction_level;
    return j;
}

ConvergenceConfig parse_convergence(const Json& j) {
    check_keys(j, "converge config",
               {"domain", "a_values", "h", "eta0", "c0", "c_r", "lambda_n0_B", "sign", "wave", "grid_n",
                "direction_level"});
    ConvergenceConfig c;
    c.domain = domain_from_json(j.at("domain"));
    c.a_values = num_list(j, "a_values");
    for (std::size_t i = 0; i < c.a_values.size(); ++i) {
        if (!(c.a_values[i] > 0 && c.a_values[i] < 1)) throw ConfigError("a_values must lie in (0, 1)");
        if (i && !(c.a_values[i] < c.a_values[i - 1])) throw ConfigError("a_values must be strictly decreasing");
    }
    c.h = h_exponent(j);
    c.eta0 = positive(j, "eta0");
    c.c0 = positive(j, "c0");
    c.cr = positive(j, "c_r");
    c.lambda_nB = positive(j, "lambda_n0_B");
    c.sign = sign_of(j);
    for (double a : c.a_values) {
        try {
            derive_scales(a, c.h, c.eta0, c.c0, c.sign, c.cr, c.lambda_nB);
        } catch (const std::exception& e) {
            throw ConfigError(std::string(e.what()) + " (a = " + format_double(a) + ")");
        }
    }
    c.wave = wave_of(j.at("wave"));
    c.grid_n = integer(j, "grid_n", 2);
    c.direction_level = integer(j, "direction_level", 1);
    return c;
}

Json to_json(const ConvergenceConfig& c) {
    Json j = Json::object();
    j["domain"] = domain_to_json(c.domain);
    j["a_values"] = c.a_values;
    j["h"] = c.h;
    j["eta0"] = c.eta0;
    j["c0"] = c.c0;
    j["c_r"] = c.cr;
    j["lambda_n0_B"] = c.lambda_nB;
    j["sign"] = sign_name(c.sign);
    j["wave"] = wave_json(c.wave);
    j["grid_n"] = c.grid_n;
    j["direction_level"] = c.direction_level;
    return j;
}

RegimeMapConfig parse_regime_map(const Json& j) {
    check_keys(j, "effective config", {"xi_min", "xi_max", "xi_steps", "k", "delta_star", "domain"});
    RegimeMapConfig c;
    c.xi_min = num(j, "xi_min");
    c.xi_max = num(j, "xi_max");
    if (!(c.xi_min >= 0 && c.xi_max >= c.xi_min)) throw ConfigError("need 0 <= xi_min <= xi_max");
    c.xi_steps = integer(j, "xi_steps", 1);
    c.k = num(j, "k");
    if (!(c.k >= 0)) throw ConfigError("k must be non-negative");
    c.delta_star = positive(j, "delta_star");
    c.domain = domain_from_json(j.at("domain"));
    return c;
}

Json to_json(const RegimeMapConfig& c) {
    Json j = Json::object();
    j["xi_min"] = c.xi_min;
    j["xi_max"] = c.xi_max;
    j["xi_steps"] = c.xi_steps;
    j["k"] = c.k;
    j["delta_star"] = c.delta_star;
    j["domain"] = domain_to_json(c.domain);
    return j;
}

ResonanceConfig parse_resonance(const Json& j) {
    check_keys(j, "resonance config",
               {"radius", "grid_n", "eta0", "lambda_n0_B", "beta_values", "off_resonance_fractions", "wave",
                "direction_level"});
    ResonanceConfig c;
    c.radius = positive(j, "radius");
    c.grid_n = integer(j, "grid_n", 12);
    if (c.grid_n % 2) throw ConfigError("grid_n must be even (reflection-symmetric grid)");
    c.eta0 = positive(j, "eta0");
    c.lambda_nB = positive(j, "lambda_n0_B");
    c.beta_values = num_list(j, "beta_values");
    for (double b : c.beta_values)
        if (b == 0) throw ConfigError("beta_values must be nonzero (beta = 0 is the resonance itself)");
    if (!j.at("off_resonance_fractions").is_array()) throw ConfigError("off_resonance_fractions must be an array");
    for (const auto& v : j.at("off_resonance_fractions")) {
        if (!v.is_number() || !(v.get<double>() > 0 && v.get<double>() < 1))
            throw ConfigError("off_resonance_fractions must lie in (0, 1)");
        c.off_resonance_fractions.push_back(v.get<double>());
    }
    c.wave = wave_of(j.at("wave"));
    c.direction_level = integer(j, "direction_level", 1);
    return c;
}

Json to_json(const ResonanceConfig& c) {
    Json j = Json::object();
    j["radius"] = c.radius;
    j["grid_n"] = c.grid_n;
    j["eta0"] = c.eta0;
    j["lambda_n0_B"] = c.lambda_nB;
    j["beta_values"] = c.beta_values;
    j["off_resonance_fractions"] = c.off_resonance_fractions;
    j["wave"] = wave_json(c.wave);
    j["direction_level"] = c.direction_level;
    return j;
}

CountingConfig parse_counting(const Json& j) {
    check_keys(j, "counting config",
               {"domain", "boundary_domain", "interior_pitch_inverses", "boundary_pitch_inverses", "kappas",
                "subdivisions"});
    CountingConfig c;
    c.domain = domain_from_json(j.at("domain"));
    if (c.domain.kind != DomainShape::Kind::Box) throw ConfigError("counting domain must be a box");
    c.boundary_domain = domain_from_json(j.at("boundary_domain"));
    c.interior_pitch_inverses = int_list(j, "interior_pitch_inverses");
    c.boundary_pitch_inverses = int_list(j, "boundary_pitch_inverses");
    c.kappas = num_list(j, "kappas");
    for (double k : c.kappas)
        if (!(k > 0)) throw ConfigError("kappas must be positive");
    c.subdivisions = integer(j, "subdivisions", 1);
    return c;
}

Json to_json(const CountingConfig& c) {
    Json j = Json::object();
    j["domain"] = domain_to_json(c.domain);
    j["boundary_domain"] = domain_to_json(c.boundary_domain);
    j["interior_pitch_inverses"] = c.interior_pitch_inverses;
    j["boundary_pitch_inverses"] = c.boundary_pitch_inverses;
    j["kappas"] = c.kappas;
    j["subdivisions"] = c.subdivisions;
    return j;
}

SpectrumConfig parse_spectrum(const Json& j) {
    check_keys(j, "spectrum config", {"radius", "grid_n", "ritz_degree", "count", "wave"});
    SpectrumConfig c;
    c.radius = positive(j, "radius");
    c.grid_n = integer(j, "grid_n", 12);
    if (c.grid_n % 2) throw ConfigError("grid_n must be even (reflection-symmetric grid)");
    c.ritz_degree = integer(j, "ritz_degree", 1);
    c.count = static_cast<std::size_t>(integer(j, "count", 0));
    c.wave = wave_of(j.at("wave"));
    return c;
}

Json to_json(const SpectrumConfig& c) {
    Json j = Json::object();
    j["radius"] = c.radius;
    j["grid_n"] = c.grid_n;
    j["ritz_degree"] = c.ritz_degree;
    j["count"] = static_cast<long long>(c.count);
    j["wave"] = wave_json(c.wave);
    return j;
}

}  // namespace clusterem

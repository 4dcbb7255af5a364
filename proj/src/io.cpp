#include "clusterem/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace clusterem {

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("format must be csv or json, got \"" + s + "\"");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

bool is_complex_column(const Table& t, std::size_t c) {
    for (const auto& row : t.rows)
        if (std::holds_alternative<cplx>(row[c])) return true;
    return false;
}

Json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> Json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, cplx>) {
                Json j = Json::object();
                j["re"] = v.real();
                j["im"] = v.imag();
                return j;
            } else if constexpr (std::is_same_v<V, double>) {
                if (!std::isfinite(v)) return Json(format_double(v));
                return Json(v);
            } else {
                return Json(v);
            }
        },
        c);
}

Json vec_json(const Point& p) { return Json::array({p(0), p(1), p(2)}); }

}  // namespace

std::string to_csv(const Table& t, const Json& meta) {
    std::ostringstream os;
    if (!meta.empty()) os << "# " << meta.dump() << "\n";
    std::vector<bool> cplx_col(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        cplx_col[c] = is_complex_column(t, c);
        if (c) os << ",";
        if (cplx_col[c])
            os << csv_escape(t.columns[c] + "_re") << "," << csv_escape(t.columns[c] + "_im");
        else
            os << csv_escape(t.columns[c]);
    }
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ",";
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, cplx>)
                        os << format_double(v.real()) << "," << format_double(v.imag());
                    else if constexpr (std::is_same_v<V, double>) {
                        os << format_double(v);
                        if (cplx_col[c]) os << ",0";
                    } else if constexpr (std::is_same_v<V, std::string>)
                        os << csv_escape(v);
                    else if constexpr (std::is_same_v<V, bool>)
                        os << (v ? "true" : "false");
                    else
                        os << v;
                },
                row[c]);
        }
        os << "\n";
    }
    return os.str();
}

Json to_json(const Report& r) {
    Json j = Json::object();
    j["kind"] = r.kind;
    j["ok"] = r.all_ok;
    j["meta"] = r.meta;
    Json tabs = Json::object();
    auto put = [&](const Table& t) {
        Json rows = Json::array();
        for (const auto& row : t.rows) {
            Json o = Json::object();
            for (std::size_t c = 0; c < row.size(); ++c) o[t.columns[c]] = cell_json(row[c]);
            rows.push_back(o);
        }
        tabs[t.name] = rows;
    };
    for (const auto& t : r.tables) put(t);
    if (!r.plot.rows.empty()) put(r.plot);
    j["tables"] = tabs;
    return j;
}

std::vector<std::filesystem::path> emit(const Report& r, Format f, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& p, const std::string& body) {
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
        os << body;
        if (!os) throw std::runtime_error("write failed for " + p.string());
        written.push_back(p);
    };
    if (f == Format::Json) {
        write(dir / (r.kind + ".json"), to_json(r).dump(2) + "\n");
    } else {
        Json meta = r.meta;
        meta["ok"] = r.all_ok;
        for (const auto& t : r.tables) write(dir / (r.kind + "_" + t.name + ".csv"), to_csv(t, meta));
        if (!r.plot.rows.empty()) write(dir / (r.kind + "_plot.csv"), to_csv(r.plot, Json::object()));
    }
    return written;
}

Json scales_to_json(const ScaleSet& s) {
    Json j = Json::object();
    j["a"] = s.a;
    j["h"] = s.h;
    j["eta0"] = s.eta0;
    j["eta"] = s.eta;
    j["c0"] = s.c0;
    j["sign"] = sign_name(s.sign);
    j["c_r"] = s.cr;
    j["lambda_n0_B"] = s.lambda_nB;
    j["d"] = s.d;
    j["k"] = s.k;
    return j;
}

Json domain_to_json(const DomainShape& d) {
    Json j = Json::object();
    if (d.kind == DomainShape::Kind::Box) {
        j["kind"] = "box";
        j["center"] = vec_json(d.center);
        j["extents"] = vec_json(d.extents);
    } else {
        j["kind"] = "ball";
        j["center"] = vec_json(d.center);
        j["radius"] = d.radius;
    }
    return j;
}

namespace {

Point point_from_json(const Json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(key + " must be an array of 3 numbers");
    Point p;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number()) throw ConfigError(key + " must be an array of 3 numbers");
        p(i) = j[i].get<double>();
    }
    return p;
}

void require_keys(const Json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    for (const auto& k : allowed)
        if (!j.contains(k)) throw ConfigError("missing key \"" + k + "\" in " + where);
}

}  // namespace

DomainShape domain_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("domain.kind must be \"box\" or \"ball\"");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "box") {
            require_keys(j, "domain", {"kind", "center", "extents"});
            return DomainShape::box(point_from_json(j["center"], "domain.center"),
                                    point_from_json(j["extents"], "domain.extents"));
        }
        if (kind == "ball") {
            require_keys(j, "domain", {"kind", "center", "radius"});
            if (!j["radius"].is_number()) throw ConfigError("domain.radius must be a number");
            return DomainShape::ball(point_from_json(j["center"], "domain.center"), j["radius"].get<double>());
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    throw ConfigError("domain.kind must be \"box\" or \"ball\"");
}

Json cluster_to_json(const Cluster& c) {
    Json j = Json::object();
    j["domain"] = domain_to_json(c.domain);
    j["d"] = c.d;
    Json cs = Json::array();
    for (const auto& z : c.centers) cs.push_back(vec_json(z));
    j["centers"] = cs;
    return j;
}

Cluster cluster_from_json(const Json& j) {
    require_keys(j, "cluster", {"domain", "d", "centers"});
    Cluster c;
    c.domain = domain_from_json(j["domain"]);
    if (!j["d"].is_number() || !(j["d"].get<double>() > 0)) throw ConfigError("cluster.d must be a positive number");
    c.d = j["d"].get<double>();
    if (!j["centers"].is_array()) throw ConfigError("cluster.centers must be an array");
    for (const auto& z : j["centers"]) c.centers.push_back(point_from_json(z, "cluster.centers[]"));
    c.origin = c.domain.kind == DomainShape::Kind::Box ? Point(c.domain.min_corner() + Point::Constant(0.5 * c.d))
                                                       : c.domain.center;
    for (const auto& z : c.centers) {
        const Point q = (z - c.origin) / c.d;
        LatticeIndex id{};
        bool aligned = true;
        for (int a = 0; a < 3; ++a) {
            id[a] = static_cast<int>(std::lround(q(a)));
            aligned = aligned && std::abs(q(a) - id[a]) < 1e-9;
        }
        if (!aligned) {
            c.lattice.clear();
            break;
        }
        c.lattice.push_back(id);
    }
    if (c.lattice.size() != c.centers.size()) c.lattice.clear();
    return c;
}

Table far_field_table(const std::string& name, const FarFieldSamples& s) {
    Table t{name, {"x1", "x2", "x3", "E1", "E2", "E3"}, {}};
    for (std::size_t i = 0; i < s.directions.size(); ++i) {
        const Point& x = s.directions[i];
        const CVec3& e = s.values[i];
        t.rows.push_back({x(0), x(1), x(2), e(0), e(1), e(2)});
    }
    return t;
}

namespace {

Json wave_json(const WaveSpec& w) {
    Json j = Json::object();
    j["theta"] = vec_json(w.theta);
    j["p"] = vec_json(w.p);
    return j;
}

}  // namespace

Report convergence_report(const ConvergenceConfig& cfg, const ConvergenceReport& r) {
    Report rep;
    rep.kind = "converge";
    rep.meta["domain"] = domain_to_json(cfg.domain);
    rep.meta["h"] = cfg.h;
    rep.meta["eta0"] = cfg.eta0;
    rep.meta["c0"] = cfg.c0;
    rep.meta["c_r"] = cfg.cr;
    rep.meta["lambda_n0_B"] = cfg.lambda_nB;
    rep.meta["sign"] = sign_name(cfg.sign);
    rep.meta["wave"] = wave_json(cfg.wave);
    rep.meta["grid_n"] = cfg.grid_n;
    rep.meta["directions"] = static_cast<long long>(r.directions.size());
    rep.meta["slope_tail"] = r.slope;
    rep.meta["slope_all"] = r.slope_all;
    rep.meta["strictly_decreasing"] = r.strictly_decreasing;
    Table t{"rows",
            {"a", "d", "count", "k", "xi", "margin", "sup_error", "l2_error", "rel_error", "sup_cluster",
             "sup_effective", "fl_residual", "lse_residual", "lse_iterations", "relative_skipped", "status"},
            {}};
    for (const auto& row : r.rows) {
        t.rows.push_back({row.a, row.d, static_cast<long long>(row.count), row.k, row.xi, row.margin, row.sup_error,
                          row.l2_error, row.rel_error, row.sup_cluster, row.sup_effective, row.fl_residual,
                          row.lse_residual, static_cast<long long>(row.lse_iterations), row.relative_skipped,
                          row.status});
        rep.all_ok = rep.all_ok && row.status.rfind("ok", 0) == 0;
        rep.plot.rows.push_back({std::string("sup_error_vs_a"), row.a, row.sup_error});
    }
    rep.tables.push_back(t);
    return rep;
}

Report regime_report(const RegimeMapConfig& cfg, const RegimeMapReport& r) {
    Report rep;
    rep.kind = "effective";
    rep.meta["xi_min"] = cfg.xi_min;
    rep.meta["xi_max"] = cfg.xi_max;
    rep.meta["xi_steps"] = cfg.xi_steps;
    rep.meta["k"] = cfg.k;
    rep.meta["delta_star"] = cfg.delta_star;
    rep.meta["delta"] = r.delta;
    rep.meta["domain"] = domain_to_json(cfg.domain);
    rep.meta["window_lo"] = r.window.lo;
    rep.meta["window_hi"] = r.window.hi;
    rep.meta["window_empty"] = r.window.empty();
    Table t{"map", {"xi", "sign", "mu11", "mu22", "mu33", "regime", "in_window"}, {}};
    for (const auto& row : r.rows) {
        t.rows.push_back({row.xi, sign_name(row.sign), row.mu, row.mu, row.mu, regime_name(row.regime),
                          row.in_coercivity_window});
        rep.plot.rows.push_back({std::string("mu_") + sign_name(row.sign), row.xi, row.mu});
    }
    rep.tables.push_back(t);
    return rep;
}

Report resonance_report(const ResonanceConfig& cfg, const ResonanceReport& r) {
    Report rep;
    rep.kind = "resonance";
    rep.meta["radius"] = cfg.radius;
    rep.meta["grid_n"] = cfg.grid_n;
    rep.meta["eta0"] = cfg.eta0;
    rep.meta["lambda_n0_B"] = cfg.lambda_nB;
    rep.meta["sign"] = "minus";
    rep.meta["wave"] = wave_json(cfg.wave);
    rep.meta["lambda_target"] = r.lambda_target;
    rep.meta["source_overlap"] = r.overlap;
    rep.meta["dispersion_root"] = r.dispersion_root;
    rep.meta["slope"] = r.slope;
    rep.meta["peak_alignment_deg"] = r.peak_alignment_deg;
    rep.meta["sign_asymmetry"] = r.sign_asymmetry;
    Table t{"scan",
            {"beta", "xi", "k", "field_norm", "source_norm", "ratio", "far_max", "backscatter_angle_deg", "residual",
             "iterations", "off_resonance", "status"},
            {}};
    for (const auto& row : r.rows) {
        t.rows.push_back({row.beta, row.xi, row.k, row.field_norm, row.source_norm, row.ratio, row.far_max,
                          row.backscatter_angle_deg, row.residual, static_cast<long long>(row.iterations),
                          row.off_resonance, row.status});
        rep.all_ok = rep.all_ok && row.status == "ok";
        if (!row.off_resonance)
            rep.plot.rows.push_back({std::string(row.beta > 0 ? "H_vs_beta_pos" : "H_vs_beta_neg"), std::abs(row.beta),
                                     row.field_norm});
    }
    rep.tables.push_back(t);
    return rep;
}

Report counting_report(const CountingConfig& cfg, const CountingReport& r) {
    Report rep;
    rep.kind = "counting";
    rep.meta["domain"] = domain_to_json(cfg.domain);
    rep.meta["boundary_domain"] = domain_to_json(cfg.boundary_domain);
    rep.meta["subdivisions"] = cfg.subdivisions;
    Json sl = Json::object();
    for (const auto& [k, s] : r.slopes) sl["kappa_" + format_double(k)] = s;
    sl["boundary"] = r.boundary_slope;
    rep.meta["slopes"] = sl;
    Table sums{"sums", {"d", "kappa", "count", "max_sum"}, {}};
    for (const auto& s : r.sums) {
        sums.rows.push_back({s.d, s.kappa, static_cast<long long>(s.count), s.value});
        rep.plot.rows.push_back({"kappa_" + format_double(s.kappa), s.d, s.value});
    }
    Table bnd{"boundary", {"d", "count", "statistic"}, {}};
    for (const auto& b : r.boundary) {
        bnd.rows.push_back({b.d, static_cast<long long>(b.count), b.value});
        rep.plot.rows.push_back({std::string("boundary"), b.d, b.value});
    }
    rep.tables.push_back(sums);
    rep.tables.push_back(bnd);
    return rep;
}

Report spectrum_report(const SpectrumConfig& cfg, const SpectrumStudy& s) {
    Report rep;
    rep.kind = "spectrum";
    rep.meta["radius"] = cfg.radius;
    rep.meta["grid_n"] = cfg.grid_n;
    rep.meta["ritz_degree"] = cfg.ritz_degree;
    rep.meta["total_modes"] = static_cast<long long>(s.report.total_modes);
    rep.meta["outside_unit_interval"] = static_cast<long long>(s.report.outside_unit_interval);
    rep.meta["lambda_target"] = s.lambda_target;
    rep.meta["source_overlap"] = s.overlap;
    rep.meta["gradient_nearest_third"] = s.near_third;
    rep.meta["gradient_cluster_half"] = static_cast<long long>(s.cluster_half);
    rep.meta["n_plus_nprime"] = s.n_plus_nprime;
    Json q = Json::array();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q.push_back(s.q_surrogate(i, j).real());
    rep.meta["q_surrogate"] = q;
    Table full{"eigenvalues", {"index", "value", "tag"}, {}};
    for (std::size_t i = 0; i < s.report.eigenvalues.size(); ++i)
        full.rows.push_back({static_cast<long long>(i), s.report.eigenvalues[i], s.report.tags[i]});
    Table grad{"gradient", {"index", "value"}, {}};
    for (std::size_t i = 0; i < s.report.gradient_eigenvalues.size(); ++i) {
        grad.rows.push_back({static_cast<long long>(i), s.report.gradient_eigenvalues[i]});
        rep.plot.rows.push_back({std::string("gradient_spectrum"), static_cast<double>(i), s.report.gradient_eigenvalues[i]});
    }
    rep.tables.push_back(full);
    rep.tables.push_back(grad);
    return rep;
}

}  // namespace clusterem

#include "clusterem/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

namespace clusterem {

namespace {

double fit_tail_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const std::size_t take = std::max<std::size_t>(2, (n + 1) / 2);
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t start = n >= take ? n - take : 0;
    return loglog_slope(std::vector<double>(x.begin() + start, x.end()), std::vector<double>(y.begin() + start, y.end()));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ConvergenceReport run_convergence(const ConvergenceConfig& cfg) {
    ConvergenceReport rep;
    rep.directions = standard_directions(cfg.direction_level);
    const Dyadic P0 = p0_ball();
    const VolumeGrid grid = make_grid(cfg.domain, cfg.grid_n);
    for (double a : cfg.a_values) {
        ConvergenceRow row;
        row.a = a;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const ScaleSet s = derive_scales(a, cfg.h, cfg.eta0, cfg.c0, cfg.sign, cfg.cr, cfg.lambda_nB);
            row.d = s.d;
            row.k = s.k;
            row.margin = invertibility_margin(s, P0);
            const Cluster cl = generate_cluster(cfg.domain, s.d);
            row.count = cl.size();
            const IncidentWave wave(s.k, cfg.wave.theta, cfg.wave.p);
            const FoldyLaxSolution fl = assemble_and_solve(cl, s, P0, wave);
            row.fl_residual = fl.residual;
            row.fl_iterations = fl.iterations;
            const FarFieldSamples ff = cluster_far_field(fl, cl, s, rep.directions);

            row.xi = coupling_xi(cfg.eta0, s.k, cfg.c0, cfg.cr);
            const Dyadic T = tensor_T(row.xi, P0, cfg.sign);
            const LseSolution lse = solve_effective_lse(grid, row.xi, T, s.k, wave, cfg.sign);
            row.lse_residual = lse.residual;
            row.lse_iterations = lse.iterations;
            const FarFieldSamples fe = effective_far_field(lse.H, grid, row.xi, T, s.k, cfg.sign, rep.directions);

            double l2 = 0;
            for (std::size_t i = 0; i < rep.directions.size(); ++i) {
                const double e = (fe.values[i] - ff.values[i]).norm();
                row.sup_error = std::max(row.sup_error, e);
                row.sup_cluster = std::max(row.sup_cluster, ff.values[i].norm());
                row.sup_effective = std::max(row.sup_effective, fe.values[i].norm());
                l2 += e * e;
            }
            row.l2_error = std::sqrt(l2 / rep.directions.size());
            if (row.sup_effective > 1e-300 && row.xi > 1e-12) {
                row.rel_error = row.sup_error / row.sup_effective;
            } else {
                row.relative_skipped = true;
                row.rel_error = 0;
            }
            if (fl.margin_warning) row.status = "ok-margin-warning";
        } catch (const std::exception& e) {
            row.status = std::string("failed: ") + e.what();
        }
        row.wall_time = seconds_since(t0);
        std::clog << "converge a=" << a << " count=" << row.count << " err=" << row.sup_error << " time=" << row.wall_time
                  << "s\n";
        rep.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const auto& r : rep.rows)
        if (r.status.rfind("ok", 0) == 0) {
            xs.push_back(r.a);
            ys.push_back(r.sup_error);
        }
    rep.slope = fit_tail_slope(xs, ys);
    rep.slope_all = xs.size() >= 2 ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    rep.strictly_decreasing = ys.size() == rep.rows.size() && ys.size() >= 2;
    for (std::size_t i = 1; i < ys.size(); ++i) rep.strictly_decreasing = rep.strictly_decreasing && ys[i] < ys[i - 1];
    return rep;
}

RegimeMapReport run_regime_map(const RegimeMapConfig& cfg) {
    RegimeMapReport rep;
    rep.delta = spectral_gap_delta(cfg.delta_star);
    rep.window = coercivity_window(cfg.k, cfg.domain.diameter(), cfg.domain.volume(), rep.delta);
    std::vector<double> xis;
    for (int i = 0; i < cfg.xi_steps; ++i)
        xis.push_back(cfg.xi_steps == 1 ? cfg.xi_min
                                        : cfg.xi_min + (cfg.xi_max - cfg.xi_min) * i / (cfg.xi_steps - 1.0));
    // the two sign boundaries are always sampled
    const double pi3 = kPi * kPi * kPi;
    for (double b : {pi3 / 8.0, pi3 / 4.0})
        if (b >= cfg.xi_min && b <= cfg.xi_max) xis.push_back(b);
    std::sort(xis.begin(), xis.end());
    xis.erase(std::unique(xis.begin(), xis.end()), xis.end());
    for (Sign sg : {Sign::Minus, Sign::Plus})
        for (double xi : xis) {
            RegimeRow r;
            r.xi = xi;
            r.sign = sg;
            r.regime = classify_regime(xi, sg);
            try {
                r.mu = ball_mu_scalar(xi, sg);
            } catch (const DegenerateError&) {
                r.mu = std::numeric_limits<double>::quiet_NaN();
            }
            r.in_coercivity_window = rep.window.contains(xi);
            rep.rows.push_back(r);
        }
    return rep;
}

ResonanceReport resonance_amplification_scan(const VolumeGrid& g, const MagnetizationEigensystem& es,
                                             double lambda_target, const ResonanceConfig& cfg) {
    ResonanceReport rep;
    rep.lambda_target = lambda_target;
    rep.dispersion_root = dispersion_xi(lambda_target);
    const Dyadic P0 = p0_ball();
    const Sign sign = Sign::Minus;  // the resonant branch
    std::vector<Point> dirs = standard_directions(cfg.direction_level);
    const Point back = -cfg.wave.theta;
    dirs.push_back(back);

    std::vector<std::pair<double, bool>> betas;
    for (double b : cfg.beta_values) betas.push_back({b, false});
    // off-resonance rows sit at xi = f pi^3/8, inside the dielectric-positive range where 1 - xi t lambda > 0
    // for every lambda in (0,1)
    for (double f : cfg.off_resonance_fractions) betas.push_back({0.5 * f - 1.0 / (3.0 * lambda_target - 1.0), true});

    for (const auto& [beta, off] : betas) {
        ResonanceRow row;
        row.beta = beta;
        row.off_resonance = off;
        try {
            row.xi = detuned_xi(lambda_target, beta);
            const PlasmonicFrequency pf = plasmonic_frequency(cfg.eta0, cfg.lambda_nB, lambda_target, beta);
            row.k = std::sqrt(pf.k2);
            const Dyadic T = tensor_T(row.xi, P0, sign);
            const double t = T(0, 0).real();
            const double c = row.xi / sign_value(sign);
            // k -> 0 limit of the operator is I + c t A with A the magnetization matrix
            LseOptions opt;
            opt.preconditioner = [&](const CVector& x, CVector& y) {
                y = es.apply_function(x, [&](double lam) { return 1.0 / (1.0 + c * t * lam); });
            };
            const IncidentWave wave(row.k, cfg.wave.theta, cfg.wave.p);
            const LseSolution sol = solve_effective_lse(g, row.xi, T, row.k, wave, sign, opt);
            row.residual = sol.residual;
            row.iterations = sol.iterations;
            row.field_norm = field_norm(g, sol.H);
            row.source_norm = field_norm(g, incident_field(g, wave));
            row.ratio = row.field_norm / row.source_norm;
            const FarFieldSamples ff = effective_far_field(sol.H, g, row.xi, T, row.k, sign, dirs);
            for (std::size_t i = 0; i + 1 < dirs.size(); ++i) row.far_max = std::max(row.far_max, ff.values[i].norm());
            const CVec3& eb = ff.values.back();
            const double along = std::abs(cfg.wave.p.cast<cplx>().dot(eb));
            row.backscatter_angle_deg = std::acos(std::min(1.0, along / eb.norm())) * 180.0 / kPi;
        } catch (const std::exception& e) {
            row.status = std::string("failed: ") + e.what();
        }
        rep.rows.push_back(row);
    }

    std::vector<double> xs, ys;
    double peak = -1;
    for (const auto& r : rep.rows) {
        if (r.off_resonance || r.status != "ok") continue;
        xs.push_back(std::abs(r.beta));
        ys.push_back(r.field_norm);
        if (r.field_norm > peak) {
            peak = r.field_norm;
            rep.peak_alignment_deg = r.backscatter_angle_deg;
        }
    }
    rep.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rep.rows)
        for (const auto& q : rep.rows)
            if (!r.off_resonance && !q.off_resonance && r.beta > 0 && q.beta == -r.beta && r.status == "ok" &&
                q.status == "ok")
                rep.sign_asymmetry = std::max(rep.sign_asymmetry, std::abs(r.field_norm - q.field_norm) /
                                                                      std::max(r.field_norm, q.field_norm));
    return rep;
}

ResonanceReport run_resonance(const ResonanceConfig& cfg) {
    const VolumeGrid g = make_grid(DomainShape::ball(Point::Zero(), cfg.radius), cfg.grid_n);
    const MagnetizationEigensystem es(g);
    const GridField src = constant_field(g, cfg.wave.theta.cross(cfg.wave.p).cast<cplx>());
    const auto mode = resonant_mode(es, src);
    ResonanceReport rep = resonance_amplification_scan(g, es, mode.value, cfg);
    const auto ov = es.overlaps(src);
    const auto modes = es.modes();
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i].irrep == mode.irrep && modes[i].column == mode.column) rep.overlap = ov[i];
    return rep;
}

CountingReport run_counting(const CountingConfig& cfg) {
    CountingReport rep;
    for (double kappa : cfg.kappas) {
        std::vector<double> ds, vs;
        for (int inv : cfg.interior_pitch_inverses) {
            const double d = 1.0 / inv;
            const Cluster cl = generate_cluster(cfg.domain, d);
            const double v = max_counting_sum(cl, kappa);
            rep.sums.push_back({d, kappa, v, cl.size()});
            ds.push_back(d);
            vs.push_back(v);
        }
        rep.slopes.push_back({kappa, loglog_slope(ds, vs)});
    }
    std::vector<double> ds, vs;
    for (int inv : cfg.boundary_pitch_inverses) {
        const double d = 1.0 / inv;
        const Cluster cl = generate_cluster(cfg.boundary_domain, d);
        const double v = boundary_counting_statistic(cl, cfg.subdivisions);
        rep.boundary.push_back({d, v, cl.size()});
        ds.push_back(d);
        vs.push_back(v);
    }
    rep.boundary_slope = ds.size() >= 2 ? loglog_slope(ds, vs) : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

SpectrumStudy run_spectrum(const SpectrumConfig& cfg) {
    SpectrumStudy st;
    const VolumeGrid g = make_grid(DomainShape::ball(Point::Zero(), cfg.radius), cfg.grid_n);
    const MagnetizationEigensystem es(g);
    st.report = magnetization_spectrum(g, es, cfg.count, cfg.ritz_degree);

    const GridField src = constant_field(g, cfg.wave.theta.cross(cfg.wave.p).cast<cplx>());
    const auto mode = resonant_mode(es, src);
    st.lambda_target = mode.value;
    const auto ov = es.overlaps(src);
    const auto modes = es.modes();
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i].irrep == mode.irrep && modes[i].column == mode.column) st.overlap = ov[i];

    double best = std::numeric_limits<double>::infinity();
    for (double v : st.report.gradient_eigenvalues) {
        if (std::abs(v - 1.0 / 3.0) < std::abs(best - 1.0 / 3.0)) best = v;
        if (std::abs(v - 0.5) <= 0.05) ++st.cluster_half;
    }
    st.near_third = best;

    // unit-norm constant field: the ball's 1/3 eigenfunction
    const double w = g.cell_volume();
    const GridField e = constant_field(g, CVec3(1.0 / std::sqrt(g.total_weight()), 0, 0));
    const GridField ne = newtonian_apply(e, g, 0.0) + nprime_apply(e, g);
    st.n_plus_nprime = (w * e.dot(ne)).real();

    const Eigen::VectorXd v = es.mode_vector(mode);
    Point integral = Point::Zero();
    for (std::size_t i = 0; i < g.size(); ++i) integral += std::sqrt(w) * v.segment<3>(3 * i);
    st.q_surrogate = (integral * integral.transpose()).cast<cplx>();
    return st;
}

}  // namespace clusterem

// Command-line driver: one subcommand per solver or study.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "clusterem/config.hpp"
#include "clusterem/effective.hpp"
#include "clusterem/foldylax.hpp"
#include "clusterem/io.hpp"
#include "clusterem/studies.hpp"
#include "clusterem/volume.hpp"

using namespace clusterem;

namespace {

Report run_foldylax(const FoldylaxConfig& c) {
    const auto& si = c.scales;
    const ScaleSet s = derive_scales(si.a, si.h, si.eta0, si.c0, si.sign, si.cr, si.lambda_nB);
    const Cluster cl = generate_cluster(c.domain, s.d);
    const Dyadic P0 = p0_ball();
    const IncidentWave wave(s.k, c.wave.theta, c.wave.p);
    Report rep;
    rep.kind = "foldylax";
    rep.meta["config"] = to_json(c);
    rep.meta["scales"] = scales_to_json(s);
    rep.meta["count"] = static_cast<long long>(cl.size());
    try {
        const FoldyLaxSolution sol = assemble_and_solve(cl, s, P0, wave);
        rep.meta["margin"] = sol.margin;
        rep.meta["margin_warning"] = sol.margin_warning;
        rep.meta["residual"] = sol.residual;
        rep.meta["iterative"] = sol.iterative;
        rep.tables.push_back(far_field_table("farfield", cluster_far_field(sol, cl, s, standard_directions(c.direction_level))));
        Table q{"vectors", {"index", "z1", "z2", "z3", "Q1", "Q2", "Q3"}, {}};
        for (std::size_t m = 0; m < cl.size(); ++m) {
            const Point& z = cl.centers[m];
            const CVec3& v = sol.vectors[m];
            q.rows.push_back({static_cast<long long>(m), z(0), z(1), z(2), v(0), v(1), v(2)});
        }
        rep.tables.push_back(q);
    } catch (const SolverError& e) {
        rep.all_ok = false;
        rep.meta["error"] = e.what();
    }
    return rep;
}

Report run_lse(const LseConfig& c) {
    const auto& si = c.scales;
    const ScaleSet s = derive_scales(si.a, si.h, si.eta0, si.c0, si.sign, si.cr, si.lambda_nB);
    const VolumeGrid g = make_grid(c.domain, c.grid_n);
    const double xi = coupling_xi(si.eta0, s.k, si.c0, si.cr);
    const Dyadic T = tensor_T(xi, p0_ball(), si.sign);
    const IncidentWave wave(s.k, c.wave.theta, c.wave.p);
    Report rep;
    rep.kind = "lse";
    rep.meta["config"] = to_json(c);
    rep.meta["scales"] = scales_to_json(s);
    rep.meta["xi"] = xi;
    rep.meta["cells"] = static_cast<long long>(g.size());
    try {
        const LseSolution sol = solve_effective_lse(g, xi, T, s.k, wave, si.sign);
        rep.meta["residual"] = sol.residual;
        rep.meta["iterations"] = sol.iterations;
        rep.tables.push_back(far_field_table(
            "farfield", effective_far_field(sol.H, g, xi, T, s.k, si.sign, standard_directions(c.direction_level))));
        Table f{"field", {"cell", "x1", "x2", "x3", "H1", "H2", "H3"}, {}};
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point& x = g.centers[i];
            f.rows.push_back({static_cast<long long>(i), x(0), x(1), x(2), sol.H(3 * i), sol.H(3 * i + 1),
                              sol.H(3 * i + 2)});
        }
        rep.tables.push_back(f);
    } catch (const SolverError& e) {
        rep.all_ok = false;
        rep.meta["error"] = e.what();
    }
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense dielectric nanoparticle clusters: Foldy-Lax and effective-medium solvers"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir = "out", format = "csv";
    int threads = 1;
    std::vector<std::string> overrides;
    const std::vector<std::string> names{"foldylax", "lse", "effective", "converge", "resonance", "counting", "spectrum"};
    for (const auto& n : names) {
        auto* sub = app.add_subcommand(n, "run the " + n + " task");
        sub->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--set", overrides, "key=value override (repeatable)");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif

    Report rep;
    try {
        Json j = read_json_file(config_path);
        for (const auto& o : overrides) apply_override(j, o);
        if (cmd == "foldylax") {
            rep = run_foldylax(parse_foldylax(j));
        } else if (cmd == "lse") {
            rep = run_lse(parse_lse(j));
        } else if (cmd == "effective") {
            const auto c = parse_regime_map(j);
            rep = regime_report(c, run_regime_map(c));
        } else if (cmd == "converge") {
            const auto c = parse_convergence(j);
            rep = convergence_report(c, run_convergence(c));
        } else if (cmd == "resonance") {
            const auto c = parse_resonance(j);
            rep = resonance_report(c, run_resonance(c));
        } else if (cmd == "counting") {
            const auto c = parse_counting(j);
            rep = counting_report(c, run_counting(c));
        } else {
            const auto c = parse_spectrum(j);
            rep = spectrum_report(c, run_spectrum(c));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << cmd << " failed: " << e.what() << "\n";
        return 1;
    }

    try {
        for (const auto& p : emit(rep, parse_format(format), out_dir)) std::cout << p.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 1;
    }
    return rep.all_ok ? 0 : 1;
}

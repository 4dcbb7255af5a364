#pragma once
#include <string>
#include <vector>

#include "clusterem/effective.hpp"
#include "clusterem/foldylax.hpp"
#include "clusterem/geometry.hpp"
#include "clusterem/spectrum.hpp"
#include "clusterem/volume.hpp"

namespace clusterem {

struct WaveSpec {
    Point theta = Point::UnitZ();
    Point p = Point::UnitX();
};

struct ScaleInputs {
    double a = 0, h = 0, eta0 = 0, c0 = 0, cr = 0, lambda_nB = 0;
    Sign sign = Sign::Plus;
};

// ---- convergence -------------------------------------------------------

struct ConvergenceConfig {
    DomainShape domain;
    std::vector<double> a_values;  // strictly decreasing
    double h = 0, eta0 = 0, c0 = 0, cr = 0, lambda_nB = 0;
    Sign sign = Sign::Plus;
    WaveSpec wave;
    int grid_n = 0;
    int direction_level = 1;
};

struct ConvergenceRow {
    double a = 0, d = 0;
    std::size_t count = 0;
    double k = 0, xi = 0, margin = 0;
    double sup_error = 0, l2_error = 0, rel_error = 0;
    double sup_cluster = 0, sup_effective = 0;
    double fl_residual = 0, lse_residual = 0;
    int fl_iterations = 0, lse_iterations = 0;
    bool relative_skipped = false;
    double wall_time = 0;  // seconds; logged, not part of the deterministic tables
    std::string status = "ok";
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double slope = 0;           // fitted on the last ceil(half) rows
    double slope_all = 0;       // all rows
    bool strictly_decreasing = false;
    std::vector<Point> directions;
};

ConvergenceReport run_convergence(const ConvergenceConfig& cfg);

// ---- regime map ---------------------------------------------------------

struct RegimeMapConfig {
    double xi_min = 0, xi_max = 0;
    int xi_steps = 0;
    double k = 0;
    double delta_star = 0;
    DomainShape domain;
};

struct RegimeRow {
    double xi = 0;
    Sign sign = Sign::Plus;
    double mu = 0;  // ball diagonal, NaN at the pole
    Regime regime = Regime::Degenerate;
    bool in_coercivity_window = false;
};

struct RegimeMapReport {
    std::vector<RegimeRow> rows;
    XiWindow window{};
    int delta = 0;
};

RegimeMapReport run_regime_map(const RegimeMapConfig& cfg);

// ---- resonance ----------------------------------------------------------

struct ResonanceConfig {
    double radius = 1;
    int grid_n = 0;
    double eta0 = 0, lambda_nB = 0;
    std::vector<double> beta_values;             // resonant scan
    std::vector<double> off_resonance_fractions;  // xi = fraction * pi^3/8, fractions in (0,1)
    WaveSpec wave;
    int direction_level = 1;
};

struct ResonanceRow {
    double beta = 0, xi = 0, k = 0;
    double field_norm = 0, source_norm = 0, ratio = 0;
    double far_max = 0;
    double backscatter_angle_deg = 0;
    double residual = 0;
    int iterations = 0;
    bool off_resonance = false;
    std::string status = "ok";
};

struct ResonanceReport {
    double lambda_target = 0, overlap = 0, dispersion_root = 0;
    std::vector<ResonanceRow> rows;
    double slope = 0;
    double peak_alignment_deg = 0;
    double sign_asymmetry = 0;  // max relative |H(+b) - H(-b)| over mirrored pairs
};

// scan with an already computed eigensystem and target eigenvalue
ResonanceReport resonance_amplification_scan(const VolumeGrid& g, const MagnetizationEigensystem& es,
                                             double lambda_target, const ResonanceConfig& cfg);
ResonanceReport run_resonance(const ResonanceConfig& cfg);

// ---- counting -----------------------------------------------------------

struct CountingConfig {
    DomainShape domain;           // box for the interior sums
    DomainShape boundary_domain;  // domain for the boundary statistic
    std::vector<int> interior_pitch_inverses;
    std::vector<int> boundary_pitch_inverses;
    std::vector<double> kappas;
    int subdivisions = 4;
};

struct CountingReport {
    struct SumRow {
        double d, kappa, value;
        std::size_t count;
    };
    struct BoundaryRow {
        double d, value;
        std::size_t count;
    };
    std::vector<SumRow> sums;
    std::vector<BoundaryRow> boundary;
    std::vector<std::pair<double, double>> slopes;  // (kappa, slope)
    double boundary_slope = 0;
};

CountingReport run_counting(const CountingConfig& cfg);

// ---- spectrum -----------------------------------------------------------

struct SpectrumConfig {
    double radius = 1;
    int grid_n = 0;
    int ritz_degree = 8;
    std::size_t count = 0;
    WaveSpec wave;  // selects the resonant mode by overlap with theta x p
};

struct SpectrumStudy {
    SpectrumReport report;
    double lambda_target = 0, overlap = 0;
    double near_third = 0;       // gradient eigenvalue closest to 1/3
    std::size_t cluster_half = 0;  // gradient eigenvalues within 0.05 of 1/2
    double n_plus_nprime = 0;    // <(N + N') e, e> for the unit constant mode
    Dyadic q_surrogate;          // (int e)(int e)^T of the resonant mode
};

SpectrumStudy run_spectrum(const SpectrumConfig& cfg);

}  // namespace clusterem

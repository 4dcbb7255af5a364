#pragma once
#include <vector>

#include "clusterem/geometry.hpp"
#include "clusterem/linalg.hpp"
#include "clusterem/tensor.hpp"

namespace clusterem {

struct IncidentWave {
    double k = 0;
    Point theta = Point::UnitZ();
    Point p = Point::UnitX();

    IncidentWave() = default;
    IncidentWave(double k, const Point& theta, const Point& p);  // validates |theta|=|p|=1, theta.p=0
    // (theta x p) e^{ik theta.x}
    CVec3 magnetic(const Point& x) const;
    CVec3 electric(const Point& x) const;
};

CVec3 incident_magnetic(const IncidentWave& wave, const Point& x);

struct FarFieldSamples {
    std::vector<Point> directions;
    std::vector<CVec3> values;
};

// unit vectors through the lattice points on the surface of the cube [-level, level]^3;
// level 1 gives the 6 axes, 12 edge midpoints and 8 diagonals
std::vector<Point> standard_directions(int level);

enum class FoldyLaxForm { Q, U };
// which side P0 multiplies the dyadic Green's function on
enum class BlockOrder { P0Left, P0Right };

struct FoldyLaxOptions {
    FoldyLaxForm form = FoldyLaxForm::Q;
    BlockOrder order = BlockOrder::P0Left;
    bool force_iterative = false;
    std::size_t direct_limit = 3000;  // largest 3*count solved densely
    GmresOptions gmres{1e-10, 100, 10000};
};

struct FoldyLaxSolution {
    std::vector<CVec3> vectors;
    double residual = 0;
    FoldyLaxForm form = FoldyLaxForm::Q;
    BlockOrder order = BlockOrder::P0Left;
    bool iterative = false;
    int iterations = 0;
    double margin = 0;
    bool margin_warning = false;  // margin >= 1: Neumann series not guaranteed
};

double invertibility_margin(const ScaleSet& s, const Dyadic& P0);

// coupling constant eta k^2 a^{5-h}/(+/- c0), shared by the Q- and U-form
double interaction_strength(const ScaleSet& s);

FoldyLaxSolution assemble_and_solve(const Cluster& cluster, const ScaleSet& s, const Dyadic& P0,
                                    const IncidentWave& wave, const FoldyLaxOptions& opt = {});

// Q_m = a^{5-h}/(+/- c0) P0 U_m
std::vector<CVec3> q_from_u(const std::vector<CVec3>& U, const ScaleSet& s, const Dyadic& P0);

// relative residual of a candidate solution against the system it claims to solve
double foldylax_residual(const Cluster& cluster, const ScaleSet& s, const Dyadic& P0, const IncidentWave& wave,
                         const std::vector<CVec3>& x, FoldyLaxForm form, BlockOrder order);

// partial sums x_{n+1} = rhs + c B x_n, n terms
std::vector<CVec3> neumann_series(const Cluster& cluster, const ScaleSet& s, const Dyadic& P0,
                                  const IncidentWave& wave, int terms, FoldyLaxForm form = FoldyLaxForm::Q,
                                  BlockOrder order = BlockOrder::P0Left);

FarFieldSamples cluster_far_field(const FoldyLaxSolution& sol, const Cluster& cluster, const ScaleSet& s,
                                  const std::vector<Point>& directions);

}  // namespace clusterem

#pragma once
#include <memory>
#include <vector>

#include "clusterem/foldylax.hpp"
#include "clusterem/geometry.hpp"
#include "clusterem/linalg.hpp"

namespace clusterem {

// cubic voxels of side h; cells whose centres fall inside the domain are kept with full weight
struct VolumeGrid {
    DomainShape domain;
    int n = 0;     // cells across the largest extent (box) or the diameter (ball)
    double h = 0;  // cell side
    std::array<int, 3> dims{};  // background lattice size per axis
    Point origin = Point::Zero();  // centre of background cell (0,0,0)
    std::vector<Point> centers;
    std::vector<LatticeIndex> index;
    std::vector<double> weights;

    std::size_t size() const { return centers.size(); }
    double cell_volume() const { return h * h * h; }
    double total_weight() const;
    // equivalent-sphere radius of one cell
    double r_eq() const;
    // cell id at lattice position, -1 when outside
    long find(const LatticeIndex& id) const;

    std::vector<long> lookup;  // dense map over dims
};

VolumeGrid make_grid(const DomainShape& domain, int n);

// a GridField is one CVec3 per cell packed into a vector of length 3*cells
using GridField = CVector;

GridField constant_field(const VolumeGrid& g, const CVec3& v);
GridField incident_field(const VolumeGrid& g, const IncidentWave& wave);  // ik H^inc at the centres
double field_norm(const VolumeGrid& g, const GridField& f);              // weighted L2
std::size_t nearest_cell(const VolumeGrid& g, const Point& x);

// N^k: w_j Phi_k for j != i, self r_eq^2/2 + ik w/(4 pi)
GridField newtonian_apply(const GridField& f, const VolumeGrid& g, double k);
// grad M^k: -w_j grad grad Phi_k for j != i, self 1/3
GridField magnetization_apply(const GridField& f, const VolumeGrid& g, double k);
// N': w_j Phi_0 r^r^ for j != i, self r_eq^2/6
GridField nprime_apply(const GridField& f, const VolumeGrid& g);

// discrete curl by centred differences; cells lacking a neighbour get NaN
GridField discrete_curl(const GridField& f, const VolumeGrid& g);
// discrete divergence per cell, NaN where a neighbour is missing
Eigen::VectorXcd discrete_divergence(const GridField& f, const VolumeGrid& g);
// cells whose lattice neighbours up to `depth` steps along each axis all exist
std::vector<std::size_t> interior_cells(const VolumeGrid& g, int depth);
// ||div f|| over the interior cells relative to the Frobenius norm of the discrete Jacobian there;
// 0 for a divergence-free field, about 1/sqrt(3) for a generic one
double divergence_ratio(const GridField& f, const VolumeGrid& g, int depth = 2);

// largest eigenvalue of the scalar k=0 Newtonian matrix by power iteration
double newtonian_norm(const VolumeGrid& g, int iterations = 60);

// The effective Lippmann-Schwinger operator
//   H - (xi/+-1) [-grad M^k (T H) + k^2 N^k (T H)]
class LseOperator {
public:
    LseOperator(const VolumeGrid& g, double xi, const Dyadic& T, double k, Sign sign);
    ~LseOperator();
    // y = K x with K the bracket [-grad M^k (T x) + k^2 N^k (T x)]
    void apply_bracket(const GridField& x, GridField& y) const;
    void apply(const GridField& x, GridField& y) const;  // full operator
    double coupling() const { return xi_ / sign_value(sign_); }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double xi_;
    Sign sign_;
};

struct LseOptions {
    GmresOptions gmres{1e-8, 100, 10000};
    LinearMap preconditioner = nullptr;
};

struct LseSolution {
    GridField H;
    double residual = 0;
    int iterations = 0;
};

LseSolution solve_effective_lse(const VolumeGrid& g, double xi, const Dyadic& T, double k, const IncidentWave& wave,
                                Sign sign, const LseOptions& opt = {});

FarFieldSamples effective_far_field(const GridField& H, const VolumeGrid& g, double xi, const Dyadic& T, double k,
                                    Sign sign, const std::vector<Point>& directions);

}  // namespace clusterem

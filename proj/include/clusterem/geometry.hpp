#pragma once
#include <array>
#include <string>
#include <vector>

#include "clusterem/tensor.hpp"

namespace clusterem {

// branch of the frequency offset 1 -/+ c0 a^h; Plus selects the upper sign
enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }
std::string sign_name(Sign s);
Sign parse_sign(const std::string& s);

struct DomainShape {
    enum class Kind { Box, Ball };
    Kind kind = Kind::Box;
    Point center = Point::Zero();
    Point extents = Point::Ones();  // box side lengths
    double radius = 1.0;            // ball

    static DomainShape box(const Point& center, const Point& extents);
    static DomainShape unit_box();  // [0,1]^3
    static DomainShape ball(const Point& center, double radius);

    double volume() const;
    double diameter() const;
    double min_extent() const;
    bool contains(const Point& x) const;  // open domain
    Point min_corner() const;
};

struct ScaleSet {
    double a = 0, h = 0, eta0 = 0, eta = 0, c0 = 0;
    Sign sign = Sign::Plus;
    double cr = 0, lambda_nB = 0, d = 0, k = 0;
};

inline constexpr double kHLower = 9.0 / 11.0;

ScaleSet derive_scales(double a, double h, double eta0, double c0, Sign sign, double cr,
                       double lambda_nB);

using LatticeIndex = std::array<int, 3>;

struct Cluster {
    std::vector<Point> centers;
    double d = 0;
    DomainShape domain;
    // centers[m] == origin + d * lattice[m]; empty when the centers are not lattice aligned
    Point origin = Point::Zero();
    std::vector<LatticeIndex> lattice;

    std::size_t size() const { return centers.size(); }
    bool on_lattice() const { return !lattice.empty() && lattice.size() == centers.size(); }
};

Cluster generate_cluster(const DomainShape& domain, double d);

double counting_sum(const Cluster& cluster, double kappa, std::size_t m);
// max over m, used by the regressions
double max_counting_sum(const Cluster& cluster, double kappa);

// sum_m ( int_{Omega \ union cubes} |z_m - z|^-3 dz )^2, midpoint rule on `subdiv`^3
// subcells of each pitch-sized background cell
double boundary_counting_statistic(const Cluster& cluster, int subdiv = 4);

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace clusterem

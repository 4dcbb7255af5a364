#include "clusterem/geometry.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace clusterem {

std::string sign_name(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

Sign parse_sign(const std::string& s) {
    if (s == "plus" || s == "+") return Sign::Plus;
    if (s == "minus" || s == "-") return Sign::Minus;
    throw DomainError("sign must be \"plus\" or \"minus\", got \"" + s + "\"");
}

DomainShape DomainShape::box(const Point& center, const Point& extents) {
    if (!(extents.minCoeff() > 0)) throw DomainError("box extents must be positive");
    DomainShape s;
    s.kind = Kind::Box;
    s.center = center;
    s.extents = extents;
    return s;
}

DomainShape DomainShape::unit_box() { return box(Point::Constant(0.5), Point::Ones()); }

DomainShape DomainShape::ball(const Point& center, double radius) {
    if (!(radius > 0)) throw DomainError("ball radius must be positive");
    DomainShape s;
    s.kind = Kind::Ball;
    s.center = center;
    s.radius = radius;
    return s;
}

double DomainShape::volume() const {
    if (kind == Kind::Box) return extents.prod();
    return 4.0 / 3.0 * kPi * radius * radius * radius;
}

double DomainShape::diameter() const { return kind == Kind::Box ? extents.norm() : 2.0 * radius; }

double DomainShape::min_extent() const { return kind == Kind::Box ? extents.minCoeff() : 2.0 * radius; }

Point DomainShape::min_corner() const {
    if (kind == Kind::Box) return center - 0.5 * extents;
    return center - Point::Constant(radius);
}

bool DomainShape::contains(const Point& x) const {
    if (kind == Kind::Ball) return (x - center).norm() < radius;
    const Point r = (x - center).cwiseAbs();
    return (r.array() < 0.5 * extents.array()).all();
}

ScaleSet derive_scales(double a, double h, double eta0, double c0, Sign sign, double cr,
                       double lambda_nB) {
    if (!(a > 0 && a < 1)) throw InfeasibleError("a must lie in (0, 1)");
    if (!(h > kHLower && h < 1)) throw InfeasibleError("h must lie in (9/11, 1)");
    if (!(eta0 > 0)) throw InfeasibleError("eta0 must be positive");
    if (!(c0 > 0)) throw InfeasibleError("c0 must be positive");
    if (!(cr > 0)) throw InfeasibleError("c_r must be positive");
    if (!(lambda_nB > 0)) throw InfeasibleError("lambda_n0_B must be positive");
    ScaleSet s;
    s.a = a;
    s.h = h;
    s.eta0 = eta0;
    s.c0 = c0;
    s.sign = sign;
    s.cr = cr;
    s.lambda_nB = lambda_nB;
    s.eta = eta0 / (a * a);
    s.d = cr * std::pow(a, (3.0 - h) / 3.0);
    // 1 - k^2 eta a^2 lambda = +/- c0 a^h
    const double k2 = (1.0 - sign_value(sign) * c0 * std::pow(a, h)) / (eta0 * lambda_nB);
    if (!(k2 > 0))
        throw InfeasibleError("k^2 = (1 -/+ c0 a^h)/(eta0 lambda_n0_B) is not positive; "
                              "frequency offset too large");
    s.k = std::sqrt(k2);
    return s;
}

Cluster generate_cluster(const DomainShape& domain, double d) {
    if (!(d > 0)) throw DomainError("pitch d must be positive");
    if (d > domain.min_extent() * (1 + 1e-12)) throw DomainError("pitch d exceeds the domain extent");
    Cluster c;
    c.d = d;
    c.domain = domain;
    if (domain.kind == DomainShape::Kind::Box) {
        c.origin = domain.min_corner() + Point::Constant(0.5 * d);
        std::array<int, 3> n{};
        for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(std::floor(domain.extents(a) / d + 1e-9));
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int l = 0; l < n[2]; ++l) {
                    c.lattice.push_back({i, j, l});
                    c.centers.push_back(c.origin + d * Point(i, j, l));
                }
    } else {
        // a cube centred at the ball centre, so the lattice is symmetric
        c.origin = domain.center;
        const int m = static_cast<int>(std::ceil(domain.radius / d)) + 1;
        const double tol = domain.radius * 1e-12;
        for (int i = -m; i <= m; ++i)
            for (int j = -m; j <= m; ++j)
                for (int l = -m; l <= m; ++l) {
                    const Point off = d * Point(i, j, l);
                    const Point far = off.cwiseAbs() + Point::Constant(0.5 * d);
                    if (far.norm() <= domain.radius + tol) {
                        c.lattice.push_back({i, j, l});
                        c.centers.push_back(c.origin + off);
                    }
                }
    }
    if (c.centers.empty()) throw EmptyClusterError("no cube of the requested pitch fits in the domain");
    return c;
}

double counting_sum(const Cluster& cluster, double kappa, std::size_t m) {
    if (m >= cluster.size()) throw DomainError("particle index out of range");
    double s = 0;
    const Point& zm = cluster.centers[m];
    for (std::size_t j = 0; j < cluster.size(); ++j) {
        if (j == m) continue;
        s += std::pow((cluster.centers[j] - zm).norm(), -kappa);
    }
    return s;
}

double max_counting_sum(const Cluster& cluster, double kappa) {
    double best = 0;
    for (std::size_t m = 0; m < cluster.size(); ++m) best = std::max(best, counting_sum(cluster, kappa, m));
    return best;
}

double boundary_counting_statistic(const Cluster& cluster, int subdiv) {
    if (cluster.size() == 0) throw EmptyClusterError("empty cluster");
    if (subdiv < 1) throw DomainError("subdivision must be positive");
    const DomainShape& dom = cluster.domain;
    const double d = cluster.d;

    // background lattice of pitch d sharing the particle lattice phase
    const Point origin = cluster.on_lattice() ? cluster.origin : dom.min_corner() + Point::Constant(0.5 * d);
    const Point lo = dom.min_corner();
    const Point hi = dom.kind == DomainShape::Kind::Box ? Point(dom.center + 0.5 * dom.extents)
                                                        : Point(dom.center + Point::Constant(dom.radius));
    std::array<int, 3> i0{}, i1{};
    for (int a = 0; a < 3; ++a) {
        i0[a] = static_cast<int>(std::floor((lo(a) - origin(a)) / d)) - 1;
        i1[a] = static_cast<int>(std::ceil((hi(a) - origin(a)) / d)) + 1;
    }
    auto key = [&](int i, int j, int l) {
        return (static_cast<long long>(i - i0[0]) * 4096 + (j - i0[1])) * 4096 + (l - i0[2]);
    };
    std::unordered_set<long long> occupied;
    if (cluster.on_lattice()) {
        for (const auto& id : cluster.lattice) occupied.insert(key(id[0], id[1], id[2]));
    } else {
        for (const Point& z : cluster.centers) {
            const Point q = (z - origin) / d;
            occupied.insert(key(static_cast<int>(std::lround(q(0))), static_cast<int>(std::lround(q(1))),
                                static_cast<int>(std::lround(q(2)))));
        }
    }

    const double hs = d / subdiv;
    const bool is_box = dom.kind == DomainShape::Kind::Box;
    std::vector<Point> pts;
    std::vector<double> wts;
    for (int i = i0[0]; i <= i1[0]; ++i)
        for (int j = i0[1]; j <= i1[1]; ++j)
            for (int l = i0[2]; l <= i1[2]; ++l) {
                if (occupied.count(key(i, j, l))) continue;
                const Point cc = origin + d * Point(i, j, l);
                const Point corner = cc - Point::Constant(0.5 * d);
                for (int a = 0; a < subdiv; ++a)
                    for (int b = 0; b < subdiv; ++b)
                        for (int e = 0; e < subdiv; ++e) {
                            const Point s0 = corner + hs * Point(a, b, e);
                            if (is_box) {
                                // clip the subcell against the box: exact volume, centred node
                                const Point c0 = s0.cwiseMax(lo), c1 = (s0 + Point::Constant(hs)).cwiseMin(hi);
                                if (((c1 - c0).array() <= 1e-9 * hs).any()) continue;  // rounding slivers
                                pts.push_back(0.5 * (c0 + c1));
                                wts.push_back((c1 - c0).prod());
                            } else {
                                const Point z = s0 + Point::Constant(0.5 * hs);
                                if (dom.contains(z)) {
                                    pts.push_back(z);
                                    wts.push_back(hs * hs * hs);
                                }
                            }
                        }
            }
    if (pts.empty()) return 0.0;

    double total = 0;
    for (const Point& zm : cluster.centers) {
        double integral = 0;
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const double r = (pts[q] - zm).norm();
            integral += wts[q] / (r * r * r);
        }
        total += integral * integral;
    }
    return total;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0 && y[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / den;
}

}  // namespace clusterem

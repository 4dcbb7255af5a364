#include "clusterem/volume.hpp"

#include <cmath>
#include <limits>

#include "clusterem/effective.hpp"
#include "clusterem/kernel_table.hpp"

namespace clusterem {

double VolumeGrid::total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

double VolumeGrid::r_eq() const { return std::cbrt(3.0 * cell_volume() / (4.0 * kPi)); }

long VolumeGrid::find(const LatticeIndex& id) const {
    for (int a = 0; a < 3; ++a)
        if (id[a] < 0 || id[a] >= dims[a]) return -1;
    return lookup[(static_cast<std::size_t>(id[0]) * dims[1] + id[1]) * dims[2] + id[2]];
}

VolumeGrid make_grid(const DomainShape& domain, int n) {
    if (n < 1) throw DomainError("grid resolution must be positive");
    VolumeGrid g;
    g.domain = domain;
    g.n = n;
    if (domain.kind == DomainShape::Kind::Box) {
        g.h = domain.extents.maxCoeff() / n;
        for (int a = 0; a < 3; ++a) {
            const double q = domain.extents(a) / g.h;
            g.dims[a] = static_cast<int>(std::lround(q));
            if (g.dims[a] < 1 || std::abs(q - g.dims[a]) > 1e-9 * q)
                throw DomainError("box extents are not commensurate with the cell size");
        }
    } else {
        g.h = 2.0 * domain.radius / n;
        g.dims = {n, n, n};
    }
    g.origin = domain.min_corner() + Point::Constant(0.5 * g.h);
    g.lookup.assign(static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2], -1);
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l) {
                const Point x = g.origin + g.h * Point(i, j, l);
                if (domain.kind == DomainShape::Kind::Ball && !domain.contains(x)) continue;
                g.lookup[(static_cast<std::size_t>(i) * g.dims[1] + j) * g.dims[2] + l] =
                    static_cast<long>(g.centers.size());
                g.centers.push_back(x);
                g.index.push_back({i, j, l});
                g.weights.push_back(g.cell_volume());
            }
    if (g.centers.empty()) throw DomainError("grid has no cells inside the domain");
    return g;
}

GridField constant_field(const VolumeGrid& g, const CVec3& v) {
    GridField f(3 * g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f.segment<3>(3 * i) = v;
    return f;
}

GridField incident_field(const VolumeGrid& g, const IncidentWave& wave) {
    GridField f(3 * g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f.segment<3>(3 * i) = kI * wave.k * wave.magnetic(g.centers[i]);
    return f;
}

double field_norm(const VolumeGrid& g, const GridField& f) {
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * f.segment<3>(3 * i).squaredNorm();
    return std::sqrt(s);
}

std::size_t nearest_cell(const VolumeGrid& g, const Point& x) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = (g.centers[i] - x).squaredNorm();
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

namespace {

cplx newton_self(const VolumeGrid& g, double k) {
    const double r = g.r_eq();
    return 0.5 * r * r + kI * (k * g.cell_volume() / (4.0 * kPi));
}

LatticeKernelTable newton_table(const VolumeGrid& g, double k) {
    const double w = g.cell_volume();
    return LatticeKernelTable(
        g.index, g.h, [&](const Point& r) { return Dyadic(Dyadic::Identity() * (w * helmholtz_kernel_offset(r, k))); },
        Dyadic::Identity() * newton_self(g, k));
}

}  // namespace

GridField newtonian_apply(const GridField& f, const VolumeGrid& g, double k) {
    GridField out;
    newton_table(g, k).apply(f, out);
    return out;
}

GridField magnetization_apply(const GridField& f, const VolumeGrid& g, double k) {
    const double w = g.cell_volume();
    LatticeKernelTable t(
        g.index, g.h, [&](const Point& r) { return Dyadic(-w * helmholtz_hessian_offset(r, k)); },
        Dyadic::Identity() / 3.0);
    GridField out;
    t.apply(f, out);
    return out;
}

GridField nprime_apply(const GridField& f, const VolumeGrid& g) {
    const double w = g.cell_volume();
    const double r = g.r_eq();
    LatticeKernelTable t(
        g.index, g.h,
        [&](const Point& x) {
            const Point u = x.normalized();
            return Dyadic((w * helmholtz_kernel_offset(x, 0.0)) * (u * u.transpose()).cast<cplx>());
        },
        Dyadic::Identity() * (r * r / 6.0));
    GridField out;
    t.apply(f, out);
    return out;
}

namespace {

// centred difference of component c along axis a at cell i; NaN if a neighbour is missing
cplx central_diff(const GridField& f, const VolumeGrid& g, std::size_t i, int a, int c) {
    LatticeIndex p = g.index[i], m = g.index[i];
    ++p[a];
    --m[a];
    const long ip = g.find(p), im = g.find(m);
    if (ip < 0 || im < 0) return cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return (f(3 * ip + c) - f(3 * im + c)) / (2.0 * g.h);
}

}  // namespace

GridField discrete_curl(const GridField& f, const VolumeGrid& g) {
    GridField out(3 * g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out(3 * i + 0) = central_diff(f, g, i, 1, 2) - central_diff(f, g, i, 2, 1);
        out(3 * i + 1) = central_diff(f, g, i, 2, 0) - central_diff(f, g, i, 0, 2);
        out(3 * i + 2) = central_diff(f, g, i, 0, 1) - central_diff(f, g, i, 1, 0);
    }
    return out;
}

Eigen::VectorXcd discrete_divergence(const GridField& f, const VolumeGrid& g) {
    Eigen::VectorXcd out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out(i) = central_diff(f, g, i, 0, 0) + central_diff(f, g, i, 1, 1) + central_diff(f, g, i, 2, 2);
    return out;
}

std::vector<std::size_t> interior_cells(const VolumeGrid& g, int depth) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool ok = true;
        for (int a = 0; a < 3 && ok; ++a)
            for (int s = -depth; s <= depth && ok; ++s)
                for (int b = 0; b < 3 && ok; ++b)
                    for (int t = -depth; t <= depth && ok; ++t) {
                        // the box stencil covers every neighbour a double centred difference touches
                        LatticeIndex id = g.index[i];
                        id[a] += s;
                        id[b] += t;
                        if (g.find(id) < 0) ok = false;
                    }
        if (ok) out.push_back(i);
    }
    return out;
}

double divergence_ratio(const GridField& f, const VolumeGrid& g, int depth) {
    double div2 = 0, jac2 = 0;
    for (std::size_t i : interior_cells(g, depth)) {
        cplx div = 0;
        for (int a = 0; a < 3; ++a) {
            div += central_diff(f, g, i, a, a);
            for (int b = 0; b < 3; ++b) jac2 += std::norm(central_diff(f, g, i, a, b));
        }
        div2 += std::norm(div);
    }
    if (jac2 == 0) return 0;
    return std::sqrt(div2 / jac2);
}

double newtonian_norm(const VolumeGrid& g, int iterations) {
    // scalar table by offset; the k=0 matrix is symmetric positive, so the top eigenvalue is the norm
    const std::size_t n = g.size();
    std::array<int, 3> span{};
    for (int a = 0; a < 3; ++a) span[a] = g.dims[a] - 1;
    const int dx = 2 * span[0] + 1, dy = 2 * span[1] + 1, dz = 2 * span[2] + 1;
    std::vector<double> tab(static_cast<std::size_t>(dx) * dy * dz);
    const double w = g.cell_volume();
    const double r = g.r_eq();
    for (int i = -span[0]; i <= span[0]; ++i)
        for (int j = -span[1]; j <= span[1]; ++j)
            for (int l = -span[2]; l <= span[2]; ++l) {
                const std::size_t f = (static_cast<std::size_t>(i + span[0]) * dy + (j + span[1])) * dz + (l + span[2]);
                tab[f] = (i == 0 && j == 0 && l == 0) ? 0.5 * r * r
                                                      : w / (4.0 * kPi * g.h * std::sqrt(double(i * i + j * j + l * l)));
            }
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n), y(n);
    x.normalize();
    double lambda = 0;
    for (int it = 0; it < iterations; ++it) {
#pragma omp parallel for schedule(static)
        for (std::size_t a = 0; a < n; ++a) {
            const LatticeIndex& ia = g.index[a];
            double acc = 0;
            for (std::size_t b = 0; b < n; ++b) {
                const LatticeIndex& ib = g.index[b];
                const std::size_t f = (static_cast<std::size_t>(ia[0] - ib[0] + span[0]) * dy + (ia[1] - ib[1] + span[1])) * dz +
                                      (ia[2] - ib[2] + span[2]);
                acc += tab[f] * x(b);
            }
            y(a) = acc;
        }
        lambda = x.dot(y);
        x = y.normalized();
    }
    return lambda;
}

struct LseOperator::Impl {
    LatticeKernelTable bracket;
};

LseOperator::LseOperator(const VolumeGrid& g, double xi, const Dyadic& T, double k, Sign sign) : xi_(xi), sign_(sign) {
    const double w = g.cell_volume();
    const Dyadic self = (-1.0 / 3.0 + k * k * newton_self(g, k)) * T;
    impl_ = std::make_unique<Impl>(Impl{LatticeKernelTable(
        g.index, g.h, [&](const Point& r) { return Dyadic(w * dyadic_green_offset(r, k) * T); }, self)});
}

LseOperator::~LseOperator() = default;

void LseOperator::apply_bracket(const GridField& x, GridField& y) const { impl_->bracket.apply(x, y); }

void LseOperator::apply(const GridField& x, GridField& y) const {
    impl_->bracket.apply(x, y);
    y = x - coupling() * y;
}

LseSolution solve_effective_lse(const VolumeGrid& g, double xi, const Dyadic& T, double k, const IncidentWave& wave,
                                Sign sign, const LseOptions& opt) {
    if (std::abs(wave.k - k) > 1e-12 * std::max(1.0, k)) throw DomainError("incident wavenumber does not match k");
    const GridField b = incident_field(g, wave);
    LseSolution sol;
    if (xi == 0) {
        sol.H = b;
        return sol;
    }
    const LseOperator A(g, xi, T, k, sign);
    const GmresResult r =
        gmres([&](const CVector& x, CVector& y) { A.apply(x, y); }, b, opt.gmres, opt.preconditioner);
    if (!r.converged || !r.x.allFinite()) {
        const XiWindow win = coercivity_window(k, g.domain.diameter(), g.domain.volume(), 1);
        throw SolverError("LSE GMRES did not converge (residual " + std::to_string(r.residual) +
                              "); xi " + (win.contains(std::abs(xi)) ? "inside" : "outside") +
                              " the coercivity window",
                          win.contains(std::abs(xi)) ? 1.0 : 0.0);
    }
    sol.H = r.x;
    sol.residual = r.residual;
    sol.iterations = r.iterations;
    return sol;
}

FarFieldSamples effective_far_field(const GridField& H, const VolumeGrid& g, double xi, const Dyadic& T, double k,
                                    Sign sign, const std::vector<Point>& directions) {
    FarFieldSamples out;
    out.directions = directions;
    const cplx pref = -kI * (k * xi / (sign_value(sign) * 4.0 * kPi));
    std::vector<CVec3> TH(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) TH[i] = g.weights[i] * (T * H.segment<3>(3 * i));
    for (const Point& xh : directions) {
        CVec3 acc = CVec3::Zero();
        for (std::size_t i = 0; i < g.size(); ++i) acc += std::exp(-kI * (k * xh.dot(g.centers[i]))) * TH[i];
        out.values.push_back(pref * xh.cast<cplx>().cross(acc));
    }
    return out;
}

}  // namespace clusterem

#include "clusterem/foldylax.hpp"

#include <cmath>
#include <memory>

#include "clusterem/kernel_table.hpp"

namespace clusterem {

IncidentWave::IncidentWave(double k_, const Point& theta_, const Point& p_) : k(k_), theta(theta_), p(p_) {
    if (!(k >= 0)) throw DomainError("wavenumber must be non-negative");
    if (std::abs(theta.norm() - 1.0) > 1e-12) throw DomainError("propagation direction theta must be a unit vector");
    if (std::abs(p.norm() - 1.0) > 1e-12) throw DomainError("polarization p must be a unit vector");
    if (std::abs(theta.dot(p)) > 1e-12) throw DomainError("polarization must satisfy theta . p = 0");
}

CVec3 IncidentWave::magnetic(const Point& x) const {
    return theta.cross(p).cast<cplx>() * std::exp(kI * (k * theta.dot(x)));
}

CVec3 IncidentWave::electric(const Point& x) const {
    return p.cast<cplx>() * std::exp(kI * (k * theta.dot(x)));
}

CVec3 incident_magnetic(const IncidentWave& wave, const Point& x) { return wave.magnetic(x); }

std::vector<Point> standard_directions(int level) {
    if (level < 1) throw DomainError("direction level must be >= 1");
    std::vector<Point> out;
    for (int i = -level; i <= level; ++i)
        for (int j = -level; j <= level; ++j)
            for (int l = -level; l <= level; ++l) {
                if (std::max({std::abs(i), std::abs(j), std::abs(l)}) != level) continue;
                out.push_back(Point(i, j, l).normalized());
            }
    return out;
}

double invertibility_margin(const ScaleSet& s, const Dyadic& P0) {
    const double pnorm = Eigen::JacobiSVD<Dyadic>(P0).singularValues()(0);
    const double num = s.k * s.k * std::abs(s.eta) * std::pow(s.a, 5) * pnorm;
    if (num == 0) return 0.0;
    const double den = std::pow(s.d, 3) * std::abs(1.0 - s.k * s.k * s.eta * s.a * s.a * s.lambda_nB);
    if (den == 0) throw DegenerateError("invertibility margin: resonant-degenerate denominator");
    return num / den;
}

double interaction_strength(const ScaleSet& s) {
    return s.eta * s.k * s.k * std::pow(s.a, 5.0 - s.h) / (sign_value(s.sign) * s.c0);
}

namespace {

// x -> c sum_{j != m} B(z_m, z_j) x_j
class Coupling {
public:
    Coupling(const Cluster& cl, const ScaleSet& s, const Dyadic& P0, double k, BlockOrder order)
        : cl_(cl), P0_(P0), k_(k), c_(interaction_strength(s)), order_(order) {
        if (cl.on_lattice()) {
            table_ = std::make_unique<LatticeKernelTable>(
                cl.lattice, cl.d, [this](const Point& r) { return block(r); }, Dyadic::Zero());
        }
    }

    Dyadic block(const Point& r) const {
        const Dyadic G = dyadic_green_offset(r, k_);
        return c_ * (order_ == BlockOrder::P0Left ? Dyadic(P0_ * G) : Dyadic(G * P0_));
    }

    void apply(const CVector& x, CVector& y) const {
        if (table_) {
            table_->apply(x, y);
            return;
        }
        const std::size_t n = cl_.size();
        y.resize(3 * n);
#pragma omp parallel for schedule(static)
        for (std::size_t m = 0; m < n; ++m) {
            CVec3 acc = CVec3::Zero();
            for (std::size_t j = 0; j < n; ++j)
                if (j != m) acc += block(cl_.centers[m] - cl_.centers[j]) * x.segment<3>(3 * j);
            y.segment<3>(3 * m) = acc;
        }
    }

    Eigen::MatrixXcd dense() const {
        if (table_) return table_->dense();
        const std::size_t n = cl_.size();
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
#pragma omp parallel for schedule(static)
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t j = 0; j < n; ++j)
                if (j != m) B.block<3, 3>(3 * m, 3 * j) = block(cl_.centers[m] - cl_.centers[j]);
        return B;
    }

private:
    const Cluster& cl_;
    Dyadic P0_;
    double k_, c_;
    BlockOrder order_;
    std::unique_ptr<LatticeKernelTable> table_;
};

CVector right_hand_side(const Cluster& cl, const ScaleSet& s, const Dyadic& P0, const IncidentWave& wave,
                        FoldyLaxForm form) {
    const std::size_t n = cl.size();
    CVector b(3 * n);
    const cplx q_scale = kI * wave.k * std::pow(s.a, 5.0 - s.h) / (sign_value(s.sign) * s.c0);
    for (std::size_t m = 0; m < n; ++m) {
        const CVec3 H = wave.magnetic(cl.centers[m]);
        b.segment<3>(3 * m) = form == FoldyLaxForm::Q ? CVec3(q_scale * (P0 * H)) : CVec3(kI * wave.k * H);
    }
    return b;
}

CVector pack(const std::vector<CVec3>& v) {
    CVector x(3 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x.segment<3>(3 * i) = v[i];
    return x;
}

std::vector<CVec3> unpack(const CVector& x) {
    std::vector<CVec3> v(x.size() / 3);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.segment<3>(3 * i);
    return v;
}

void check_wave(const ScaleSet& s, const IncidentWave& wave) {
    if (std::abs(wave.k - s.k) > 1e-12 * std::max(1.0, s.k))
        throw DomainError("incident wavenumber does not match the scale set");
}

}  // namespace

FoldyLaxSolution assemble_and_solve(const Cluster& cluster, const ScaleSet& s, const Dyadic& P0,
                                    const IncidentWave& wave, const FoldyLaxOptions& opt) {
    check_wave(s, wave);
    if (cluster.size() == 0) throw EmptyClusterError("empty cluster");
    FoldyLaxSolution sol;
    sol.form = opt.form;
    sol.order = opt.order;
    sol.margin = invertibility_margin(s, P0);
    sol.margin_warning = sol.margin >= 1.0;

    const Coupling B(cluster, s, P0, wave.k, opt.order);
    const CVector b = right_hand_side(cluster, s, P0, wave, opt.form);
    auto op = [&](const CVector& x, CVector& y) {
        B.apply(x, y);
        y = x - y;
    };

    CVector x;
    const std::size_t dim = 3 * cluster.size();
    if (dim <= opt.direct_limit && !opt.force_iterative) {
        Eigen::MatrixXcd A = -B.dense();
        A.diagonal().array() += 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        x = lu.solve(b);
        if (!x.allFinite()) throw SolverError("Foldy-Lax system is singular", sol.margin);
        // one step of iterative refinement
        CVector r = b - A * x;
        x += lu.solve(r);
        r = b - A * x;
        sol.residual = b.norm() > 0 ? r.norm() / b.norm() : r.norm();
    } else {
        const GmresResult g = gmres(op, b, opt.gmres);
        if (!g.converged || !g.x.allFinite())
            throw SolverError("Foldy-Lax GMRES did not converge (residual " + std::to_string(g.residual) +
                                  ", invertibility margin " + std::to_string(sol.margin) + ")",
                              sol.margin);
        x = g.x;
        sol.iterative = true;
        sol.iterations = g.iterations;
        sol.residual = g.residual;
    }
    sol.vectors = unpack(x);
    return sol;
}

std::vector<CVec3> q_from_u(const std::vector<CVec3>& U, const ScaleSet& s, const Dyadic& P0) {
    const double f = std::pow(s.a, 5.0 - s.h) / (sign_value(s.sign) * s.c0);
    std::vector<CVec3> Q(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) Q[i] = f * (P0 * U[i]);
    return Q;
}

double foldylax_residual(const Cluster& cluster, const ScaleSet& s, const Dyadic& P0, const IncidentWave& wave,
                         const std::vector<CVec3>& xv, FoldyLaxForm form, BlockOrder order) {
    const Coupling B(cluster, s, P0, wave.k, order);
    const CVector b = right_hand_side(cluster, s, P0, wave, form);
    const CVector x = pack(xv);
    CVector y;
    B.apply(x, y);
    const CVector r = b - (x - y);
    return b.norm() > 0 ? r.norm() / b.norm() : r.norm();
}

std::vector<CVec3> neumann_series(const Cluster& cluster, const ScaleSet& s, const Dyadic& P0,
                                  const IncidentWave& wave, int terms, FoldyLaxForm form, BlockOrder order) {
    const Coupling B(cluster, s, P0, wave.k, order);
    const CVector b = right_hand_side(cluster, s, P0, wave, form);
    CVector x = b, y;
    for (int n = 1; n < terms; ++n) {
        B.apply(x, y);
        x = b + y;
    }
    return unpack(x);
}

FarFieldSamples cluster_far_field(const FoldyLaxSolution& sol, const Cluster& cluster, const ScaleSet& s,
                                  const std::vector<Point>& directions) {
    if (sol.form != FoldyLaxForm::Q) throw DomainError("far field expects the Q-form solution; convert with q_from_u");
    if (sol.vectors.size() != cluster.size()) throw DomainError("solution length does not match the cluster");
    FarFieldSamples out;
    out.directions = directions;
    const cplx pref = -kI * (s.k * s.k * s.k * s.eta / (4.0 * kPi));
    for (const Point& xh : directions) {
        CVec3 acc = CVec3::Zero();
        for (std::size_t m = 0; m < cluster.size(); ++m) {
            const cplx ph = std::exp(-kI * (s.k * xh.dot(cluster.centers[m])));
            acc += ph * sol.vectors[m];
        }
        // x^ x sum: cross product once after the sum
        out.values.push_back(pref * xh.cast<cplx>().cross(acc));
    }
    return out;
}

}  // namespace clusterem

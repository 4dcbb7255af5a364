#include "clusterem/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace clusterem {

namespace {

// k=0 magnetization block between two cells, real
class RealHessianTable {
public:
    explicit RealHessianTable(const VolumeGrid& g) : g_(g) {
        for (int a = 0; a < 3; ++a) {
            span_[a] = g.dims[a] - 1;
            dim_[a] = 2 * span_[a] + 1;
        }
        tab_.resize(static_cast<std::size_t>(dim_[0]) * dim_[1] * dim_[2]);
        const double w = g.cell_volume();
        for (int i = -span_[0]; i <= span_[0]; ++i)
            for (int j = -span_[1]; j <= span_[1]; ++j)
                for (int l = -span_[2]; l <= span_[2]; ++l) {
                    Eigen::Matrix3d& A = tab_[flat(i, j, l)];
                    if (i == 0 && j == 0 && l == 0) {
                        A = Eigen::Matrix3d::Identity() / 3.0;
                        continue;
                    }
                    const Point r = g.h * Point(i, j, l);
                    const double rn = r.norm();
                    const Point u = r / rn;
                    A = -w * (3.0 * u * u.transpose() - Eigen::Matrix3d::Identity()) / (4.0 * kPi * rn * rn * rn);
                }
    }
    const Eigen::Matrix3d& at(std::size_t a, std::size_t b) const {
        const LatticeIndex& ia = g_.index[a];
        const LatticeIndex& ib = g_.index[b];
        return tab_[flat(ia[0] - ib[0], ia[1] - ib[1], ia[2] - ib[2])];
    }

private:
    std::size_t flat(int i, int j, int l) const {
        return (static_cast<std::size_t>(i + span_[0]) * dim_[1] + (j + span_[1])) * dim_[2] + (l + span_[2]);
    }
    const VolumeGrid& g_;
    std::array<int, 3> span_{}, dim_{};
    std::vector<Eigen::Matrix3d> tab_;
};

inline double character(int irrep, int g) { return (std::popcount(static_cast<unsigned>(irrep & g)) & 1) ? -1.0 : 1.0; }
inline double axis_sign(int g, int axis) { return ((g >> axis) & 1) ? -1.0 : 1.0; }

const double kInvSqrt8 = 1.0 / std::sqrt(8.0);

}  // namespace

Eigen::MatrixXd magnetization_matrix(const VolumeGrid& g) {
    const RealHessianTable t(g);
    const std::size_t n = g.size();
    Eigen::MatrixXd A(3 * n, 3 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A.block<3, 3>(3 * i, 3 * j) = t.at(i, j);
    return A;
}

bool MagnetizationEigensystem::symmetric_grid(const VolumeGrid& g) {
    for (int a = 0; a < 3; ++a)
        if (g.dims[a] % 2) return false;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int gr = 1; gr < 8; ++gr) {
            LatticeIndex id = g.index[i];
            for (int a = 0; a < 3; ++a)
                if ((gr >> a) & 1) id[a] = g.dims[a] - 1 - id[a];
            if (g.find(id) < 0) return false;
        }
    return true;
}

MagnetizationEigensystem::MagnetizationEigensystem(const VolumeGrid& g) : grid_(&g) {
    if (!symmetric_grid(g))
        throw DomainError("magnetization eigensolve needs a reflection-symmetric grid with even resolution");
    for (std::size_t i = 0; i < g.size(); ++i) {
        const LatticeIndex& id = g.index[i];
        bool rep = true;
        for (int a = 0; a < 3; ++a) rep = rep && id[a] >= g.dims[a] / 2;
        if (!rep) continue;
        std::array<std::size_t, 8> orb{};
        for (int gr = 0; gr < 8; ++gr) {
            LatticeIndex r = id;
            for (int a = 0; a < 3; ++a)
                if ((gr >> a) & 1) r[a] = g.dims[a] - 1 - r[a];
            orb[gr] = static_cast<std::size_t>(g.find(r));
        }
        reps_.push_back(i);
        orbit_.push_back(orb);
    }
    const std::size_t R = reps_.size();
    const RealHessianTable t(g);
    std::vector<Eigen::MatrixXd> B(8, Eigen::MatrixXd::Zero(3 * R, 3 * R));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t q = 0; q < R; ++q)
            for (int h = 0; h < 8; ++h) {
                const Eigen::Matrix3d& A = t.at(reps_[r], orbit_[q][h]);
                for (int chi = 0; chi < 8; ++chi) {
                    const double c = character(chi, h);
                    for (int be = 0; be < 3; ++be) {
                        const double f = c * axis_sign(h, be);
                        for (int al = 0; al < 3; ++al) B[chi](3 * r + al, 3 * q + be) += f * A(al, be);
                    }
                }
            }
    values_.resize(8);
    vectors_.resize(8);
    for (int chi = 0; chi < 8; ++chi) {
        // symmetrize away round-off before the dense solve
        Eigen::MatrixXd S = 0.5 * (B[chi] + B[chi].transpose());
        B[chi].resize(0, 0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        if (es.info() != Eigen::Success) throw SolverError("dense symmetric eigensolve failed");
        values_[chi] = es.eigenvalues();
        vectors_[chi] = es.eigenvectors();
    }
}

std::size_t MagnetizationEigensystem::mode_count() const {
    std::size_t n = 0;
    for (const auto& v : values_) n += v.size();
    return n;
}

std::vector<MagnetizationEigensystem::Mode> MagnetizationEigensystem::modes() const {
    std::vector<Mode> out;
    for (int chi = 0; chi < 8; ++chi)
        for (Eigen::Index c = 0; c < values_[chi].size(); ++c) out.push_back({values_[chi](c), chi, static_cast<int>(c)});
    std::stable_sort(out.begin(), out.end(), [](const Mode& a, const Mode& b) { return a.value < b.value; });
    return out;
}

Eigen::MatrixXd MagnetizationEigensystem::to_block(const Eigen::MatrixXd& F, int chi) const {
    const std::size_t R = reps_.size();
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(3 * R, F.cols());
    for (std::size_t r = 0; r < R; ++r)
        for (int h = 0; h < 8; ++h) {
            const double c = character(chi, h) * kInvSqrt8;
            for (int al = 0; al < 3; ++al) Y.row(3 * r + al) += (c * axis_sign(h, al)) * F.row(3 * orbit_[r][h] + al);
        }
    return Y;
}

Eigen::VectorXd MagnetizationEigensystem::from_blocks(const std::vector<Eigen::VectorXd>& y) const {
    const std::size_t R = reps_.size();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(3 * grid_->size());
    for (int chi = 0; chi < 8; ++chi) {
        if (y[chi].size() == 0) continue;
        for (std::size_t r = 0; r < R; ++r)
            for (int h = 0; h < 8; ++h) {
                const double c = character(chi, h) * kInvSqrt8;
                for (int al = 0; al < 3; ++al) f(3 * orbit_[r][h] + al) += c * axis_sign(h, al) * y[chi](3 * r + al);
            }
    }
    return f;
}

Eigen::VectorXd MagnetizationEigensystem::mode_vector(const Mode& m) const {
    std::vector<Eigen::VectorXd> y(8);
    y[m.irrep] = vectors_[m.irrep].col(m.column);
    return from_blocks(y);
}

GridField MagnetizationEigensystem::apply_function(const GridField& f, const std::function<double(double)>& fn) const {
    Eigen::MatrixXd F(f.size(), 2);
    F.col(0) = f.real();
    F.col(1) = f.imag();
    std::vector<Eigen::VectorXd> yr(8), yi(8);
    for (int chi = 0; chi < 8; ++chi) {
        const Eigen::MatrixXd Y = to_block(F, chi);
        Eigen::MatrixXd W = vectors_[chi].transpose() * Y;
        for (Eigen::Index c = 0; c < W.rows(); ++c) W.row(c) *= fn(values_[chi](c));
        const Eigen::MatrixXd Z = vectors_[chi] * W;
        yr[chi] = Z.col(0);
        yi[chi] = Z.col(1);
    }
    GridField out(f.size());
    out.real() = from_blocks(yr);
    out.imag() = from_blocks(yi);
    return out;
}

Eigen::MatrixXd MagnetizationEigensystem::project(const Eigen::MatrixXd& Q) const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(Q.cols(), Q.cols());
    for (int chi = 0; chi < 8; ++chi) {
        const Eigen::MatrixXd W = vectors_[chi].transpose() * to_block(Q, chi);
        M += W.transpose() * values_[chi].asDiagonal() * W;
    }
    return 0.5 * (M + M.transpose());
}

std::vector<double> MagnetizationEigensystem::overlaps(const GridField& f) const {
    Eigen::MatrixXd F(f.size(), 2);
    F.col(0) = f.real();
    F.col(1) = f.imag();
    const double nn = f.squaredNorm();
    std::map<std::pair<int, int>, double> ov;
    for (int chi = 0; chi < 8; ++chi) {
        const Eigen::MatrixXd W = vectors_[chi].transpose() * to_block(F, chi);
        for (Eigen::Index c = 0; c < W.rows(); ++c) ov[{chi, static_cast<int>(c)}] = W.row(c).squaredNorm() / nn;
    }
    std::vector<double> out;
    for (const Mode& m : modes()) out.push_back(ov[{m.irrep, m.column}]);
    return out;
}

std::vector<double> gradient_ritz_values(const VolumeGrid& g, const MagnetizationEigensystem& es, int degree) {
    if (degree < 1) throw DomainError("Ritz degree must be >= 1");
    // monomials x^a y^b z^c with a+b+c <= degree
    std::vector<std::array<int, 3>> mono;
    std::map<std::array<int, 3>, int> pos;
    for (int t = 0; t <= degree; ++t)
        for (int a = t; a >= 0; --a)
            for (int b = t - a; b >= 0; --b) {
                pos[{a, b, t - a - b}] = static_cast<int>(mono.size());
                mono.push_back({a, b, t - a - b});
            }
    // Laplacian as a map on coefficient vectors
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(mono.size(), mono.size());
    for (std::size_t j = 0; j < mono.size(); ++j)
        for (int ax = 0; ax < 3; ++ax) {
            auto e = mono[j];
            if (e[ax] < 2) continue;
            const double f = e[ax] * (e[ax] - 1);
            e[ax] -= 2;
            L(pos[e], j) += f;
        }
    const Eigen::MatrixXd K = Eigen::FullPivLU<Eigen::MatrixXd>(L).kernel();

    const double scale = g.domain.kind == DomainShape::Kind::Ball ? g.domain.radius : 0.5 * g.domain.extents.maxCoeff();
    const std::size_t n = g.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3 * n, K.cols());
    for (std::size_t i = 0; i < n; ++i) {
        const Point u = (g.centers[i] - g.domain.center) / scale;
        for (std::size_t j = 0; j < mono.size(); ++j) {
            const auto& e = mono[j];
            for (int ax = 0; ax < 3; ++ax) {
                if (e[ax] == 0) continue;
                double v = e[ax];
                for (int b = 0; b < 3; ++b) v *= std::pow(u(b), b == ax ? e[b] - 1 : e[b]);
                G.row(3 * i + ax) += v * K.row(j);
            }
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU);
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > 1e-10 * s(0)) ++rank;
    const Eigen::MatrixXd Q = svd.matrixU().leftCols(rank);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(es.project(Q));
    std::vector<double> out(ritz.eigenvalues().data(), ritz.eigenvalues().data() + ritz.eigenvalues().size());
    return out;
}

SpectrumReport magnetization_spectrum(const VolumeGrid& g, const MagnetizationEigensystem& es, std::size_t count,
                                      int ritz_degree) {
    SpectrumReport rep;
    rep.n = g.n;
    rep.ritz_degree = ritz_degree;
    const auto modes = es.modes();
    rep.total_modes = modes.size();
    const auto inner = interior_cells(g, 1);
    for (const auto& m : modes) {
        if (!(m.value > 0.0 && m.value < 1.0)) {
            ++rep.outside_unit_interval;
            continue;
        }
        if (count && rep.eigenvalues.size() >= count) continue;
        rep.eigenvalues.push_back(m.value);
        const Eigen::VectorXd v = es.mode_vector(m);
        const GridField c = discrete_curl(v.cast<cplx>(), g);
        double cn = 0, vn = 0;
        for (std::size_t i : inner) {
            cn += c.segment<3>(3 * i).squaredNorm();
            vn += v.segment<3>(3 * i).squaredNorm();
        }
        const bool grad_like = vn > 0 && g.h * std::sqrt(cn) <= 1e-3 * std::sqrt(vn);
        rep.tags.push_back(grad_like ? "gradient-like" : "other");
    }
    rep.gradient_eigenvalues = gradient_ritz_values(g, es, ritz_degree);
    return rep;
}

SpectrumReport magnetization_spectrum(const VolumeGrid& g, std::size_t count, int ritz_degree) {
    if (g.n < 12) throw DomainError("spectrum needs grid resolution n >= 12");
    const MagnetizationEigensystem es(g);
    return magnetization_spectrum(g, es, count, ritz_degree);
}

MagnetizationEigensystem::Mode resonant_mode(const MagnetizationEigensystem& es, const GridField& source) {
    const auto modes = es.modes();
    const auto ov = es.overlaps(source);
    int best = -1;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!(modes[i].value > 1.0 / 3.0 + 1e-12)) continue;
        if (best < 0 || ov[i] > ov[best]) best = static_cast<int>(i);
    }
    if (best < 0) throw DomainError("no mode above 1/3");
    return modes[best];
}

}  // namespace clusterem

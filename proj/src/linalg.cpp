#include "clusterem/linalg.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace clusterem {

namespace {

using cplx = std::complex<double>;

// Givens rotation zeroing b in (a, b)
void make_rotation(cplx a, cplx b, double& c, cplx& s) {
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0) {
        c = 1;
        s = 0;
        return;
    }
    if (na == 0) {
        c = 0;
        s = std::conj(b) / nb;
        return;
    }
    const double r = std::hypot(na, nb);
    c = na / r;
    s = (a / na) * std::conj(b) / r;
}

}  // namespace

GmresResult gmres(const LinearMap& A, const CVector& b, const GmresOptions& opt, const LinearMap& precond,
                  const CVector* x0) {
    const Eigen::Index n = b.size();
    GmresResult res;
    res.x = x0 ? *x0 : CVector::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0) {
        res.x.setZero();
        res.converged = true;
        return res;
    }
    const int m = std::max(1, opt.restart);
    CVector r(n), w(n), z(n), Ax(n);

    auto true_residual = [&]() {
        A(res.x, Ax);
        r = b - Ax;
        return r.norm();
    };

    double beta = true_residual();
    int total = 0;
    while (true) {
        res.residual = beta / bnorm;
        if (res.residual <= opt.tol) {
            res.converged = true;
            break;
        }
        if (total >= opt.max_iter) break;

        std::vector<CVector> V;
        V.reserve(m + 1);
        V.push_back(r / beta);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
        std::vector<double> cs(m);
        std::vector<cplx> sn(m);
        CVector g = CVector::Zero(m + 1);
        g(0) = beta;
        int j = 0;
        for (; j < m && total < opt.max_iter; ++j, ++total) {
            if (precond) {
                precond(V[j], z);
                A(z, w);
            } else {
                A(V[j], w);
            }
            // modified Gram-Schmidt, two passes for stability
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) {
                    const cplx hij = V[i].dot(w);
                    H(i, j) += hij;
                    w -= hij * V[i];
                }
            const double hn = w.norm();
            H(j + 1, j) = hn;
            for (int i = 0; i < j; ++i) {
                const cplx t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            make_rotation(H(j, j), H(j + 1, j), cs[j], sn[j]);
            H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
            H(j + 1, j) = 0;
            g(j + 1) = -std::conj(sn[j]) * g(j);
            g(j) = cs[j] * g(j);
            const double est = std::abs(g(j + 1)) / bnorm;
            if (hn == 0 || est <= opt.tol * 0.5) {
                ++j;
                ++total;
                break;
            }
            V.push_back(w / hn);
        }
        // back substitution on the leading j x j triangle
        CVector y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        CVector update = CVector::Zero(n);
        for (int i = 0; i < j; ++i) update += y(i) * V[i];
        if (precond) {
            precond(update, z);
            res.x += z;
        } else {
            res.x += update;
        }
        beta = true_residual();
    }
    res.iterations = total;
    return res;
}

}  // namespace clusterem

#pragma once
#include <functional>

#include <Eigen/Dense>

namespace clusterem {

using CVector = Eigen::VectorXcd;
using LinearMap = std::function<void(const CVector& in, CVector& out)>;

struct GmresOptions {
    double tol = 1e-10;  // on ||b - A x|| / ||b||
    int restart = 100;
    int max_iter = 10000;
};

struct GmresResult {
    CVector x;
    double residual = 0;  // relative, recomputed from the true operator
    int iterations = 0;
    bool converged = false;
};

// restarted GMRES with optional right preconditioner M ~ A^{-1}
GmresResult gmres(const LinearMap& A, const CVector& b, const GmresOptions& opt,
                  const LinearMap& precond = nullptr, const CVector* x0 = nullptr);

}  // namespace clusterem

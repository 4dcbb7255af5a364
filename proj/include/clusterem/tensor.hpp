#pragma once
#include <complex>
#include <Eigen/Dense>

#include "clusterem/errors.hpp"

namespace clusterem {

using cplx = std::complex<double>;
using Point = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Dyadic = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// below this separation the kernels refuse to evaluate
inline constexpr double kMinSeparation = 1e-12;

cplx helmholtz_kernel(const Point& x, const Point& z, double k);
// gradient in x
CVec3 helmholtz_gradient(const Point& x, const Point& z, double k);
// grad_x grad_x Phi_k
Dyadic helmholtz_hessian(const Point& x, const Point& z, double k);
// grad grad Phi_k + k^2 Phi_k I
Dyadic dyadic_green(const Point& x, const Point& z, double k);

// same kernels as functions of the offset r = x - z
cplx helmholtz_kernel_offset(const Point& r, double k);
Dyadic helmholtz_hessian_offset(const Point& r, double k);
Dyadic dyadic_green_offset(const Point& r, double k);

// Frobenius-type norm used for relative comparisons
inline double dyadic_norm(const Dyadic& A) { return A.norm(); }

}  // namespace clusterem

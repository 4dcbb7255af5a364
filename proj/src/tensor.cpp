#include "clusterem/tensor.hpp"

#include <cmath>

namespace clusterem {

namespace {

double checked_radius(const Point& r) {
    const double rn = r.norm();
    if (!(rn >= kMinSeparation))
        throw DomainError("kernel evaluated at coincident points");
    return rn;
}

// Phi * (a rr^ + b I) with
//   a = (3 - 3ikr - k^2 r^2)/r^2,  b = (ikr - 1)/r^2 + shift
Dyadic radial_dyadic(const Point& r, double k, bool add_k2) {
    const double rn = checked_radius(r);
    const cplx phi = std::exp(kI * (k * rn)) / (4.0 * kPi * rn);
    const cplx ikr = kI * (k * rn);
    const double kr2 = k * k * rn * rn;
    const cplx a = (3.0 - 3.0 * ikr - kr2) / (rn * rn);
    cplx b = (ikr - 1.0) / (rn * rn);
    if (add_k2) b += k * k;
    const Point u = r / rn;
    Dyadic out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out(i, j) = phi * (a * (u(i) * u(j)) + (i == j ? b : cplx(0.0)));
    return out;
}

}  // namespace

cplx helmholtz_kernel_offset(const Point& r, double k) {
    const double rn = checked_radius(r);
    return std::exp(kI * (k * rn)) / (4.0 * kPi * rn);
}

cplx helmholtz_kernel(const Point& x, const Point& z, double k) {
    return helmholtz_kernel_offset(x - z, k);
}

CVec3 helmholtz_gradient(const Point& x, const Point& z, double k) {
    const Point r = x - z;
    const double rn = checked_radius(r);
    const cplx phi = std::exp(kI * (k * rn)) / (4.0 * kPi * rn);
    const cplx f = phi * (kI * k - 1.0 / rn) / rn;
    return r.cast<cplx>() * f;
}

Dyadic helmholtz_hessian_offset(const Point& r, double k) { return radial_dyadic(r, k, false); }

Dyadic dyadic_green_offset(const Point& r, double k) { return radial_dyadic(r, k, true); }

Dyadic helmholtz_hessian(const Point& x, const Point& z, double k) {
    return helmholtz_hessian_offset(x - z, k);
}

Dyadic dyadic_green(const Point& x, const Point& z, double k) {
    return dyadic_green_offset(x - z, k);
}

}  // namespace clusterem

#pragma once
// Independent reference computations shared by the unit and acceptance tests.
#include <algorithm>
#include <cmath>
#include <complex>

#include "clusterem/tensor.hpp"

namespace oracle {

using clusterem::cplx;
using clusterem::Dyadic;
using clusterem::Point;

inline cplx phi(const Point& r, double k) {
    const double rn = r.norm();
    return std::exp(cplx(0, k * rn)) / (4.0 * M_PI * rn);
}

// second-order central differences of Phi_k in x, plus k^2 Phi I;
// step 1e-4 relative to the separation: truncation and rounding both stay near 1e-8
inline Dyadic fd_dyadic_green(const Point& x, const Point& z, double k, double base = 1e-4) {
    const double step = base * (x - z).norm();
    Dyadic H;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Point ei = Point::Zero(), ej = Point::Zero();
            ei(i) = step;
            ej(j) = step;
            if (i == j) {
                H(i, j) = (phi(x + ei - z, k) - 2.0 * phi(x - z, k) + phi(x - ei - z, k)) / (step * step);
            } else {
                H(i, j) = (phi(x + ei + ej - z, k) - phi(x + ei - ej - z, k) - phi(x - ei + ej - z, k) +
                           phi(x - ei - ej - z, k)) /
                          (4.0 * step * step);
            }
        }
    return H + k * k * phi(x - z, k) * Dyadic::Identity();
}

}  // namespace oracle

#include "clusterem/effective.hpp"

#include <cmath>

namespace clusterem {

namespace {
constexpr double kPoleTol = 1e-10;
const double kPi3 = kPi * kPi * kPi;
}  // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::DielectricPositive: return "dielectric-positive";
        case Regime::PlasmonicNegative: return "plasmonic-negative";
        default: return "degenerate";
    }
}

double coupling_xi(double eta0, double k, double c0, double cr) {
    return eta0 * k * k / (c0 * cr * cr * cr);
}

Dyadic p0_from_moments(const std::vector<CVec3>& moments) {
    if (moments.empty()) throw DomainError("P0 needs at least one moment vector");
    Dyadic P = Dyadic::Zero();
    for (const CVec3& v : moments) P += v * v.conjugate().transpose();
    return P;
}

std::vector<CVec3> ball_moments() {
    const double s1 = std::sqrt(6.0 / kPi) / kPi;
    const double s2 = 2.0 * std::sqrt(3.0 / kPi) / kPi;
    return {CVec3(s1, -kI * s1, 0.0), CVec3(0.0, 0.0, s2), CVec3(-s1, -kI * s1, 0.0)};
}

Dyadic p0_ball() { return Dyadic::Identity() * (12.0 / kPi3); }

Dyadic tensor_T(double xi, const Dyadic& P0, Sign sign) {
    const Dyadic F = Dyadic::Identity() - (xi / (3.0 * sign_value(sign))) * P0;
    // smallest singular value relative to the size of the factor
    const double scale = 1.0 + std::abs(xi) * P0.norm() / 3.0;
    if (Eigen::JacobiSVD<Dyadic>(F).singularValues()(2) < kPoleTol * scale)
        throw DegenerateError("I - (xi/(+/-3)) P0 is singular");
    return F.fullPivLu().solve(P0);
}

Dyadic effective_mu(double xi, const Dyadic& P0, Sign sign) {
    return Dyadic::Identity() + (xi / sign_value(sign)) * tensor_T(xi, P0, sign);
}

EffectiveTensors effective_tensors(double xi, const Dyadic& P0, Sign sign) {
    EffectiveTensors e;
    e.xi = xi;
    e.sign = sign;
    e.P0 = P0;
    e.T = tensor_T(xi, P0, sign);
    e.mu_eff = Dyadic::Identity() + (xi / sign_value(sign)) * e.T;
    e.eps_eff = Dyadic::Identity();
    return e;
}

double ball_T_scalar(double xi, Sign sign) {
    const double den = 1.0 - sign_value(sign) * 4.0 * xi / kPi3;
    if (std::abs(den) < kPoleTol * (1.0 + 4.0 * std::abs(xi) / kPi3))
        throw DegenerateError("pole of T for the ball");
    return (12.0 / kPi3) / den;
}

double ball_mu_scalar(double xi, Sign sign) {
    const double s = sign_value(sign);
    const double den = kPi3 - s * 4.0 * xi;
    if (std::abs(den) < kPoleTol * (kPi3 + 4.0 * std::abs(xi)))
        throw DegenerateError("pole of mu for the ball");
    return (kPi3 + s * 8.0 * xi) / den;
}

Regime classify_regime(double xi, Sign sign) {
    const double s = sign_value(sign);
    const double num = kPi3 + s * 8.0 * xi;
    const double den = kPi3 - s * 4.0 * xi;
    const double scale = kPi3 + 8.0 * std::abs(xi);
    if (std::abs(num) < kPoleTol * scale || std::abs(den) < kPoleTol * scale) return Regime::Degenerate;
    return (num / den) > 0 ? Regime::DielectricPositive : Regime::PlasmonicNegative;
}

double dispersion_xi(double lambda) {
    if (!(lambda > 1.0 / 3.0)) throw DomainError("dispersion root needs an eigenvalue above 1/3");
    return kPi3 / (4.0 * (3.0 * lambda - 1.0));
}

double detuned_xi(double lambda, double beta) {
    if (!(lambda > 1.0 / 3.0)) throw DomainError("detuning needs an eigenvalue above 1/3");
    return kPi3 / 4.0 * (1.0 / (3.0 * lambda - 1.0) + beta);
}

double amplification_f(double lambda, double beta) {
    const double g = 3.0 * lambda - 1.0;
    return std::abs(beta) * g * g / (3.0 * lambda);
}

double correction_g(double lambda, double beta, double volume) {
    const double g = 3.0 * lambda - 1.0;
    return kPi * lambda / std::abs(volume) * beta * (2.0 - 3.0 * lambda - 1.0 / (3.0 * lambda)) /
           (1.0 + beta * g);
}

PlasmonicFrequency plasmonic_frequency(double eta0, double lambda_nB, double lambda_mOmega, double beta) {
    if (!(lambda_mOmega > 1.0 / 3.0)) throw DomainError("plasmonic frequency needs an eigenvalue above 1/3");
    const double g = 3.0 * lambda_mOmega - 1.0;
    PlasmonicFrequency out;
    out.k2 = (1.0 + beta * g) / (eta0 * lambda_nB);
    if (!(out.k2 > 0)) throw InfeasibleError("plasmonic k^2 is not positive");
    out.c0_cr3 = 4.0 / kPi3 * g / lambda_nB;
    return out;
}

double ball_resonance_k4(double c0, double cr, double eta0, double inner) {
    if (!(inner > 0)) throw DomainError("<(N+N')e, e> must be positive");
    return kPi3 * c0 * cr * cr * cr / (6.0 * eta0 * inner);
}

double frequency_function_c(double k, double diam) {
    const double x = k * diam;
    // sum_{n>=2} x^n/n! and sum_{n>=1} x^n/n! via expm1 and the series for small x
    double tail2;
    if (x < 1e-2) {
        double term = x * x / 2.0, s = 0;
        for (int n = 2; n < 40 && term != 0; ++n) {
            s += term;
            term *= x / (n + 1);
        }
        tail2 = s;
    } else {
        tail2 = std::expm1(x) - x;
    }
    const double tail1 = std::expm1(x);
    return k * k + k * k * k / 6.0 + k * k / (4.0 * diam) * tail2 + k * k * k / 16.0 * tail1;
}

int spectral_gap_delta(double delta_star) {
    if (!(delta_star > 0)) throw DomainError("delta* must be positive");
    return 1 + static_cast<int>(std::floor(1.0 / (12.0 * delta_star)));
}

XiWindow coercivity_window_from_c(double c, double volume, int delta) {
    XiWindow w;
    w.lo = 2.0 * delta * kPi3;
    w.hi = c > 0 ? kPi3 * kPi / (12.0 * std::abs(volume) * c) : HUGE_VAL;
    return w;
}

XiWindow coercivity_window(double k, double diam, double volume, int delta) {
    return coercivity_window_from_c(frequency_function_c(k, diam), volume, delta);
}

}  // namespace clusterem

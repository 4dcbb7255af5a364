#pragma once
#include <utility>
#include <vector>

#include "clusterem/geometry.hpp"
#include "clusterem/tensor.hpp"

namespace clusterem {

struct EffectiveTensors {
    double xi = 0;
    Dyadic P0, T, mu_eff, eps_eff;
    Sign sign = Sign::Plus;
};

enum class Regime { DielectricPositive, PlasmonicNegative, Degenerate };
std::string regime_name(Regime r);

double coupling_xi(double eta0, double k, double c0, double cr);

Dyadic p0_from_moments(const std::vector<CVec3>& moments);
std::vector<CVec3> ball_moments();
Dyadic p0_ball();

Dyadic tensor_T(double xi, const Dyadic& P0, Sign sign);
Dyadic effective_mu(double xi, const Dyadic& P0, Sign sign);
EffectiveTensors effective_tensors(double xi, const Dyadic& P0, Sign sign);

// ball closed forms
double ball_T_scalar(double xi, Sign sign);
double ball_mu_scalar(double xi, Sign sign);
Regime classify_regime(double xi, Sign sign);

double dispersion_xi(double lambda);
double detuned_xi(double lambda, double beta);
double amplification_f(double lambda, double beta);
double correction_g(double lambda, double beta, double volume);

struct PlasmonicFrequency {
    double k2;
    double c0_cr3;  // leading-order consistency value of c0 c_r^3
};
PlasmonicFrequency plasmonic_frequency(double eta0, double lambda_nB, double lambda_mOmega, double beta);

double ball_resonance_k4(double c0, double cr, double eta0, double inner);

double frequency_function_c(double k, double diam);

struct XiWindow {
    double lo, hi;
    bool empty() const { return !(lo < hi); }
    bool contains(double xi) const { return lo < xi && xi < hi; }
};
int spectral_gap_delta(double delta_star);  // 1 + floor(1/(12 delta*))
XiWindow coercivity_window(double k, double diam, double volume, int delta);
// same bound with c(k) supplied directly
XiWindow coercivity_window_from_c(double c, double volume, int delta);

}  // namespace clusterem

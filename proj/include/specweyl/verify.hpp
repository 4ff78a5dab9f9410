#pragma once
#include <string>
#include <vector>

#include "specweyl/spectrum.hpp"
#include "specweyl/weyl.hpp"

namespace specweyl {

// Ray z = r e^{i angle}; angle in (0, 2pi), pi allowed (negative real axis).
struct RaySpec {
    double angle = pi / 2;
    std::vector<double> radii{1e2, 1e3, 1e4, 1e5};

    void validate() const;
    cplx point(double r) const;
};

enum class Verdict { Bounded, Diverging, Inconclusive };
std::string to_string(Verdict v);

struct DecayDiagnostic {
    std::vector<double> radii;
    std::vector<double> log_values;  // values can overflow; log(0) = -inf
    double slope = 0.0;              // least-squares slope of log value against log r
    Verdict verdict = Verdict::Inconclusive;

    std::vector<double> values() const;
};

// Fits the slope and assigns the verdict (Bounded <= 0.05, Diverging >= 0.3).
DecayDiagnostic make_diagnostic(std::vector<double> radii, std::vector<double> log_values);

// |phi(z,x)/(phi(z,x0) e^{(x-x0)sqrt(-z)}) - 1| sqrt(r)
DecayDiagnostic ray_phi_asymptotics(const Frame& f, const RaySpec& ray, double x, double x0);
// |M(z) + theta(z,x)/phi(z,x)| |sqrt(-z)| |phi(z,x)|^2
DecayDiagnostic ray_M_asymptotics(const Frame& f, const RaySpec& ray, double x);
// |psi(z,x) 2 sqrt(-z) phi(z,x) - 1| sqrt(r)
DecayDiagnostic ray_psi_asymptotics(const Frame& f, const RaySpec& ray, double x);
// |phi(z,x)/D-ray(z,-x) - 1| sqrt(r) with the Weber high-energy form of D_{(z-1)/2}(-sqrt2 x)
DecayDiagnostic ray_weber_asymptotics(const Frame& f, const RaySpec& ray, double x);

// sqrt(r)|phi0(c)|^2 |M1 - M0| evaluated at the cut c; frames share base point and seed templates.
DecayDiagnostic bm_diagnostic(const Frame& f0, const Frame& f1, double c, const RaySpec& ray);

// |chi(z,c)/phi(z,c)|
DecayDiagnostic hl_condition(const Frame& f, double c, const RaySpec& ray);

// (1/pi) int_{x0}^{x1} Im M(x + i eps) dx for each eps, extrapolated to eps = 0.
struct StieltjesResult {
    double mass = 0.0;
    std::vector<double> eps;
    std::vector<double> raw;  // mass at each eps
};
StieltjesResult stieltjes_invert(const Frame& f, double x0, double x1, std::vector<double> eps_ladder = {1e-1, 1e-2, 1e-3});

// M~(z) = sum w_n e^{-2 g(lambda_n)}/(lambda_n - z), g = scale lambda^2; scale < 0 picks 1/(1+max|lambda|)^2.
struct HerglotzResult {
    double min_im = 0.0;
    std::vector<cplx> values;
};
HerglotzResult herglotz_check(const SpectralMeasure& mu, const std::vector<cplx>& grid, double scale = -1.0);

struct IsospectralReport {
    std::vector<double> lambda0, lambda1;
    std::vector<double> diff;            // lambda1 - lambda0
    std::vector<double> left_ratio;      // gamma_{1,-}^2 / gamma_{0,-}^2
    std::vector<double> right_ratio;     // gamma_{1,+}^2 / gamma_{0,+}^2
    std::vector<double> cross_ratio;     // gamma_{1,+}^2 / gamma_{0,-}^2
    bool equal = false;                  // eigenvalues and left norming constants agree
};
IsospectralReport isospectral_compare(const Frame& f0, const Frame& f1, int count);

} // namespace specweyl

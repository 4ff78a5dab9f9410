#pragma once
#include <string>
#include <vector>

#include "specweyl/weyl.hpp"

namespace specweyl {

struct Atom {
    double lambda;
    double weight;  // gamma_n^{-2}
};

struct SpectralMeasure {
    std::vector<Atom> atoms;
    std::string gauge;
};

struct ExponentReport {
    double kappa = 0.0;   // lambda_n ~ C n^kappa
    double s = 0.0;       // convergence exponent estimate 1/kappa
    int genus = 0;
    double r2 = 0.0;
    std::size_t window_begin = 0, window_end = 0;  // fitted index range [begin, end)
    bool below_floor = false;                       // s < 0.45
};

enum class SubBC { Dirichlet, Neumann };

// Lowest `count` eigenvalues starting at index `first` (0-based), ascending.
std::vector<double> eigenvalues(const Frame& f, int count, int first = 0);

// All eigenvalues strictly below lambda_max.
std::vector<double> eigenvalues_below(const Frame& f, double lambda_max);
std::vector<double> sub_spectrum_below(const Frame& f, double cut, Side side, SubBC bc, double lambda_max);

// Eigenvalues of the half problem on (a,cut) (side Left) or (cut,b) (side Right) with a Dirichlet
// or Neumann condition at the cut.
std::vector<double> sub_spectrum(const Frame& f, double cut, Side side, SubBC bc, int count);

// gamma_n^2: squared L2 norm of phi (Left) or chi (Right) at each eigenvalue.
std::vector<double> norming_constants(const Frame& f, const std::vector<double>& eigs, Side side);

SpectralMeasure spectral_measure(const Frame& f, int count);

// Eigenfunction phi(lambda, x) on a grid (stitched left/right at the matching point).
std::vector<double> eigenfunction_on_grid(const Frame& f, double lambda, const std::vector<double>& grid);

// f^(lambda_n) = integral of phi(lambda_n, x) f(x) dx on the given grid (trapezoid rule).
std::vector<double> expand(const Frame& f, const std::vector<double>& grid, const std::vector<double>& values,
                           const SpectralMeasure& measure);

struct ParsevalResult {
    double norm2 = 0.0;   // ||f||^2 on the grid
    double series = 0.0;  // sum |f^|^2 gamma^{-2}
    double defect = 0.0;  // |series - norm2| / norm2
    std::vector<double> coefficients;
};
ParsevalResult parseval(const Frame& f, const std::vector<double>& grid, const std::vector<double>& values,
                        const SpectralMeasure& measure);

ExponentReport exponent_report(const std::vector<double>& eigs);

// dW/dz at an eigenvalue, central difference with one Richardson step.
double wronskian_derivative(const Frame& f, double lambda);

// Norming data of both Weyl solutions at one eigenvalue, with nu_n = log(gamma_-^2/gamma_+^2)/2.
struct NormingPair {
    double lambda;
    double gamma_minus2;
    double gamma_plus2;
    double wdot;
    double nu;
};
std::vector<NormingPair> norming_pairs(const Frame& f, const std::vector<double>& eigs);

} // namespace specweyl

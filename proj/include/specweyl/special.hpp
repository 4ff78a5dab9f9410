#pragma once
#include <optional>

#include "specweyl/common.hpp"

namespace specweyl {

// mantissa * e^exponent with |mantissa| in [1/2,2], or mantissa = 0 for an exact zero.
struct LogScaledComplex {
    cplx mantissa{0.0};
    double exponent = 0.0;

    bool is_zero() const { return mantissa == cplx(0.0); }
    cplx value() const;
    cplx log() const;  // principal-ish log: log|m| + exponent + i arg m
    static LogScaledComplex from_log(cplx logv);
    static LogScaledComplex from_value(cplx v);
    static LogScaledComplex zero() { return {}; }
    LogScaledComplex operator*(const LogScaledComplex& o) const;
    LogScaledComplex operator/(const LogScaledComplex& o) const;
};

// Principal branch of log Gamma (continuous off the negative real axis, log Gamma(z+1) = log Gamma(z) + log z).
cplx log_gamma(cplx z);

// D_nu(0) and D_nu'(0) in log-scaled form (exact zeros at the Gamma poles).
LogScaledComplex weber_central_value(cplx nu);
LogScaledComplex weber_central_derivative(cplx nu);

struct WeberValue {
    LogScaledComplex value;
    LogScaledComplex derivative;
};

// Parabolic cylinder function D_nu(x), real x. Validated for |nu| <= 200 (any x with |x| <= 60)
// and |nu| <= 1e4 for x >= 0; RangeError names the violated bound.
LogScaledComplex weber_D(cplx nu, double x);
WeberValue weber_D_full(cplx nu, double x);

// 2^{(z-1)/4} sqrt(pi)/Gamma((3-z)/4) e^{x sqrt(-z)}; BranchError on the positive real axis.
LogScaledComplex weber_ray_asymptotic(cplx z, double x);

// Weierstrass factor E_p(zeta,z); E_p(0,z) = z.
cplx elementary_factor(int p, double zeta, cplx z);
// log E_p(zeta, z), branch-continuous along the product accumulation
cplx log_elementary_factor(int p, double zeta, cplx z);

// H_n(x) e^{-x^2/2}, n <= 60; eigenvalue 2n+1 for -u'' + x^2 u.
double hermite_oracle(int n, double x);
inline double hermite_eigenvalue(int n) { return 2.0 * n + 1.0; }

// Oscillator seeds for u'' = (s^2 - z) u, normalized as D_{(z-1)/2}(sqrt2 s), s > 0.
// dlog is d(log u)/ds.
struct LogSeed {
    cplx logu;
    cplx dlog;
};
std::optional<LogSeed> oscillator_series_seed(cplx z, double s);
LogSeed oscillator_wkb_seed(cplx z, double s);
LogSeed oscillator_seed(cplx z, double s);  // series if it converges, else WKB

} // namespace specweyl

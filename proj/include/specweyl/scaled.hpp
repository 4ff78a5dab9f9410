#pragma once
#include "specweyl/common.hpp"

namespace specweyl {

// Solution pair (u, u') stored as mantissas times e^exponent.
struct ScaledValue {
    cplx u{0.0};
    cplx du{0.0};
    double exponent = 0.0;

    ScaledValue() = default;
    ScaledValue(cplx u_, cplx du_, double e = 0.0) : u(u_), du(du_), exponent(e) {}

    // Brings max(|u|,|du|) back to 1 when it left [1/2, 2]; returns the factor applied to the mantissas.
    double renormalize();
    double magnitude() const;               // max(|u|,|du|)
    cplx value() const;                     // u e^exponent (may overflow)
    cplx derivative() const;
    ScaledValue scaled(cplx factor) const;  // multiply both components
    ScaledValue with_exponent(double e) const;  // same value, mantissa rescaled to exponent e

    // Build from a log-value and a logarithmic derivative: u = e^logu, du = dlog * u.
    static ScaledValue from_log(cplx logu, cplx dlog);
};

// W(s1,s2) = u1 du2 - du1 u2 with exponent e1 + e2 (no cancellation mitigation).
struct ScaledWronskian {
    cplx w;
    double exponent;
    cplx value() const;
};
ScaledWronskian wronskian(const ScaledValue& s1, const ScaledValue& s2);

} // namespace specweyl

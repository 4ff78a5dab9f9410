#include "specweyl/scaled.hpp"

#include <algorithm>
#include <cmath>

namespace specweyl {

double ScaledValue::magnitude() const { return std::max(std::abs(u), std::abs(du)); }

double ScaledValue::renormalize() {
    const double m = magnitude();
    if (m == 0.0 || (m >= 0.5 && m <= 2.0)) return 1.0;
    const double f = 1.0 / m;
    u *= f;
    du *= f;
    exponent += std::log(m);
    return f;
}

cplx ScaledValue::value() const { return u * std::exp(exponent); }
cplx ScaledValue::derivative() const { return du * std::exp(exponent); }

ScaledValue ScaledValue::scaled(cplx factor) const {
    ScaledValue s(u * factor, du * factor, exponent);
    s.renormalize();
    return s;
}

ScaledValue ScaledValue::with_exponent(double e) const {
    const double f = std::exp(exponent - e);
    return ScaledValue(u * f, du * f, e);
}

ScaledValue ScaledValue::from_log(cplx logu, cplx dlog) {
    const cplx phase = std::exp(cplx(0.0, logu.imag()));
    ScaledValue s(phase, dlog * phase, logu.real());
    s.renormalize();
    return s;
}

cplx ScaledWronskian::value() const { return w * std::exp(exponent); }

ScaledWronskian wronskian(const ScaledValue& s1, const ScaledValue& s2) {
    return {s1.u * s2.du - s1.du * s2.u, s1.exponent + s2.exponent};
}

} // namespace specweyl

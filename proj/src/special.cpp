#include "specweyl/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "specweyl/errors.hpp"
#include "specweyl/model.hpp"
#include "specweyl/propagate.hpp"

namespace specweyl {

namespace {

const double log2_ = std::log(2.0);
const double logpi_ = std::log(pi);

bool is_pole(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()); }

LogScaledComplex from_scaled(cplx mant, double exponent) {
    if (mant == cplx(0.0)) return {};
    LogScaledComplex r = LogScaledComplex::from_value(mant);
    r.exponent += exponent;
    return r;
}

// rescale a log-scaled number to a given exponent (may underflow to 0)
cplx at_exponent(const LogScaledComplex& v, double e) {
    if (v.is_zero()) return 0.0;
    return v.mantissa * std::exp(v.exponent - e);
}

}  // namespace

// ---------------------------------------------------------------- LogScaledComplex

cplx LogScaledComplex::value() const { return is_zero() ? cplx(0.0) : mantissa * std::exp(exponent); }

cplx LogScaledComplex::log() const {
    if (is_zero()) throw DomainError("log of an exact zero");
    return std::log(mantissa) + exponent;
}

LogScaledComplex LogScaledComplex::from_log(cplx logv) {
    return {std::exp(cplx(0.0, logv.imag())), logv.real()};
}

LogScaledComplex LogScaledComplex::from_value(cplx v) {
    if (v == cplx(0.0)) return {};
    const double m = std::abs(v);
    return {v / m, std::log(m)};
}

LogScaledComplex LogScaledComplex::operator*(const LogScaledComplex& o) const {
    if (is_zero() || o.is_zero()) return {};
    return from_scaled(mantissa * o.mantissa, exponent + o.exponent);
}

LogScaledComplex LogScaledComplex::operator/(const LogScaledComplex& o) const {
    if (o.is_zero()) throw DomainError("division by an exact zero");
    if (is_zero()) return {};
    return from_scaled(mantissa / o.mantissa, exponent - o.exponent);
}

// ---------------------------------------------------------------- log Gamma

cplx log_gamma(cplx z) {
    if (is_pole(z)) throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
    if (z.real() < -1e5) throw RangeError("log_gamma: Re z < -1e5 not supported");
    cplx shift = 0.0;
    if (z.real() < 10.0) {
        const int n = static_cast<int>(std::ceil(10.0 - z.real()));
        for (int k = 0; k < n; ++k) shift += std::log(z + static_cast<double>(k));
        z += static_cast<double>(n);
    }
    // Stirling series, B_2k / (2k (2k-1) z^{2k-1}) for k = 1..8
    static const std::array<double, 8> c = {1.0 / 12.0,        -1.0 / 360.0,         1.0 / 1260.0,
                                            -1.0 / 1680.0,      1.0 / 1188.0,         -691.0 / 360360.0,
                                            1.0 / 156.0,        -3617.0 / 122400.0};
    const cplx iz = 1.0 / z, iz2 = iz * iz;
    cplx s = 0.0, p = iz;
    for (double ck : c) {
        s += ck * p;
        p *= iz2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + s - shift;
}

// ---------------------------------------------------------------- central values

LogScaledComplex weber_central_value(cplx nu) {
    const cplx g = (1.0 - nu) / 2.0;
    if (is_pole(g)) return {};
    return LogScaledComplex::from_log(0.5 * nu * log2_ + 0.5 * logpi_ - log_gamma(g));
}

LogScaledComplex weber_central_derivative(cplx nu) {
    const cplx g = -nu / 2.0;
    if (is_pole(g)) return {};
    // leading minus sign folded into the phase
    return LogScaledComplex::from_log(0.5 * (nu + 1.0) * log2_ + 0.5 * logpi_ - log_gamma(g) + cplx(0.0, pi));
}

// ---------------------------------------------------------------- oscillator seeds

std::optional<LogSeed> oscillator_series_seed(cplx z, double s) {
    if (!(s > 0)) return std::nullopt;
    const cplx nu = (z - 1.0) / 2.0;
    const double y = std::sqrt(2.0) * s, y2 = y * y;
    cplx S = 1.0, Sp = 0.0, t = 1.0;
    double maxt = 1.0;
    const int kend = std::min(4000, static_cast<int>(0.5 * y2) + 8);
    bool ok = false;
    for (int k = 0; k < kend; ++k) {
        t *= -(nu - 2.0 * k) * (nu - 2.0 * k - 1.0) / (2.0 * (k + 1) * y2);
        S += t;
        Sp += t * (-2.0 * (k + 1) / y);
        maxt = std::max(maxt, std::abs(t));
        if (maxt > 1e3 * std::max(1.0, std::abs(S))) return std::nullopt;
        if (std::abs(t) < 1e-17 * std::abs(S)) {
            ok = true;
            break;
        }
    }
    if (!ok) return std::nullopt;
    LogSeed r;
    r.logu = -0.25 * y2 + nu * std::log(y) + std::log(S);
    r.dlog = std::sqrt(2.0) * (-0.5 * y + nu / y + Sp / S);
    return r;
}

LogSeed oscillator_wkb_seed(cplx z, double s) {
    const cplx Q = s * s - z;
    const cplx sq = std::sqrt(Q);
    const cplx logC = -(z + 1.0) / 4.0 * log2_ - z / 4.0;
    const cplx F = 0.5 * (s * sq - z * std::log(s + sq));
    const cplx Q32 = Q * sq;
    const cplx I2 = 5.0 / 8.0 * (Q + sq * s + s * s) / (3.0 * Q32 * (sq + s)) - 0.25 / (sq * (sq + s));
    const cplx v2 = 5.0 * s * s / (8.0 * Q32 * Q) - 1.0 / (4.0 * Q32);
    LogSeed r;
    r.logu = logC - F - 0.25 * std::log(Q) - I2;
    r.dlog = -sq - s / (2.0 * Q) + v2;
    return r;
}

LogSeed oscillator_seed(cplx z, double s) {
    if (auto r = oscillator_series_seed(z, s)) return *r;
    return oscillator_wkb_seed(z, s);
}

// ---------------------------------------------------------------- Weber D

namespace {

// D and dD/dx for x >= 0 by inward integration of the recessive solution, rescaled to the
// exact central pair (D(0), D'(0)).
WeberValue weber_nonnegative(cplx nu, double x) {
    const cplx z = 2.0 * nu + 1.0;
    const double s = x / std::sqrt(2.0);
    const LogScaledComplex d0 = weber_central_value(nu);
    const LogScaledComplex d1 = weber_central_derivative(nu);
    if (x == 0.0) return {d0, d1};
    if (auto a = oscillator_series_seed(z, s)) {
        const LogScaledComplex v = LogScaledComplex::from_log(a->logu);
        return {v, v * LogScaledComplex::from_value(a->dlog / std::sqrt(2.0))};
    }
    static const PotentialModel osc = PotentialModel::harmonic();
    const double sb = std::max(8.0, 2.0 * std::sqrt(std::max(z.real(), 0.0)) + 4.0);
    const double S = std::max(sb, s + 2.0);
    const LogSeed seed = oscillator_seed(z, S);
    PropagateOptions opt;
    opt.tol = 1e-13;
    opt.outputs = {s};
    const auto res = propagate(osc, z, S, 0.0, ScaledValue::from_log(seed.logu, seed.dlog), opt);
    const ScaledValue at_x = res.values.front();
    const ScaledValue at_0 = res.end;

    // central pair in the s variable: d/ds = sqrt2 d/dx
    const double k0 = std::sqrt(std::max(1.0, std::abs(z)));
    const double eb = std::max(d0.is_zero() ? -1e300 : d0.exponent, d1.is_zero() ? -1e300 : d1.exponent);
    const cplx b0 = at_exponent(d0, eb), b1 = at_exponent(d1, eb) * std::sqrt(2.0) / k0;
    const cplx a0 = at_0.u, a1 = at_0.du / k0;
    const cplx kappa = (std::conj(a0) * b0 + std::conj(a1) * b1) / (std::norm(a0) + std::norm(a1));
    const double mismatch = std::sqrt(std::norm(kappa * a0 - b0) + std::norm(kappa * a1 - b1)) /
                            std::sqrt(std::norm(b0) + std::norm(b1));
    if (mismatch > 1e-7)
        throw RangeError("weber_D: central pair mismatch " + std::to_string(mismatch) +
                         " (integration did not track the recessive solution)");
    const double e = eb - at_0.exponent + at_x.exponent;
    return {from_scaled(kappa * at_x.u, e), from_scaled(kappa * at_x.du / std::sqrt(2.0), e)};
}

}  // namespace

WeberValue weber_D_full(cplx nu, double x) {
    if (!std::isfinite(x)) throw RangeError("weber_D: x must be finite");
    if (x >= 0.0) {
        if (std::abs(nu) > 1e4) throw RangeError("weber_D: |nu| <= 1e4 required for x >= 0");
        return weber_nonnegative(nu, x);
    }
    if (std::abs(nu) > 200.0) throw RangeError("weber_D: |nu| <= 200 required for x < 0");
    if (x < -60.0) throw RangeError("weber_D: x >= -60 required");
    const double t = -x;
    const WeberValue dt = weber_nonnegative(nu, t);
    const LogScaledComplex d0 = weber_central_value(nu);
    const LogScaledComplex d1 = weber_central_derivative(nu);

    // even/odd solutions at t, propagated in the oscillator variable s = t/sqrt2
    static const PotentialModel osc = PotentialModel::harmonic();
    const cplx z = 2.0 * nu + 1.0;
    const double s = t / std::sqrt(2.0);
    PropagateOptions opt;
    opt.tol = 1e-13;
    const ScaledValue ev = propagate(osc, z, 0.0, s, ScaledValue(1.0, 0.0), opt).end;
    const ScaledValue od = propagate(osc, z, 0.0, s, ScaledValue(0.0, std::sqrt(2.0)), opt).end;
    const LogScaledComplex E = from_scaled(ev.u, ev.exponent), Ep = from_scaled(ev.du / std::sqrt(2.0), ev.exponent);
    const LogScaledComplex O = from_scaled(od.u, od.exponent), Op = from_scaled(od.du / std::sqrt(2.0), od.exponent);
    const LogScaledComplex two = LogScaledComplex::from_value(2.0);

    // form A: D(-t) = D(t) - 2 D'(0) O(t);   form B: D(-t) = -D(t) + 2 D(0) E(t)
    struct Form {
        LogScaledComplex v, dv;
        double loss;
    };
    auto combine = [](const LogScaledComplex& p, double sp, const LogScaledComplex& q, double sq) {
        double e = -1e300;
        for (const auto* w : {&p, &q})
            if (!w->is_zero()) e = std::max(e, w->exponent);
        if (e == -1e300) return std::pair<LogScaledComplex, double>{{}, 1.0};
        const cplx a = sp * at_exponent(p, e), b = sq * at_exponent(q, e);
        const cplx r = a + b;
        const double loss = std::max(std::abs(a), std::abs(b)) / std::max(std::abs(r), 1e-300);
        return std::pair<LogScaledComplex, double>{from_scaled(r, e), loss};
    };
    auto [va, la] = combine(dt.value, 1.0, two * d1 * O, -1.0);
    auto [da, lda] = combine(dt.derivative, -1.0, two * d1 * Op, 1.0);
    auto [vb, lb] = combine(dt.value, -1.0, two * d0 * E, 1.0);
    auto [db, ldb] = combine(dt.derivative, 1.0, two * d0 * Ep, -1.0);
    const Form A{va, da, la}, B{vb, db, lb};
    const Form& best = A.loss <= B.loss ? A : B;
    if (best.loss > 1e7)
        throw RangeError("weber_D: reflection to x = " + std::to_string(x) + " loses more than 1e-8 to cancellation");
    (void)lda;
    (void)ldb;
    return {best.v, best.dv};
}

LogScaledComplex weber_D(cplx nu, double x) { return weber_D_full(nu, x).value; }

LogScaledComplex weber_ray_asymptotic(cplx z, double x) {
    if (z.imag() == 0.0 && z.real() > 0.0) throw BranchError("weber_ray_asymptotic: z on the positive real axis");
    const cplx l = (z - 1.0) / 4.0 * log2_ + 0.5 * logpi_ - log_gamma((3.0 - z) / 4.0) + x * std::sqrt(-z);
    return LogScaledComplex::from_log(l);
}

// ---------------------------------------------------------------- elementary factors

cplx log_elementary_factor(int p, double zeta, cplx z) {
    if (p < 0) throw DomainError("elementary_factor: p must be >= 0");
    if (zeta == 0.0) return std::log(z);
    const cplx w = z / zeta;
    cplx s = std::log(1.0 - w), wk = 1.0;
    for (int k = 1; k <= p; ++k) {
        wk *= w;
        s += wk / static_cast<double>(k);
    }
    return s;
}

cplx elementary_factor(int p, double zeta, cplx z) {
    if (p < 0) throw DomainError("elementary_factor: p must be >= 0");
    if (zeta == 0.0) return z;
    const cplx w = z / zeta;
    cplx s = 0.0, wk = 1.0;
    for (int k = 1; k <= p; ++k) {
        wk *= w;
        s += wk / static_cast<double>(k);
    }
    return (1.0 - w) * std::exp(s);
}

// ---------------------------------------------------------------- Hermite oracle

double hermite_oracle(int n, double x) {
    if (n < 0) throw DomainError("hermite_oracle: n must be >= 0");
    if (n > 60) throw RangeError("hermite_oracle: n <= 60 required");
    double h0 = std::exp(-0.5 * x * x);
    if (n == 0) return h0;
    double h1 = 2.0 * x * h0;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

}  // namespace specweyl

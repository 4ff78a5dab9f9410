#include "specweyl/propagate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dop853_tableau.hpp"
#include "specweyl/errors.hpp"

namespace specweyl {

namespace {

using State = std::array<cplx, 3>;  // u, u', integral of u^2

struct Rhs {
    const PotentialModel& model;
    cplx z;
    bool norm;

    void operator()(double x, const State& y, State& f) const {
        const double q = model.q_raw(x);
        if (!std::isfinite(q)) throw NonFinite("q(" + std::to_string(x) + ") is not finite");
        f[0] = y[1];
        f[1] = (q - z) * y[0];
        f[2] = norm ? y[0] * y[0] : cplx(0.0);
    }
};

double wavenumber(const PotentialModel& m, cplx z, double x) {
    const double q = m.q_raw(x);
    if (!std::isfinite(q)) throw NonFinite("q(" + std::to_string(x) + ") is not finite");
    return std::sqrt(std::max(1.0, std::abs(q - z)));
}

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State r = y;
    for (const auto& [c, k] : terms) {
        if (c == 0.0) continue;
        for (int i = 0; i < 3; ++i) r[i] += h * c * (*k)[i];
    }
    return r;
}

int sgn(double v) { return (v > 0) - (v < 0); }

// Prüfer angle bookkeeping: theta = k pi + r, r = atan2(u,u') mod pi.
struct PhaseTracker {
    long k = 0;
    double r = 0.0;
    int last_sign = 0;

    static double reduce(double u, double du) {
        double r = std::atan2(u, du);
        if (r < 0) r += pi;
        if (r >= pi) r -= pi;
        return r;
    }
    void start(double theta, double u, bool forward) {
        // forward: r in [0,pi); backward: r in (0,pi]
        k = static_cast<long>(forward ? std::floor(theta / pi) : std::ceil(theta / pi) - 1);
        r = theta - k * pi;
        last_sign = sgn(u);
    }
    // At most one zero of u per step is guaranteed by the step cap.
    void update(double u, double du, bool forward) {
        const int s = sgn(u);
        if (forward) {
            if (s == 0 || (last_sign != 0 && s != last_sign)) ++k;
        } else {
            if (last_sign == 0 || (s != 0 && s != last_sign)) --k;
        }
        r = (s == 0) ? 0.0 : reduce(u, du);
        last_sign = s;
    }
    double angle() const { return k * pi + r; }
};

}  // namespace

PropagateResult propagate(const PotentialModel& model, cplx z, double from, double to,
                          const ScaledValue& init, const PropagateOptions& opt, double init_phase) {
    using namespace dop853;
    if (!(opt.tol > 1e-15 && opt.tol < 1e-2))
        throw DomainError("integration tolerance outside (1e-15, 1e-2)");
    PropagateResult res;
    ScaledValue cur = init;
    cur.renormalize();
    PhaseTracker phase;
    if (opt.track_phase) phase.start(init_phase, cur.u.real(), to >= from);
    res.phase = init_phase;
    if (opt.record_steps) {
        res.grid.push_back(from);
        res.values.push_back(cur);
    }
    if (from == to) {
        res.end = cur;
        return res;
    }

    const double dir = to > from ? 1.0 : -1.0;
    const bool forward = dir > 0;
    const double span = std::abs(to - from);
    const double hmin = 1e-14 * span;
    const Rhs f{model, z, opt.accumulate_norm};

    std::vector<double> targets = opt.outputs;
    targets.push_back(to);
    std::size_t next_target = 0;
    while (next_target < targets.size() && (targets[next_target] - from) * dir <= 0) {
        if (targets[next_target] == from) {
            res.grid.push_back(from);
            res.values.push_back(cur);
        }
        ++next_target;
    }

    State y{cur.u, cur.du, cplx(0.0)};
    double x = from;
    double h = std::min(span, 0.1 / wavenumber(model, z, from));
    State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10;
    f(x, y, k1);
    const std::size_t max_steps = 50'000'000;

    while (next_target < targets.size()) {
        const double target = targets[next_target];
        if (res.steps > max_steps) throw StepUnderflow("step budget exhausted");
        // step cap h*k <= 1 (one zero per step at most, bounded growth per step)
        const double kx = wavenumber(model, z, x);
        h = std::min(h, 1.0 / kx);
        double remaining = std::abs(target - x);
        bool hits = false;
        if (h >= remaining) {
            h = remaining;
            hits = true;
        } else if (h > 0.5 * remaining) {
            h = 0.5 * remaining;
        }
        while (h * wavenumber(model, z, x + dir * h) > 1.0 && h > hmin) {
            h *= 0.5;
            hits = false;
        }
        if (h < hmin && !hits) throw StepUnderflow("step " + std::to_string(h) + " below 1e-14*interval at x=" + std::to_string(x));

        const double hs = dir * h;
        f(x + c2 * hs, axpy(y, hs, {{a21, &k1}}), k2);
        f(x + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}), k3);
        f(x + c4 * hs, axpy(y, hs, {{a41, &k1}, {a43, &k3}}), k4);
        f(x + c5 * hs, axpy(y, hs, {{a51, &k1}, {a53, &k3}, {a54, &k4}}), k5);
        f(x + c6 * hs, axpy(y, hs, {{a61, &k1}, {a64, &k4}, {a65, &k5}}), k6);
        f(x + c7 * hs, axpy(y, hs, {{a71, &k1}, {a74, &k4}, {a75, &k5}, {a76, &k6}}), k7);
        f(x + c8 * hs, axpy(y, hs, {{a81, &k1}, {a84, &k4}, {a85, &k5}, {a86, &k6}, {a87, &k7}}), k8);
        f(x + c9 * hs, axpy(y, hs, {{a91, &k1}, {a94, &k4}, {a95, &k5}, {a96, &k6}, {a97, &k7}, {a98, &k8}}), k9);
        f(x + c10 * hs,
          axpy(y, hs, {{a101, &k1}, {a104, &k4}, {a105, &k5}, {a106, &k6}, {a107, &k7}, {a108, &k8}, {a109, &k9}}),
          k10);
        State k11, k12;
        f(x + c11 * hs,
          axpy(y, hs,
               {{a111, &k1}, {a114, &k4}, {a115, &k5}, {a116, &k6}, {a117, &k7}, {a118, &k8}, {a119, &k9}, {a1110, &k10}}),
          k11);
        const double xph = hits ? target : x + hs;
        f(xph,
          axpy(y, hs,
               {{a121, &k1}, {a124, &k4}, {a125, &k5}, {a126, &k6}, {a127, &k7}, {a128, &k8}, {a129, &k9}, {a1210, &k10},
                {a1211, &k11}}),
          k12);
        State bsum;
        for (int i = 0; i < 3; ++i)
            bsum[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                      b11 * k11[i] + b12 * k12[i];
        State ynew;
        for (int i = 0; i < 3; ++i) ynew[i] = y[i] + hs * bsum[i];

        // error on the scaled pair (u, u'/k), relative to the local solution size
        const double kn = std::max(kx, wavenumber(model, z, xph));
        const double size = std::max({std::abs(y[0]), std::abs(y[1]) / kn, std::abs(ynew[0]), std::abs(ynew[1]) / kn});
        const double sk[2] = {opt.tol * size, opt.tol * size * kn};
        double err5 = 0.0, err3 = 0.0;
        for (int i = 0; i < 2; ++i) {
            const cplx e3 = bsum[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
            const cplx e5 = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                            er11 * k11[i] + er12 * k12[i];
            err3 += std::norm(e3 / sk[i]);
            err5 += std::norm(e5 / sk[i]);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        const double err = h * err5 / std::sqrt(2.0 * deno);
        if (!std::isfinite(err)) throw NonFinite("integration produced non-finite values near x=" + std::to_string(x));
        const double fac = std::clamp(std::pow(err, 0.125) / 0.9, 1.0 / 6.0, 3.0);

        if (err > 1.0) {
            h /= fac;
            if (h < hmin) throw StepUnderflow("step below 1e-14*interval at x=" + std::to_string(x));
            continue;
        }

        ++res.steps;
        x = xph;
        y = ynew;
        // renormalize the pair; the integral scales quadratically
        const double m = std::max(std::abs(y[0]), std::abs(y[1]));
        if (m > 0 && (m < 0.5 || m > 2.0)) {
            const double s = 1.0 / m;
            y[0] *= s;
            y[1] *= s;
            y[2] *= s * s;
            cur.exponent += std::log(m);
        }
        f(x, y, k1);
        if (opt.track_phase) phase.update(y[0].real(), y[1].real(), forward);
        if (opt.record_steps && !hits) {
            res.grid.push_back(x);
            res.values.push_back(ScaledValue(y[0], y[1], cur.exponent));
        }
        if (hits) {
            if (next_target + 1 < targets.size() || opt.record_steps) {
                res.grid.push_back(x);
                res.values.push_back(ScaledValue(y[0], y[1], cur.exponent));
            }
            ++next_target;
        }
        h = h / fac;
    }

    res.end = ScaledValue(y[0], y[1], cur.exponent);
    res.norm = y[2];
    if (opt.track_phase) res.phase = phase.angle();
    return res;
}

Trajectory integrate(const PotentialModel& model, cplx z, double from_x, double to_x, const ScaledValue& init,
                     double tol) {
    if (from_x == to_x) throw DomainError("integrate: from_x == to_x");
    for (double x : {from_x, to_x})
        if (!(x > model.a() && x < model.b())) throw DomainError("integrate: endpoint outside the open interval");
    PropagateOptions opt;
    opt.tol = tol;
    opt.record_steps = true;
    auto r = propagate(model, z, from_x, to_x, init, opt);
    return Trajectory{std::move(r.grid), std::move(r.values), z, &model};
}

double initial_phase(const ScaledValue& s, Side side) {
    double r = std::atan2(s.u.real(), s.du.real());
    if (r < 0) r += pi;
    if (r >= pi) r -= pi;
    if (side == Side::Right && r == 0.0) r = pi;
    return r;
}

Shot shoot(const PotentialModel& model, cplx z, const Boundary& from, Side side, double to, double tol, bool phase,
           bool norm) {
    ScaledValue seed;
    double start;
    cplx tail{0.0};
    if (from.angle) {
        start = from.x;
        double th = *from.angle;
        if (side == Side::Right && th == 0.0) th = pi;
        seed = ScaledValue(std::sin(th), std::cos(th));
    } else {
        start = seed_point(model, side, z);
        if (side == Side::Left) start = std::min(start, to);
        else start = std::max(start, to);
        seed = asymptotic_seed(model, side, z, start);
        if (norm) tail = seed_tail_integral(model, side, z, start);
    }
    PropagateOptions opt;
    opt.tol = tol;
    opt.track_phase = phase;
    opt.accumulate_norm = norm;
    const double th0 = phase ? initial_phase(seed, side) : 0.0;
    auto r = propagate(model, z, start, to, seed, opt, th0);
    Shot s;
    s.v = r.end;
    s.phase = r.phase;
    s.start = start;
    if (norm) {
        // tail is in units of e^{2 seed.exponent}
        const cplx path = side == Side::Left ? r.norm : -r.norm;
        s.norm = path + tail * std::exp(2.0 * (seed.exponent - r.end.exponent));
    }
    return s;
}

int count_from_phases(double theta_left, double theta_right) {
    const double d = (theta_left - theta_right) / pi;
    // tolerate round-off right at an eigenvalue
    const double c = std::ceil(d - 1e-12);
    return std::max(0, static_cast<int>(c));
}

double match_point(const PotentialModel& model, double lo, double hi) {
    const double margin = 0.1 * (hi - lo);
    const double a = lo + margin, b = hi - margin;
    const int n = 2000;
    double best = std::numeric_limits<double>::infinity(), bx = 0.5 * (a + b);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double q = model.q_raw(x);
        if (!std::isfinite(q)) continue;
        if (q < best - 1e-12 * (1 + std::abs(q)) ||
            (std::abs(q - best) <= 1e-12 * (1 + std::abs(q)) && std::abs(x - mid) < std::abs(bx - mid))) {
            best = q;
            bx = x;
        }
    }
    return bx;
}

int oscillation_count(const PotentialModel& model, double lambda, const Boundary& left, const Boundary& right,
                      double tol) {
    const cplx z(lambda, 0.0);
    const double lo = left.angle ? left.x : seed_point(model, Side::Left, z);
    const double hi = right.angle ? right.x : seed_point(model, Side::Right, z);
    if (!(lo < hi)) throw DomainError("oscillation_count: empty sub-interval");
    const double m = match_point(model, lo, hi);
    const Shot l = shoot(model, z, left, Side::Left, m, tol, true, false);
    const Shot r = shoot(model, z, right, Side::Right, m, tol, true, false);
    return count_from_phases(l.phase, r.phase);
}

}  // namespace specweyl

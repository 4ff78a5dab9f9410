#include "specweyl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <map>

#include <boost/math/tools/toms748_solve.hpp>

#include "specweyl/errors.hpp"

namespace specweyl {

namespace {

// A separated two-point problem: boundaries plus the matching point used for phases and Wronskians.
struct Problem {
    const Frame& f;
    Boundary left, right;
    double m;

    struct Eval {
        double delta;  // theta_L(m) - theta_R(m)
        double wnorm;  // W / (|u_L||u_R'| + |u_L'||u_R|)
    };

    Eval eval(double lambda, double tol) const {
        const cplx z(lambda, 0.0);
        const Shot l = shoot(f.model(), z, left, Side::Left, m, tol, true, false);
        const Shot r = shoot(f.model(), z, right, Side::Right, m, tol, true, false);
        const double w = (l.v.u * r.v.du - l.v.du * r.v.u).real();
        const double scale = std::abs(l.v.u) * std::abs(r.v.du) + std::abs(l.v.du) * std::abs(r.v.u);
        return {l.phase - r.phase, scale > 0 ? w / scale : 0.0};
    }
};

double truncation_end(const PotentialModel& m, Side s) {
    if (m.endpoint(s).seed == SeedTemplate::Plain) return s == Side::Left ? m.a() : m.b();
    return seed_point(m, s, cplx(-1.0, 0.0));
}

double full_match_point(const Frame& f) {
    return match_point(f.model(), truncation_end(f.model(), Side::Left), truncation_end(f.model(), Side::Right));
}

double min_q(const PotentialModel& m, double lo, double hi) {
    double best = std::numeric_limits<double>::infinity();
    const int n = 2000;
    for (int i = 1; i < n; ++i) {
        const double q = m.q_raw(lo + (hi - lo) * i / n);
        if (std::isfinite(q)) best = std::min(best, q);
    }
    if (!std::isfinite(best)) throw BracketFail("potential not finite on the search window");
    return best;
}

// Coarse phase tolerance used while isolating eigenvalues; refinement uses the frame tolerance.
constexpr double coarse_tol = 1e-8;

std::vector<double> solve(const Problem& p, double xlo, double xhi, int count, int first) {
    if (count < 1 || first < 0) throw DomainError("eigenvalue count must be >= 1");
    const int kmin = first, kmax = first + count;
    auto cnt = [](double delta) { return count_from_phases(delta, 0.0); };

    double lo = min_q(p.f.model(), xlo, xhi) - 1.0;
    double dlo = p.eval(lo, coarse_tol).delta;
    while (cnt(dlo) > 0) {
        lo -= 2.0 * (std::abs(lo) + 1.0);
        if (lo < -1e12) throw BracketFail("operator does not appear to be bounded below");
        dlo = p.eval(lo, coarse_tol).delta;
    }
    double hi = lo + 10.0;
    double dhi = p.eval(hi, coarse_tol).delta;
    while (cnt(dhi) < kmax) {
        hi = lo + 2.0 * (hi - lo);
        if (hi > 1e14) throw BracketFail("could not enclose the requested eigenvalues");
        dhi = p.eval(hi, coarse_tol).delta;
    }

    // isolate: refine the sample set until each requested index sits alone in a gap
    std::map<double, double> samples{{lo, dlo}, {hi, dhi}};
    for (int round = 0;; ++round) {
        std::vector<double> fresh;
        for (auto it = samples.begin(); std::next(it) != samples.end(); ++it) {
            const auto nx = std::next(it);
            const int ca = std::max(cnt(it->second), kmin), cb = std::min(cnt(nx->second), kmax);
            if (cb - ca <= 0 || cnt(nx->second) - cnt(it->second) == 1) continue;
            const double a = it->first, b = nx->first, w = b - a;
            if (w < 1e-12 * (1.0 + std::abs(a) + std::abs(b)) || round > 200)
                throw BracketFail("eigenvalues not separated in [" + std::to_string(a) + ", " + std::to_string(b) + "]");
            // aim between the middle targeted eigenvalue and its successor
            const double target = (0.5 * (ca + cb) + 0.5) * pi;
            double x = a + w * (target - it->second) / (nx->second - it->second);
            x = std::clamp(x, a + 0.02 * w, b - 0.02 * w);
            if (!std::isfinite(x)) x = a + 0.5 * w;
            fresh.push_back(x);
        }
        if (fresh.empty()) break;
        std::vector<double> vals(fresh.size());
        parallel_for(fresh.size(), [&](std::size_t i) { vals[i] = p.eval(fresh[i], coarse_tol).delta; });
        for (std::size_t i = 0; i < fresh.size(); ++i) samples.emplace(fresh[i], vals[i]);
    }
    std::vector<std::pair<double, double>> br(count, {0.0, 0.0});
    for (auto it = samples.begin(); std::next(it) != samples.end(); ++it) {
        const int ca = cnt(it->second);
        if (cnt(std::next(it)->second) == ca + 1 && ca >= kmin && ca < kmax) br[ca - kmin] = {it->first, std::next(it)->first};
    }

    std::vector<double> out(count);
    parallel_for(count, [&](std::size_t i) {
        const int k = kmin + static_cast<int>(i);
        std::map<double, Problem::Eval> memo;
        auto ev = [&](double x) {
            auto it = memo.find(x);
            if (it != memo.end()) return it->second;
            return memo.emplace(x, p.eval(x, p.f.tol())).first->second;
        };
        auto g = [&](double x) { return ev(x).delta - k * pi; };
        double a = br[i].first, b = br[i].second;
        // the coarse bracket can miss a root sitting within the coarse phase error of an end
        double ga = g(a), gb = g(b);
        for (int t = 0; ga > 0.0 && t < 40; ++t) ga = g(a -= 1e-7 * (1.0 + std::abs(a)) * (1 << std::min(t, 20)));
        for (int t = 0; gb <= 0.0 && t < 40; ++t) gb = g(b += 1e-7 * (1.0 + std::abs(b)) * (1 << std::min(t, 20)));
        if (ga > 0.0 || gb <= 0.0) throw BracketFail("phase does not bracket eigenvalue " + std::to_string(k));
        double root;
        if (ga == 0.0) {
            root = a;
        } else {
            auto tol = [](double x, double y) { return std::abs(y - x) <= 2e-9 * (1.0 + std::abs(x)); };
            std::uintmax_t iters = 200;
            std::pair<double, double> r;
            try {
                r = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
            } catch (const std::exception& e) {
                throw BracketFail("refinement failed on [" + std::to_string(a) + ", " + std::to_string(b) + "]: " + e.what());
            }
            root = 0.5 * (r.first + r.second);
        }
        // certificate: W changes sign across the reported accuracy window
        const double d = 1e-9 * (1.0 + std::abs(root));
        const double wa = ev(root - d).wnorm, wb = ev(root + d).wnorm;
        if (wa * wb > 0.0) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "no sign change of W on [%.17g, %.17g]", root - d, root + d);
            throw BracketFail(buf);
        }
        out[i] = root;
    });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw BracketFail("eigenvalues not strictly increasing near " + std::to_string(out[i]));
    return out;
}

// Both Weyl solutions at the matching point with their accumulated norms.
struct Matched {
    ScaledValue l, r;
    cplx norm_l, norm_r;
    cplx kappa;  // l = kappa r in mantissas (exponent difference l.e - r.e applies)
};

Matched match_at(const Frame& f, double lambda, double m) {
    const cplx z(lambda, 0.0);
    const Shot l = shoot(f.model(), z, Boundary::endpoint(f.model(), Side::Left), Side::Left, m, f.tol(), false, true);
    const Shot r = shoot(f.model(), z, Boundary::endpoint(f.model(), Side::Right), Side::Right, m, f.tol(), false, true);
    const cplx num = l.v.u * std::conj(r.v.u) + l.v.du * std::conj(r.v.du);
    const double den = std::norm(r.v.u) + std::norm(r.v.du);
    const cplx kappa = num / den;
    const double mis = std::hypot(std::abs(l.v.u - kappa * r.v.u), std::abs(l.v.du - kappa * r.v.du)) /
                       std::hypot(std::abs(l.v.u), std::abs(l.v.du));
    if (!(mis <= 1e-5))
        throw NotAnEigenvalue("lambda = " + std::to_string(lambda) + ": Weyl solutions mismatch " + std::to_string(mis));
    return {l.v, r.v, l.norm, r.norm, kappa};
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

void check_grid(const PotentialModel& m, const std::vector<double>& grid, const std::vector<double>& values) {
    if (grid.size() != values.size()) throw GridMismatch("grid and values differ in length");
    if (grid.size() < 3) throw GridMismatch("grid needs at least 3 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw GridMismatch("grid must be strictly increasing");
    if (!(grid.front() > m.a() && grid.back() < m.b())) throw GridMismatch("grid leaves the open interval");
}

}  // namespace

std::vector<double> eigenvalues(const Frame& f, int count, int first) {
    const Problem p{f, Boundary::endpoint(f.model(), Side::Left), Boundary::endpoint(f.model(), Side::Right),
                    full_match_point(f)};
    return solve(p, truncation_end(f.model(), Side::Left), truncation_end(f.model(), Side::Right), count, first);
}

namespace {

Problem sub_problem(const Frame& f, double cut, Side side, SubBC bc) {
    const PotentialModel& m = f.model();
    if (!(cut > m.a() && cut < m.b())) throw DomainError("cut outside the open interval");
    const double angle = bc == SubBC::Dirichlet ? 0.0 : pi / 2;
    if (side == Side::Left) return Problem{f, Boundary::endpoint(m, Side::Left), Boundary::interior(cut, angle), cut};
    return Problem{f, Boundary::interior(cut, angle), Boundary::endpoint(m, Side::Right), cut};
}

}  // namespace

std::vector<double> eigenvalues_below(const Frame& f, double lambda_max) {
    const Problem p{f, Boundary::endpoint(f.model(), Side::Left), Boundary::endpoint(f.model(), Side::Right),
                    full_match_point(f)};
    const int n = count_from_phases(p.eval(lambda_max, f.tol()).delta, 0.0);
    if (n == 0) return {};
    return solve(p, truncation_end(f.model(), Side::Left), truncation_end(f.model(), Side::Right), n, 0);
}

std::vector<double> sub_spectrum_below(const Frame& f, double cut, Side side, SubBC bc, double lambda_max) {
    const Problem p = sub_problem(f, cut, side, bc);
    const int n = count_from_phases(p.eval(lambda_max, f.tol()).delta, 0.0);
    if (n == 0) return {};
    const PotentialModel& m = f.model();
    return side == Side::Left ? solve(p, truncation_end(m, Side::Left), cut, n, 0)
                              : solve(p, cut, truncation_end(m, Side::Right), n, 0);
}

std::vector<double> sub_spectrum(const Frame& f, double cut, Side side, SubBC bc, int count) {
    const Problem p = sub_problem(f, cut, side, bc);
    const PotentialModel& m = f.model();
    return side == Side::Left ? solve(p, truncation_end(m, Side::Left), cut, count, 0)
                              : solve(p, cut, truncation_end(m, Side::Right), count, 0);
}

std::vector<double> norming_constants(const Frame& f, const std::vector<double>& eigs, Side side) {
    const double m = full_match_point(f);
    std::vector<double> out(eigs.size());
    parallel_for(eigs.size(), [&](std::size_t i) {
        const Matched d = match_at(f, eigs[i], m);
        // gamma_-^2 = int phi^2 = (N_l + kappa^2 N_r) e^{2 l.e}; gamma_+^2 = (N_l/kappa^2 + N_r) e^{2 r.e}
        const cplx g = side == Side::Left ? (d.norm_l + d.kappa * d.kappa * d.norm_r) * std::exp(2.0 * d.l.exponent)
                                          : (d.norm_l / (d.kappa * d.kappa) + d.norm_r) * std::exp(2.0 * d.r.exponent);
        out[i] = g.real();
    });
    return out;
}

SpectralMeasure spectral_measure(const Frame& f, int count) {
    const auto eigs = eigenvalues(f, count);
    const auto g = norming_constants(f, eigs, Side::Left);
    SpectralMeasure mu;
    mu.gauge = f.gauge();
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (!(g[i] > 0.0) || !std::isfinite(g[i])) throw NotAnEigenvalue("non-positive norming constant");
        mu.atoms.push_back({eigs[i], 1.0 / g[i]});
    }
    return mu;
}

std::vector<double> eigenfunction_on_grid(const Frame& f, double lambda, const std::vector<double>& grid) {
    const PotentialModel& model = f.model();
    const cplx z(lambda, 0.0);
    const double m = full_match_point(f);
    const Matched d = match_at(f, lambda, m);
    const double sl = std::min(seed_point(model, Side::Left, z), m);
    const double sr = std::max(seed_point(model, Side::Right, z), m);
    const ScaledValue seed_l = asymptotic_seed(model, Side::Left, z, sl);
    const ScaledValue seed_r = asymptotic_seed(model, Side::Right, z, sr);
    const double rel = d.l.exponent - d.r.exponent;  // l = kappa e^{rel} r in values

    std::vector<double> out(grid.size(), 0.0);
    std::vector<double> out_l, out_r;
    std::vector<std::size_t> idx_l, idx_r;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        if (x < sl || x > sr) {
            // beyond the truncation point: asymptotic seed where valid, else negligible
            const Side s = x < sl ? Side::Left : Side::Right;
            if (model.endpoint(s).seed == SeedTemplate::Oscillator && std::abs(x) >= 4.0) {
                ScaledValue v = asymptotic_seed(model, s, z, x);
                double val = v.value().real();
                if (s == Side::Right) val *= (d.kappa * std::exp(rel)).real();
                out[i] = std::isfinite(val) ? val : 0.0;
            }
        } else if (x < m) {
            out_l.push_back(x);
            idx_l.push_back(i);
        } else {
            idx_r.push_back(i);
        }
    }
    std::reverse(idx_r.begin(), idx_r.end());
    for (std::size_t i : idx_r) out_r.push_back(grid[i]);

    PropagateOptions opt;
    opt.tol = f.tol();
    if (!out_l.empty()) {
        opt.outputs = out_l;
        const auto r = propagate(model, z, sl, m, seed_l, opt);
        for (std::size_t j = 0; j < idx_l.size(); ++j) out[idx_l[j]] = r.values[j].value().real();
    }
    if (!out_r.empty()) {
        std::vector<double> outs;
        for (double x : out_r)
            if (x > m) outs.push_back(x);
        opt.outputs = outs;
        const auto r = propagate(model, z, sr, m, seed_r, opt);
        const cplx fac = d.kappa * std::exp(rel);
        for (std::size_t j = 0; j < idx_r.size(); ++j) {
            const ScaledValue& v = j < outs.size() ? r.values[j] : r.end;
            out[idx_r[j]] = (fac * v.value()).real();
        }
    }
    return out;
}

std::vector<double> expand(const Frame& f, const std::vector<double>& grid, const std::vector<double>& values,
                           const SpectralMeasure& measure) {
    check_grid(f.model(), grid, values);
    if (measure.gauge != f.gauge()) throw GridMismatch("measure was computed in a different gauge");
    std::vector<double> out(measure.atoms.size());
    parallel_for(measure.atoms.size(), [&](std::size_t n) {
        const auto phi = eigenfunction_on_grid(f, measure.atoms[n].lambda, grid);
        std::vector<double> prod(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) prod[i] = phi[i] * values[i];
        out[n] = trapezoid(grid, prod);
    });
    return out;
}

ParsevalResult parseval(const Frame& f, const std::vector<double>& grid, const std::vector<double>& values,
                        const SpectralMeasure& measure) {
    ParsevalResult r;
    r.coefficients = expand(f, grid, values, measure);
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
    r.norm2 = trapezoid(grid, sq);
    for (std::size_t n = 0; n < measure.atoms.size(); ++n)
        r.series += r.coefficients[n] * r.coefficients[n] * measure.atoms[n].weight;
    r.defect = std::abs(r.series - r.norm2) / r.norm2;
    return r;
}

ExponentReport exponent_report(const std::vector<double>& eigs) {
    if (eigs.size() < 20) throw TooFewEigenvalues("need at least 20 eigenvalues, got " + std::to_string(eigs.size()));
    ExponentReport rep;
    rep.window_begin = eigs.size() / 2;
    rep.window_end = eigs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    double n = 0;
    for (std::size_t i = rep.window_begin; i < rep.window_end; ++i) {
        if (!(eigs[i] > 0.0)) throw TooFewEigenvalues("eigenvalues in the fit window must be positive");
        const double x = std::log(static_cast<double>(i + 1)), y = std::log(eigs[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
        n += 1;
    }
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    rep.kappa = cxy / cxx;
    rep.s = 1.0 / rep.kappa;
    rep.r2 = cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
    // kappa(p+1) = 1 counts as divergent; the band absorbs finite-window bias
    rep.genus = 0;
    while (!(rep.kappa * (rep.genus + 1) > 1.05) && rep.genus < 64) ++rep.genus;
    rep.below_floor = rep.s < 0.45;
    return rep;
}

double wronskian_derivative(const Frame& f, double lambda) {
    const double m = full_match_point(f);
    auto W = [&](double l) {
        const cplx z(l, 0.0);
        const Shot a = shoot(f.model(), z, Boundary::endpoint(f.model(), Side::Left), Side::Left, m, f.tol(), false, false);
        const Shot b = shoot(f.model(), z, Boundary::endpoint(f.model(), Side::Right), Side::Right, m, f.tol(), false, false);
        return std::make_pair(wronskian(a.v, b.v), a.v.magnitude() * b.v.magnitude());
    };
    const auto w0 = W(lambda);
    if (std::abs(w0.first.w) > 1e-6 * w0.second)
        throw NotAnEigenvalue("W(phi,chi) does not vanish at lambda = " + std::to_string(lambda));
    const double h = 1e-5 * (1.0 + std::abs(lambda));
    const auto p1 = W(lambda + h), m1 = W(lambda - h), p2 = W(lambda + 2 * h), m2 = W(lambda - 2 * h);
    // align exponents before differencing
    const double e = p1.first.exponent;
    auto at = [e](const ScaledWronskian& w) { return (w.w * std::exp(w.exponent - e)).real(); };
    const double d1 = (at(p1.first) - at(m1.first)) / (2 * h);
    const double d2 = (at(p2.first) - at(m2.first)) / (4 * h);
    return (4.0 * d1 - d2) / 3.0 * std::exp(e);
}

std::vector<NormingPair> norming_pairs(const Frame& f, const std::vector<double>& eigs) {
    const auto gm = norming_constants(f, eigs, Side::Left);
    const auto gp = norming_constants(f, eigs, Side::Right);
    std::vector<NormingPair> out(eigs.size());
    parallel_for(eigs.size(), [&](std::size_t i) {
        out[i] = {eigs[i], gm[i], gp[i], wronskian_derivative(f, eigs[i]), 0.5 * std::log(gm[i] / gp[i])};
    });
    return out;
}

}  // namespace specweyl

#include "specweyl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "specweyl/errors.hpp"
#include "specweyl/special.hpp"

namespace specweyl {

namespace {

// m e^e, kept apart so that huge or tiny magnitudes survive sums and differences
struct Scaled {
    cplx m{0.0};
    double e = 0.0;

    double log_abs() const { return std::log(std::abs(m)) + e; }
};

Scaled add(const Scaled& a, const Scaled& b) {
    if (a.m == cplx(0.0)) return b;
    if (b.m == cplx(0.0)) return a;
    const double e = std::max(a.e, b.e);
    return {a.m * std::exp(a.e - e) + b.m * std::exp(b.e - e), e};
}
Scaled neg(const Scaled& a) { return {-a.m, a.e}; }

bool same_gauge(const Frame& f0, const Frame& f1) {
    const auto& m0 = f0.model();
    const auto& m1 = f1.model();
    if (f0.c() != f1.c()) return false;
    for (Side s : {Side::Left, Side::Right}) {
        if (m0.endpoint(s).seed != m1.endpoint(s).seed) return false;
        if (m0.endpoint(s).coupling != m1.endpoint(s).coupling) return false;
        if (m0.bc(s).has_value() != m1.bc(s).has_value()) return false;
        if (m0.bc(s) && m0.bc(s)->angle != m1.bc(s)->angle) return false;
    }
    return true;
}

template <class F>
DecayDiagnostic over_ray(const RaySpec& ray, F&& log_value) {
    ray.validate();
    std::vector<double> lv(ray.radii.size());
    parallel_for(ray.radii.size(), [&](std::size_t i) { lv[i] = log_value(ray.radii[i], ray.point(ray.radii[i])); });
    return make_diagnostic(ray.radii, std::move(lv));
}

double log_abs_minus_one(cplx log_ratio) {
    // |e^{L} - 1| without losing digits near L = 0
    const cplx d = std::abs(log_ratio) < 0.5 ? cplx(std::expm1(log_ratio.real()) * std::cos(log_ratio.imag()) +
                                                        (std::cos(log_ratio.imag()) - 1.0),
                                                    std::exp(log_ratio.real()) * std::sin(log_ratio.imag()))
                                             : std::exp(log_ratio) - 1.0;
    return std::log(std::abs(d));
}

cplx log_of(const ScaledValue& v) { return std::log(v.u) + v.exponent; }

}  // namespace

void RaySpec::validate() const {
    if (!(angle > 0.0 && angle < 2 * pi)) throw DomainError("ray angle must lie in (0, 2pi)");
    if (radii.empty()) throw DomainError("ray needs at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError("ray radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("ray radii must be strictly increasing");
    }
}

cplx RaySpec::point(double r) const {
    if (angle == pi) return cplx(-r, 0.0);
    return std::polar(r, angle);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "Bounded";
        case Verdict::Diverging: return "Diverging";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::vector<double> DecayDiagnostic::values() const {
    std::vector<double> v;
    for (double l : log_values) v.push_back(std::exp(l));
    return v;
}

DecayDiagnostic make_diagnostic(std::vector<double> radii, std::vector<double> log_values) {
    DecayDiagnostic d;
    d.radii = std::move(radii);
    d.log_values = std::move(log_values);
    // exact zeros (identical data) carry no growth
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t i = 0; i < d.radii.size(); ++i) {
        if (!std::isfinite(d.log_values[i])) continue;
        const double x = std::log(d.radii[i]), y = d.log_values[i];
        sx += x, sy += y, sxx += x * x, sxy += x * y, n += 1;
    }
    const double cxx = sxx - sx * sx / std::max(n, 1.0);
    d.slope = (n >= 2 && cxx > 0) ? (sxy - sx * sy / n) / cxx : 0.0;
    d.verdict = d.slope <= 0.05 ? Verdict::Bounded : d.slope >= 0.3 ? Verdict::Diverging : Verdict::Inconclusive;
    return d;
}

DecayDiagnostic ray_phi_asymptotics(const Frame& f, const RaySpec& ray, double x, double x0) {
    return over_ray(ray, [&](double r, cplx z) {
        const cplx lr = log_of(phi(f, z, x)) - log_of(phi(f, z, x0)) - (x - x0) * std::sqrt(-z);
        return log_abs_minus_one(lr) + 0.5 * std::log(r);
    });
}

DecayDiagnostic ray_M_asymptotics(const Frame& f, const RaySpec& ray, double x) {
    return over_ray(ray, [&](double r, cplx z) {
        const ScaledComplex M = singular_M_scaled(f, z);
        const ScaledValue p = phi(f, z, x), t = theta(f, z, x);
        const Scaled s = add({M.mantissa, M.exponent}, {t.u / p.u, t.exponent - p.exponent});
        return s.log_abs() + 0.5 * std::log(r) + 2.0 * (std::log(std::abs(p.u)) + p.exponent);
    });
}

DecayDiagnostic ray_psi_asymptotics(const Frame& f, const RaySpec& ray, double x) {
    return over_ray(ray, [&](double r, cplx z) {
        const cplx lr = log_of(psi(f, z, x)) + log_of(phi(f, z, x)) + std::log(2.0 * std::sqrt(-z));
        return log_abs_minus_one(lr) + 0.5 * std::log(r);
    });
}

DecayDiagnostic ray_weber_asymptotics(const Frame& f, const RaySpec& ray, double x) {
    return over_ray(ray, [&](double r, cplx z) {
        const cplx lr = log_of(phi(f, z, x)) - weber_ray_asymptotic(z, -x).log();
        return log_abs_minus_one(lr) + 0.5 * std::log(r);
    });
}

DecayDiagnostic bm_diagnostic(const Frame& f0, const Frame& f1, double c, const RaySpec& ray) {
    if (!same_gauge(f0, f1)) throw FrameMismatch("frames differ in base point, seed templates or boundary conditions");
    for (const Frame* f : {&f0, &f1})
        if (!(c > f->model().a() && c < f->model().b())) throw DomainError("cut outside the open interval");
    return over_ray(ray, [&](double r, cplx z) {
        // -M = theta/phi + 1/(phi^2 (m_- + m_+)) at the cut, all in scaled form
        Scaled d;
        double lphi0 = 0.0;
        for (int j = 0; j < 2; ++j) {
            const Frame& f = j == 0 ? f0 : f1;
            const ScaledValue p = phi(f, z, c), ch = chi(f, z, c), t = theta(f, z, c);
            const cplx mm = -p.du / p.u, mp = ch.du / ch.u;
            Scaled term = add({t.u / p.u, t.exponent - p.exponent}, {1.0 / (p.u * p.u * (mm + mp)), -2.0 * p.exponent});
            d = add(d, j == 0 ? term : neg(term));
            if (j == 0) lphi0 = 2.0 * (std::log(std::abs(p.u)) + p.exponent);
        }
        if (d.m == cplx(0.0)) return -std::numeric_limits<double>::infinity();
        return d.log_abs() + lphi0 + 0.5 * std::log(r);
    });
}

DecayDiagnostic hl_condition(const Frame& f, double c, const RaySpec& ray) {
    return over_ray(ray, [&](double, cplx z) { return (log_of(chi(f, z, c)) - log_of(phi(f, z, c))).real(); });
}

StieltjesResult stieltjes_invert(const Frame& f, double x0, double x1, std::vector<double> eps) {
    if (!(x0 < x1)) throw DomainError("interval needs x0 < x1");
    if (eps.empty()) throw DomainError("empty eps ladder");
    for (std::size_t i = 0; i < eps.size(); ++i)
        if (!(eps[i] > 0.0) || (i > 0 && !(eps[i] < eps[i - 1]))) throw DomainError("eps ladder must decrease and stay positive");

    const auto eigs = eigenvalues_below(f, x1 + 1e-3);
    for (double l : eigs)
        if (std::abs(l - x0) < 1e-3 || std::abs(l - x1) < 1e-3)
            throw EigenvalueCollision("eigenvalue " + std::to_string(l) + " within 1e-3 of the interval ends");
    // zeros of phi(.,c) are poles of the pointwise frame's M with non-spectral residues
    for (double mu : sub_spectrum_below(f, f.c(), Side::Left, SubBC::Dirichlet, x1 + 1e-3))
        if (mu > x0 - 1e-3) throw GaugePole("phi(.,c) vanishes at " + std::to_string(mu) + " inside the interval; move the base point");

    std::vector<double> atoms;
    for (double l : eigs)
        if (l > x0 && l < x1) atoms.push_back(l);
    std::vector<double> pts{x0};
    pts.insert(pts.end(), atoms.begin(), atoms.end());
    pts.push_back(x1);
    auto is_atom = [&](std::size_t i) { return i > 0 && i + 1 < pts.size(); };

    StieltjesResult res;
    res.eps = eps;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    for (double e : eps) {
        auto im_m = [&](double x) { return singular_M(f, cplx(x, e)).imag() / pi; };
        // Lorentzian peaks of width e at the atoms: x = atom +/- e tan t
        auto from_atom = [&](double atom, double other) {
            const double s = other > atom ? 1.0 : -1.0;
            const double tmax = std::atan(std::abs(other - atom) / e);
            auto g = [&](double t) {
                const double c = std::cos(t);
                return im_m(atom + s * e * std::tan(t)) * e / (c * c);
            };
            return GK::integrate(g, 0.0, tmax, 12, 1e-10);
        };
        double mass = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double p = pts[i], q = pts[i + 1];
            const bool ap = is_atom(i), aq = is_atom(i + 1);
            if (ap && aq) {
                const double mid = 0.5 * (p + q);
                mass += from_atom(p, mid) + from_atom(q, mid);
            } else if (ap) {
                mass += from_atom(p, q);
            } else if (aq) {
                mass += from_atom(q, p);
            } else {
                mass += GK::integrate(im_m, p, q, 12, 1e-10);
            }
        }
        res.raw.push_back(mass);
    }
    // Neville extrapolation to eps = 0
    std::vector<double> t = res.raw;
    for (std::size_t k = 1; k < t.size(); ++k)
        for (std::size_t i = t.size() - 1; i >= k; --i) {
            t[i] = t[i] + (t[i] - t[i - 1]) * eps[i] / (eps[i - k] - eps[i]);
            if (i == k) break;
        }
    res.mass = t.back();
    return res;
}

HerglotzResult herglotz_check(const SpectralMeasure& mu, const std::vector<cplx>& grid, double scale) {
    double lmax = 0.0;
    for (const auto& a : mu.atoms) lmax = std::max(lmax, std::abs(a.lambda));
    if (scale < 0.0) scale = 1.0 / ((1.0 + lmax) * (1.0 + lmax));
    std::vector<double> w;
    double total = 0.0;
    for (const auto& a : mu.atoms) {
        w.push_back(a.weight * std::exp(-2.0 * scale * a.lambda * a.lambda));
        total += w.back();
    }
    if (!std::isfinite(total) || total > 1e300) throw NonSummable("reweighted spectral mass exceeds the overflow budget");
    HerglotzResult r;
    r.min_im = std::numeric_limits<double>::infinity();
    for (const cplx z : grid) {
        cplx s = 0.0;
        for (std::size_t n = 0; n < w.size(); ++n) s += w[n] / (mu.atoms[n].lambda - z);
        r.values.push_back(s);
        r.min_im = std::min(r.min_im, s.imag());
    }
    return r;
}

IsospectralReport isospectral_compare(const Frame& f0, const Frame& f1, int count) {
    IsospectralReport r;
    r.lambda0 = eigenvalues(f0, count);
    r.lambda1 = eigenvalues(f1, count);
    const auto l0 = norming_constants(f0, r.lambda0, Side::Left), l1 = norming_constants(f1, r.lambda1, Side::Left);
    const auto p0 = norming_constants(f0, r.lambda0, Side::Right), p1 = norming_constants(f1, r.lambda1, Side::Right);
    r.equal = true;
    for (int n = 0; n < count; ++n) {
        r.diff.push_back(r.lambda1[n] - r.lambda0[n]);
        r.left_ratio.push_back(l1[n] / l0[n]);
        r.right_ratio.push_back(p1[n] / p0[n]);
        r.cross_ratio.push_back(p1[n] / l0[n]);
        if (std::abs(r.diff.back()) > 1e-6 * (1.0 + std::abs(r.lambda0[n])) || std::abs(r.left_ratio.back() - 1.0) > 1e-4)
            r.equal = false;
    }
    return r;
}

}  // namespace specweyl

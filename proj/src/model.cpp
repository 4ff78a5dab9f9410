#include "specweyl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

// pchip.hpp calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "specweyl/errors.hpp"
#include "specweyl/special.hpp"

namespace specweyl {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Regular: return "Regular";
        case ModelKind::Harmonic: return "Harmonic";
        case ModelKind::PerturbedHarmonic: return "PerturbedHarmonic";
        case ModelKind::Bessel: return "Bessel";
        case ModelKind::PoschlTeller: return "PoschlTeller";
        case ModelKind::Tabulated: return "Tabulated";
    }
    return "?";
}

double Term::operator()(double x) const {
    const double t = (x - center) / width;
    switch (type) {
        case Type::Gaussian: return amplitude * std::exp(-t * t);
        case Type::Rational: return amplitude / (1.0 + t * t);
        case Type::Bump: {
            const double t2 = t * t;
            return t2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - t2)) : 0.0;
        }
    }
    return 0.0;
}

struct PotentialModel::Table {
    std::vector<double> x;
    std::vector<double> q;
    std::vector<char> bad_cell;  // cell i = [x_i, x_{i+1}] touches a pole
    boost::math::interpolators::pchip<std::vector<double>> spline;

    Table(std::vector<double> xs, std::vector<double> qs, std::vector<char> bad)
        : x(xs), q(qs), bad_cell(std::move(bad)), spline(std::move(xs), std::move(qs)) {}

    double operator()(double t) const {
        auto it = std::upper_bound(x.begin(), x.end(), t);
        std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        if (i >= bad_cell.size()) i = bad_cell.size() - 1;
        if (bad_cell[i]) return std::numeric_limits<double>::quiet_NaN();
        return spline(t);
    }
};

double PotentialModel::length_scale() const {
    if (std::isfinite(a_) && std::isfinite(b_)) return b_ - a_;
    return 1.0;
}

double PotentialModel::perturbation(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t(x);
    return s;
}

double PotentialModel::q_raw(double x) const {
    switch (kind_) {
        case ModelKind::Regular: return perturbation(x);
        case ModelKind::Harmonic:
        case ModelKind::PerturbedHarmonic: return x * x + perturbation(x);
        case ModelKind::Bessel: {
            double q = l_ * (l_ + 1.0) / (x * x) + perturbation(x);
            if (std::isfinite(b_)) q += k_ * (k_ + 1.0) / ((b_ - x) * (b_ - x));
            return q;
        }
        case ModelKind::PoschlTeller: {
            const double s = std::sin(pi * x);
            return pi * pi * nu_ * (nu_ + 1.0) / (s * s) + perturbation(x);
        }
        case ModelKind::Tabulated: return (*table_)(x);
    }
    return 0.0;
}

EndpointClass PotentialModel::classify(Side s) const {
    EndpointClass c;
    auto frob = [&](double coupling, double r0) {
        c.seed = SeedTemplate::Frobenius;
        c.coupling = coupling;
        c.r0 = r0;
        c.tag = coupling < 0.5 ? EndpointTag::NeedsBC : EndpointTag::DecaySelect;
    };
    switch (kind_) {
        case ModelKind::Regular:
        case ModelKind::Tabulated:
            c.tag = EndpointTag::NeedsBC;
            c.seed = SeedTemplate::Plain;
            break;
        case ModelKind::Harmonic:
        case ModelKind::PerturbedHarmonic:
            c.tag = EndpointTag::DecaySelect;
            c.seed = SeedTemplate::Oscillator;
            break;
        case ModelKind::Bessel:
            if (s == Side::Left) {
                frob(l_, (std::isfinite(b_) ? k_ * (k_ + 1.0) / (b_ * b_) : 0.0) + perturbation(a_));
            } else if (std::isfinite(b_)) {
                frob(k_, l_ * (l_ + 1.0) / (b_ * b_) + perturbation(b_));
            } else {
                c.tag = EndpointTag::DecaySelect;
                c.seed = SeedTemplate::Exponential;
            }
            break;
        case ModelKind::PoschlTeller:
            frob(nu_, pi * pi * nu_ * (nu_ + 1.0) / 3.0 + perturbation(s == Side::Left ? a_ : b_));
            break;
    }
    return c;
}

void PotentialModel::finalize(BC bc_a, BC bc_b) {
    if (!(a_ < b_)) throw ModelError("interval requires a < b");
    left_ = classify(Side::Left);
    right_ = classify(Side::Right);
    auto place = [](const EndpointClass& c, BC bc, const char* name) -> BC {
        if (c.tag == EndpointTag::NeedsBC) {
            if (!bc) bc = BoundaryCondition::dirichlet();
            if (!(bc->angle >= 0.0 && bc->angle < pi)) throw ModelError(std::string(name) + " angle must lie in [0, pi)");
            return bc;
        }
        if (bc) throw ModelError(std::string(name) + " given at a limit-point endpoint");
        return std::nullopt;
    };
    bc_a_ = place(left_, bc_a, "bc_a");
    bc_b_ = place(right_, bc_b, "bc_b");
    for (const auto& t : terms_)
        if (!(t.width > 0.0) || !std::isfinite(t.amplitude) || !std::isfinite(t.center))
            throw ModelError("perturbation term needs finite amplitude/center and width > 0");

    if (kind_ == ModelKind::PerturbedHarmonic) {
        // integrability of |q~(t)|/(1+|t|) over the line
        double err = 0.0;
        auto f = [this](double t) { return std::abs(perturbation(t)) / (1.0 + std::abs(t)); };
        const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -inf, inf, 15, 1e-10, &err);
        if (!std::isfinite(I) || err > 1e-3 * (1.0 + I)) throw ModelError("perturbation violates the integrability bound");
        condho_ = I + err;
    }
}

PotentialModel PotentialModel::regular(double a, double b, std::vector<Term> terms, BoundaryCondition bc_a,
                                       BoundaryCondition bc_b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw ModelError("Regular models need a finite interval");
    PotentialModel m;
    m.kind_ = ModelKind::Regular;
    m.a_ = a;
    m.b_ = b;
    m.terms_ = std::move(terms);
    m.finalize(bc_a, bc_b);
    return m;
}

PotentialModel PotentialModel::harmonic() {
    PotentialModel m;
    m.kind_ = ModelKind::Harmonic;
    m.a_ = -inf;
    m.b_ = inf;
    m.finalize({}, {});
    return m;
}

PotentialModel PotentialModel::perturbed_harmonic(std::vector<Term> terms) {
    PotentialModel m;
    m.kind_ = ModelKind::PerturbedHarmonic;
    m.a_ = -inf;
    m.b_ = inf;
    m.terms_ = std::move(terms);
    m.finalize({}, {});
    return m;
}

PotentialModel PotentialModel::bessel(double l, double k, double b, std::vector<Term> terms, BC bc_a, BC bc_b) {
    if (!(l > -0.5)) throw ModelError("Bessel coupling l must exceed -1/2");
    if (!(k > -0.5)) throw ModelError("Bessel coupling k must exceed -1/2");
    if (!(b > 0.0)) throw ModelError("Bessel interval (0,b) needs b > 0");
    if (!std::isfinite(b) && k != 0.0) throw ModelError("b = inf requires k = 0");
    PotentialModel m;
    m.kind_ = ModelKind::Bessel;
    m.a_ = 0.0;
    m.b_ = b;
    m.l_ = l;
    m.k_ = k;
    m.terms_ = std::move(terms);
    m.finalize(bc_a, bc_b);
    return m;
}

PotentialModel PotentialModel::poschl_teller(double nu, std::vector<Term> terms, BC bc_a, BC bc_b) {
    if (!(nu > -0.5)) throw ModelError("Poschl-Teller coupling must exceed -1/2");
    PotentialModel m;
    m.kind_ = ModelKind::PoschlTeller;
    m.a_ = 0.0;
    m.b_ = 1.0;
    m.nu_ = nu;
    m.terms_ = std::move(terms);
    m.finalize(bc_a, bc_b);
    return m;
}

PotentialModel PotentialModel::tabulated(std::vector<double> x, std::vector<double> q, BoundaryCondition bc_a,
                                         BoundaryCondition bc_b) {
    if (x.size() != q.size() || x.size() < 4) throw ModelError("tabulated model needs >= 4 (x,q) pairs");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw ModelError("tabulated grid must be strictly increasing");
    if (!std::isfinite(q.front()) || !std::isfinite(q.back())) throw ModelError("tabulated q must be finite at the ends");
    std::vector<char> bad(x.size() - 1, 0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i])) {
            if (i > 0) bad[i - 1] = 1;
            if (i < bad.size()) bad[i] = 1;
            q[i] = 0.0;
        }
    }
    PotentialModel m;
    m.kind_ = ModelKind::Tabulated;
    m.a_ = x.front();
    m.b_ = x.back();
    m.table_ = std::make_shared<const Table>(std::move(x), std::move(q), std::move(bad));
    m.finalize(bc_a, bc_b);
    return m;
}

PotentialModel PotentialModel::reflected() const {
    std::vector<Term> t = terms_;
    for (auto& term : t) term.center = -term.center;
    switch (kind_) {
        case ModelKind::Harmonic: return harmonic();
        case ModelKind::PerturbedHarmonic: return perturbed_harmonic(std::move(t));
        case ModelKind::Regular: return regular(-b_, -a_, std::move(t), *bc_b_, *bc_a_);
        default: throw ModelError("reflection is only supported for oscillator and regular models");
    }
}

double eval_q(const PotentialModel& model, double x) {
    if (!(x > model.a() && x < model.b())) throw DomainError("x = " + std::to_string(x) + " outside the open interval");
    const double q = model.q_raw(x);
    if (!std::isfinite(q)) throw SingularEval("q is singular at x = " + std::to_string(x));
    return q;
}

EndpointClass classify_endpoint(const PotentialModel& model, Side side) { return model.endpoint(side); }

namespace {

double oscillator_location(cplx z) {
    const double sb = std::max(8.0, 2.0 * std::sqrt(std::max(z.real(), 0.0)) + 4.0);
    if (oscillator_series_seed(z, sb)) return sb;
    for (double f : {1.5, 2.0, 3.0, 4.0}) {
        const double s = f * sb;
        if (s > 64.0) break;
        if (oscillator_series_seed(z, s)) return s;
    }
    return sb;
}

struct Frob {
    double d;
    cplx u, du_dd;       // derivative with respect to the distance d
    double c1, c2, l;    // branch weights for the tail integral
};

Frob frobenius(const EndpointClass& c, const PotentialModel::BC& bc, cplx z, double d) {
    const double l = c.coupling;
    const cplx a = (c.r0 - z) / (4.0 * l + 6.0);
    Frob f{d, 0.0, 0.0, 1.0, 0.0, l};
    const double p1 = std::pow(d, l + 1.0);
    cplx u = p1 * (1.0 + a * d * d);
    cplx du = (l + 1.0) * std::pow(d, l) + a * (l + 3.0) * std::pow(d, l + 2.0);
    if (c.tag == EndpointTag::NeedsBC && bc && bc->angle != 0.0) {
        const cplx b = (c.r0 - z) / (2.0 - 4.0 * l);
        const double th = bc->angle;
        const cplx u2 = std::pow(d, -l) * (1.0 + b * d * d);
        const cplx du2 = -l * std::pow(d, -l - 1.0) + b * (2.0 - l) * std::pow(d, 1.0 - l);
        u = std::cos(th) * u + std::sin(th) * u2;
        du = std::cos(th) * du + std::sin(th) * du2;
        f.c1 = std::cos(th);
        f.c2 = std::sin(th);
    }
    f.u = u;
    f.du_dd = du;
    return f;
}

}  // namespace

double seed_point(const PotentialModel& model, Side side, cplx z) {
    const EndpointClass c = model.endpoint(side);
    const bool left = side == Side::Left;
    switch (c.seed) {
        case SeedTemplate::Plain: return left ? model.a() : model.b();
        case SeedTemplate::Oscillator: {
            const double s = oscillator_location(z);
            return left ? -s : s;
        }
        case SeedTemplate::Frobenius: {
            const double d = 1e-6 * model.length_scale();
            return left ? model.a() + d : model.b() - d;
        }
        case SeedTemplate::Exponential: {
            const double re = std::sqrt(-z).real();
            return std::max(20.0, 40.0 / std::max(re, 1e-3));
        }
    }
    return 0.0;
}

ScaledValue asymptotic_seed(const PotentialModel& model, Side side, cplx z, double x0) {
    const EndpointClass c = model.endpoint(side);
    const bool left = side == Side::Left;
    switch (c.seed) {
        case SeedTemplate::Plain: {
            const double end = left ? model.a() : model.b();
            if (x0 != end) throw SeedRegion("regular endpoint seeds sit at the endpoint itself");
            double th = model.bc(side)->angle;
            if (!left && th == 0.0) th = pi;
            return ScaledValue(std::sin(th), std::cos(th));
        }
        case SeedTemplate::Oscillator: {
            const double s = left ? -x0 : x0;
            if (s < 4.0) throw SeedRegion("oscillator seed needs |x0| >= 4 on the " + std::string(left ? "left" : "right"));
            if (std::abs(s * s - z) < 2.0 * s) throw SeedRegion("oscillator seed too close to the turning point");
            const LogSeed ls = oscillator_seed(z, s);
            return ScaledValue::from_log(ls.logu, left ? -ls.dlog : ls.dlog);
        }
        case SeedTemplate::Frobenius: {
            const double d = left ? x0 - model.a() : model.b() - x0;
            const double L = model.length_scale();
            if (!(d > 0.0) || d > 0.01 * L || d * d * (std::abs(z) + std::abs(c.r0) + 1.0) > 0.1)
                throw SeedRegion("Frobenius seed must sit close to the singular endpoint");
            const Frob f = frobenius(c, model.bc(side), z, d);
            ScaledValue s(f.u, left ? f.du_dd : -f.du_dd);
            s.renormalize();
            return s;
        }
        case SeedTemplate::Exponential: {
            if (z.imag() == 0.0 && z.real() >= 0.0) throw SeedRegion("no decaying solution at +inf for z >= 0");
            const cplx k = std::sqrt(-z);
            return ScaledValue::from_log(-k * x0, -k);
        }
    }
    return {};
}

cplx seed_tail_integral(const PotentialModel& model, Side side, cplx z, double x0) {
    const EndpointClass c = model.endpoint(side);
    const bool left = side == Side::Left;
    const ScaledValue s = asymptotic_seed(model, side, z, x0);
    switch (c.seed) {
        case SeedTemplate::Plain: return 0.0;
        case SeedTemplate::Oscillator:
        case SeedTemplate::Exponential: {
            const cplx decay = left ? s.du / s.u : -s.du / s.u;
            return s.u * s.u / (2.0 * decay);
        }
        case SeedTemplate::Frobenius: {
            const double d = left ? x0 - model.a() : model.b() - x0;
            const Frob f = frobenius(c, model.bc(side), z, d);
            const double l = f.l;
            double I = f.c1 * f.c1 * std::pow(d, 2 * l + 3) / (2 * l + 3);
            if (f.c2 != 0.0) I += f.c1 * f.c2 * d * d + f.c2 * f.c2 * std::pow(d, 1 - 2 * l) / (1 - 2 * l);
            const double u0 = f.c1 * std::pow(d, l + 1) + f.c2 * std::pow(d, -l);
            return s.u * s.u * (I / (u0 * u0));
        }
    }
    return 0.0;
}

}  // namespace specweyl

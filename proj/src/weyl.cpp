#include "specweyl/weyl.hpp"

#include <cmath>
#include <sstream>

#include "specweyl/errors.hpp"

namespace specweyl {

namespace {

void check_interior(const Frame& f, double x, const char* what) {
    if (!(x > f.model().a() && x < f.model().b()))
        throw DomainError(std::string(what) + ": x outside the open interval");
}

ScaledValue shoot_to(const Frame& f, cplx z, Side side, double x) {
    return shoot(f.model(), z, Boundary::endpoint(f.model(), side), side, x, f.tol(), false, false).v;
}

ScaledValue from_base(const Frame& f, cplx z, double x, ScaledValue init) {
    if (x == f.c()) return init;
    PropagateOptions opt;
    opt.tol = f.tol();
    return propagate(f.model(), z, f.c(), x, init, opt).end;
}

void check_phi(const ScaledValue& p) {
    if (std::abs(p.u) < 1e-12 * p.magnitude())
        throw DirichletCollision("phi(z,c) vanishes: z is a Dirichlet eigenvalue of (a,c)");
}

}  // namespace

cplx ScaledComplex::value() const { return mantissa * std::exp(exponent); }

Frame::Frame(const PotentialModel& model, double c, double tol) : model_(model), c_(c), tol_(tol) {
    if (!(c > model.a() && c < model.b())) throw DomainError("base point outside the open interval");
}

Frame::BaseData Frame::at_base(cplx z) const {
    const auto key = std::make_pair(z.real(), z.imag());
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    BaseData d{shoot_to(*this, z, Side::Left, c_), shoot_to(*this, z, Side::Right, c_)};
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_.size() > 100000) cache_.clear();
    cache_.emplace(key, d);
    return d;
}

std::string Frame::gauge() const {
    auto seed = [](SeedTemplate s) {
        switch (s) {
            case SeedTemplate::Plain: return "plain";
            case SeedTemplate::Frobenius: return "frobenius";
            case SeedTemplate::Oscillator: return "oscillator";
            case SeedTemplate::Exponential: return "exponential";
        }
        return "?";
    };
    std::ostringstream os;
    os.precision(17);
    os << "kind=" << to_string(model_.kind()) << ";c=" << c_ << ";left=" << seed(model_.endpoint(Side::Left).seed)
       << ";right=" << seed(model_.endpoint(Side::Right).seed);
    for (Side s : {Side::Left, Side::Right})
        if (model_.bc(s)) os << (s == Side::Left ? ";bc_a=" : ";bc_b=") << model_.bc(s)->angle;
    return os.str();
}

ScaledValue phi(const Frame& f, cplx z, double x) {
    check_interior(f, x, "phi");
    if (x == f.c()) return f.at_base(z).phi;
    return shoot_to(f, z, Side::Left, x);
}

ScaledValue chi(const Frame& f, cplx z, double x) {
    check_interior(f, x, "chi");
    if (x == f.c()) return f.at_base(z).chi;
    return shoot_to(f, z, Side::Right, x);
}

ScaledValue theta(const Frame& f, cplx z, double x) {
    check_interior(f, x, "theta");
    const ScaledValue p = f.at_base(z).phi;
    check_phi(p);
    return from_base(f, z, x, ScaledValue(0.0, -1.0 / p.u, -p.exponent));
}

ScaledValue base_c(const Frame& f, cplx z, double x) {
    check_interior(f, x, "c");
    return from_base(f, z, x, ScaledValue(1.0, 0.0));
}

ScaledValue base_s(const Frame& f, cplx z, double x) {
    check_interior(f, x, "s");
    return from_base(f, z, x, ScaledValue(0.0, 1.0));
}

cplx m_half_line(const Frame& f, cplx z, Side side) {
    const auto d = f.at_base(z);
    if (side == Side::Left) {
        check_phi(d.phi);
        return -d.phi.du / d.phi.u;
    }
    if (std::abs(d.chi.u) < 1e-12 * d.chi.magnitude())
        throw DirichletCollision("chi(z,c) vanishes: z is a Dirichlet eigenvalue of (c,b)");
    return d.chi.du / d.chi.u;
}

ScaledWronskian weyl_wronskian(const Frame& f, cplx z) {
    const auto d = f.at_base(z);
    return wronskian(d.phi, d.chi);
}

ScaledComplex singular_M_scaled(const Frame& f, cplx z) {
    const auto d = f.at_base(z);
    check_phi(d.phi);
    const ScaledWronskian w = wronskian(d.phi, d.chi);
    if (std::abs(w.w) < 1e-12 * d.phi.magnitude() * d.chi.magnitude())
        throw EigenvalueCollision("W(phi,chi) vanishes: z is an eigenvalue");
    // exponents: chi.e - phi.e - (phi.e + chi.e)
    return {-d.chi.u / (d.phi.u * w.w), -2.0 * d.phi.exponent};
}

cplx singular_M(const Frame& f, cplx z) { return singular_M_scaled(f, z).value(); }

ScaledValue psi(const Frame& f, cplx z, double x) {
    check_interior(f, x, "psi");
    const auto d = f.at_base(z);
    check_phi(d.phi);
    const ScaledWronskian w = wronskian(d.phi, d.chi);
    if (std::abs(w.w) < 1e-12 * d.phi.magnitude() * d.chi.magnitude())
        throw EigenvalueCollision("W(phi,chi) vanishes: z is an eigenvalue");
    const ScaledValue ch = x == f.c() ? d.chi : shoot_to(f, z, Side::Right, x);
    // W(chi,phi) = -W(phi,chi)
    ScaledValue r = ch.scaled(-1.0 / w.w);
    r.exponent -= w.exponent;
    return r;
}

}  // namespace specweyl

#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specweyl/common.hpp"
#include "specweyl/scaled.hpp"

namespace specweyl {

enum class ModelKind { Regular, Harmonic, PerturbedHarmonic, Bessel, PoschlTeller, Tabulated };

std::string to_string(ModelKind k);

// One additive perturbation term of q-tilde.
struct Term {
    enum class Type { Gaussian, Rational, Bump };
    Type type = Type::Gaussian;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    // gaussian a exp(-((x-c)/w)^2), rational a/(1+((x-c)/w)^2),
    // bump a exp(1 - 1/(1-((x-c)/w)^2)) on |x-c|<w, zero outside
    double operator()(double x) const;
};

// Boundary condition (u, u') proportional to (sin angle, cos angle); angle in [0, pi).
// At a Bessel-type endpoint the angle mixes the Frobenius branches instead (0 = Friedrichs).
struct BoundaryCondition {
    double angle = 0.0;
    static BoundaryCondition dirichlet() { return {0.0}; }
    static BoundaryCondition neumann() { return {pi / 2}; }
};

enum class EndpointTag { NeedsBC, DecaySelect };
enum class SeedTemplate { Plain, Frobenius, Oscillator, Exponential };

struct EndpointClass {
    EndpointTag tag = EndpointTag::NeedsBC;
    SeedTemplate seed = SeedTemplate::Plain;
    double coupling = 0.0;  // Frobenius: q ~ l(l+1)/d^2, leading exponent l+1
    double r0 = 0.0;        // Frobenius: regular part of q at the endpoint
};

class PotentialModel {
public:
    using BC = std::optional<BoundaryCondition>;

    static PotentialModel regular(double a, double b, std::vector<Term> terms = {},
                                  BoundaryCondition bc_a = BoundaryCondition::dirichlet(),
                                  BoundaryCondition bc_b = BoundaryCondition::dirichlet());
    static PotentialModel harmonic();
    static PotentialModel perturbed_harmonic(std::vector<Term> terms);
    // Bessel on (0,b): l(l+1)/x^2 + k(k+1)/(b-x)^2 + q-tilde. b may be +inf only with k = 0.
    static PotentialModel bessel(double l, double k = 0.0, double b = 1.0,
                                 std::vector<Term> terms = {}, BC bc_a = {}, BC bc_b = {});
    // pi^2 nu(nu+1)/sin^2(pi x) on (0,1)
    static PotentialModel poschl_teller(double nu, std::vector<Term> terms = {}, BC bc_a = {},
                                        BC bc_b = {});
    // Piecewise-cubic q on a strictly increasing grid; non-finite samples mark poles.
    static PotentialModel tabulated(std::vector<double> x, std::vector<double> q,
                                    BoundaryCondition bc_a = BoundaryCondition::dirichlet(),
                                    BoundaryCondition bc_b = BoundaryCondition::dirichlet());

    ModelKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double length_scale() const;
    const BC& bc(Side s) const { return s == Side::Left ? bc_a_ : bc_b_; }
    const std::vector<Term>& terms() const { return terms_; }
    double l() const { return l_; }
    double k() const { return k_; }
    double nu() const { return nu_; }
    double condho_bound() const { return condho_; }

    // q(x) without the open-interval check (hot path of the integrator).
    double q_raw(double x) const;
    double perturbation(double x) const;

    EndpointClass endpoint(Side s) const { return s == Side::Left ? left_ : right_; }

    // q(-x) for the oscillator family; throws ModelError otherwise.
    PotentialModel reflected() const;

private:
    PotentialModel() = default;
    void finalize(BC bc_a, BC bc_b);
    EndpointClass classify(Side s) const;

    ModelKind kind_ = ModelKind::Regular;
    double a_ = 0.0, b_ = 1.0;
    double l_ = 0.0, k_ = 0.0, nu_ = 0.0;
    std::vector<Term> terms_;
    BC bc_a_, bc_b_;
    EndpointClass left_, right_;
    double condho_ = 0.0;

    struct Table;
    std::shared_ptr<const Table> table_;
};

// q(x) for x strictly inside (a,b).
double eval_q(const PotentialModel& model, double x);
EndpointClass classify_endpoint(const PotentialModel& model, Side side);

// Seed data at x0 encoding the distinguished solution (DecaySelect) or the boundary condition.
ScaledValue asymptotic_seed(const PotentialModel& model, Side side, cplx z, double x0);

// Default seed / truncation point toward an endpoint for spectral parameter z.
double seed_point(const PotentialModel& model, Side side, cplx z);

// Integral of u^2 between the endpoint and the seed point, from the seed template.
cplx seed_tail_integral(const PotentialModel& model, Side side, cplx z, double x0);

} // namespace specweyl

#include <cmath>
#include <limits>

#include "doctest.h"
#include "frozen_values.hpp"
#include "specweyl/errors.hpp"
#include "specweyl/spectrum.hpp"
#include "specweyl/verify.hpp"

using namespace specweyl;

TEST_CASE("diagnostic slopes and verdicts") {
    const std::vector<double> r{1e2, 1e3, 1e4, 1e5};
    std::vector<double> flat, grow, decay, zero(4, -std::numeric_limits<double>::infinity());
    for (double x : r) {
        flat.push_back(0.3);
        grow.push_back(0.5 * std::log(x));
        decay.push_back(-std::log(x));
    }
    CHECK(make_diagnostic(r, flat).verdict == Verdict::Bounded);
    CHECK(make_diagnostic(r, grow).slope == doctest::Approx(0.5));
    CHECK(make_diagnostic(r, grow).verdict == Verdict::Diverging);
    CHECK(make_diagnostic(r, decay).verdict == Verdict::Bounded);
    const auto z = make_diagnostic(r, zero);
    CHECK(z.slope == 0.0);
    CHECK(z.verdict == Verdict::Bounded);
    CHECK(z.values()[0] == 0.0);
    std::vector<double> mid;
    for (double x : r) mid.push_back(0.1 * std::log(x));
    CHECK(make_diagnostic(r, mid).verdict == Verdict::Inconclusive);
}

TEST_CASE("ray validation") {
    RaySpec ray;
    CHECK_NOTHROW(ray.validate());
    ray.angle = 0.0;
    CHECK_THROWS_AS(ray.validate(), DomainError);
    ray.angle = pi;
    ray.radii = {10.0, 5.0};
    CHECK_THROWS_AS(ray.validate(), DomainError);
    ray.radii = {4.0};
    CHECK(std::abs(ray.point(4.0) - cplx(-4.0, 0.0)) < 1e-12);
}

TEST_CASE("ray laws on the imaginary axis") {
    const RaySpec ray;
    const Frame h(PotentialModel::harmonic(), 0.0);
    const Frame r(PotentialModel::regular(0.0, 1.0), 0.5);
    CHECK(ray_phi_asymptotics(h, ray, 0.5, 0.2).verdict == Verdict::Bounded);
    CHECK(ray_phi_asymptotics(r, ray, 0.6, 0.3).verdict == Verdict::Bounded);
    CHECK(ray_M_asymptotics(h, ray, -0.5).verdict == Verdict::Bounded);
    CHECK(ray_M_asymptotics(r, ray, 0.3).verdict == Verdict::Bounded);
    CHECK(ray_psi_asymptotics(h, ray, 0.5).verdict == Verdict::Bounded);
    CHECK(ray_psi_asymptotics(r, ray, 0.5).verdict == Verdict::Bounded);
}

TEST_CASE("Weber high-energy law for the perturbed oscillator") {
    RaySpec ray;
    ray.radii = {1e2, 1e3, 1e4};
    const Frame f(PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 0.0, 1.0}}), 0.0);
    const auto d = ray_weber_asymptotics(f, ray, 0.0);
    CHECK(d.verdict == Verdict::Bounded);
    for (double v : d.values()) CHECK(v < 1.0);
}

TEST_CASE("Borg-Marchenko diagnostic") {
    const RaySpec ray;
    const auto h = PotentialModel::harmonic();
    const Frame f0(h, -3.0);
    const auto same = bm_diagnostic(f0, Frame(h, -3.0), 1.0, ray);
    for (double v : same.values()) CHECK(v == 0.0);
    const auto after = bm_diagnostic(f0, Frame(PotentialModel::perturbed_harmonic({Term{Term::Type::Bump, 1.0, 3.0, 1.0}}), -3.0), 1.0, ray);
    CHECK(after.verdict == Verdict::Bounded);
    const auto before = bm_diagnostic(f0, Frame(PotentialModel::perturbed_harmonic({Term{Term::Type::Bump, 1.0, -0.5, 1.0}}), -3.0), 1.0, ray);
    CHECK(before.verdict == Verdict::Diverging);
    CHECK_THROWS_AS(bm_diagnostic(f0, Frame(h, -2.0), 1.0, ray), FrameMismatch);
}

TEST_CASE("Hochstadt-Lieberman condition") {
    const RaySpec ray;
    const auto h = PotentialModel::harmonic();
    const auto at0 = hl_condition(Frame(h, 0.0), 0.0, ray);
    for (double v : at0.values()) CHECK(std::abs(v - 1.0) < 1e-2);
    const auto at05 = hl_condition(Frame(h, 0.5), 0.5, ray);
    const auto at1 = hl_condition(Frame(h, 1.0), 1.0, ray);
    for (std::size_t i = 0; i < ray.radii.size(); ++i) {
        CHECK(at05.log_values[i] < at0.log_values[i]);
        CHECK(at1.log_values[i] < at05.log_values[i]);
    }
    CHECK(hl_condition(Frame(h, -1.0), -1.0, ray).verdict == Verdict::Diverging);
}

TEST_CASE("Stieltjes inversion") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto one = stieltjes_invert(f, 0.0, 2.0);
    CHECK(one.mass == doctest::Approx(oracle::inv_sqrt_pi).epsilon(1e-3));
    const auto none = stieltjes_invert(f, 1.5, 2.5);
    CHECK(std::abs(none.mass) < 1e-3 * oracle::inv_sqrt_pi);
    // lambda = 3 is a node of phi at c = 0
    CHECK_THROWS_AS(stieltjes_invert(f, 2.0, 4.0), GaugePole);
    CHECK_THROWS_AS(stieltjes_invert(f, 0.0, 1.0), EigenvalueCollision);
}

TEST_CASE("Herglotz property of the reweighted measure") {
    const auto mu = spectral_measure(Frame(PotentialModel::harmonic(), 0.0), 20);
    const auto r = herglotz_check(mu, {cplx(0.0, 1.0), cplx(10.0, 0.1), cplx(-50.0, 2.0), cplx(500.0, 1e-3)});
    CHECK(r.min_im > 0.0);
}

TEST_CASE("isospectral comparison") {
    const auto h = PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 1.0, 1.0}});
    const auto same = isospectral_compare(Frame(h, 0.0), Frame(h, 0.0), 5);
    CHECK(same.equal);
    // the mirror image has the same eigenvalues but exchanges the two norming sequences
    const auto mirror = isospectral_compare(Frame(h, 0.0), Frame(h.reflected(), 0.0), 5);
    for (double d : mirror.diff) CHECK(std::abs(d) < 1e-7);
    CHECK_FALSE(mirror.equal);
    for (double c : mirror.cross_ratio) CHECK(c == doctest::Approx(1.0).epsilon(1e-5));
}

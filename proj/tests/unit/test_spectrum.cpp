#include <cmath>

#include "doctest.h"
#include "frozen_values.hpp"
#include "specweyl/errors.hpp"
#include "specweyl/spectrum.hpp"

using namespace specweyl;

TEST_CASE("harmonic eigenvalues") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto e = eigenvalues(f, 12);
    for (int n = 0; n < 12; ++n) CHECK(std::abs(e[n] - (2.0 * n + 1.0)) < 1e-7);
    const auto tail = eigenvalues(f, 3, 40);
    for (int n = 0; n < 3; ++n) CHECK(std::abs(tail[n] - (2.0 * (n + 40) + 1.0)) < 1e-6);
}

TEST_CASE("eigenvalues of the free interval, Bessel and Poschl-Teller") {
    const auto r = eigenvalues(Frame(PotentialModel::regular(0.0, 1.0), 0.5), 6);
    for (int n = 0; n < 6; ++n) CHECK(r[n] == doctest::Approx(std::pow((n + 1) * pi, 2)).epsilon(1e-9));

    const auto b = eigenvalues(Frame(PotentialModel::bessel(1.0), 0.5), 5);
    for (int n = 0; n < 5; ++n) CHECK(b[n] == doctest::Approx(oracle::bessel_l1[n]).epsilon(1e-9));

    const auto p = eigenvalues(Frame(PotentialModel::poschl_teller(1.0), 0.5), 5);
    for (int n = 0; n < 5; ++n) CHECK(p[n] == doctest::Approx(pi * pi * (n + 2) * (n + 2)).epsilon(1e-9));
}

TEST_CASE("perturbed oscillator eigenvalues") {
    const Frame f(PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 0.0, 1.0}}), 0.0);
    const auto e = eigenvalues(f, 10);
    for (int n = 0; n < 10; ++n) CHECK(std::abs(e[n] - oracle::perturbed_gauss[n]) < 1e-8);
}

TEST_CASE("eigenvalues do not depend on the frame base point") {
    const auto m = PotentialModel::perturbed_harmonic({Term{Term::Type::Rational, -2.0, 0.7, 0.5}});
    const auto a = eigenvalues(Frame(m, 0.0), 6);
    const auto b = eigenvalues(Frame(m, 1.3), 6);
    for (int n = 0; n < 6; ++n) CHECK(std::abs(a[n] - b[n]) < 1e-8);
}

TEST_CASE("constant shift moves the spectrum") {
    const auto t0 = PotentialModel::tabulated({0, 0.25, 0.5, 0.75, 1.0}, {0, 2, 4, 2, 0});
    const auto t1 = PotentialModel::tabulated({0, 0.25, 0.5, 0.75, 1.0}, {3, 5, 7, 5, 3});
    const auto a = eigenvalues(Frame(t0, 0.5), 4), b = eigenvalues(Frame(t1, 0.5), 4);
    for (int n = 0; n < 4; ++n) CHECK(b[n] - a[n] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("harmonic norming constants") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto e = eigenvalues(f, 6);
    const auto g = norming_constants(f, e, Side::Left);
    for (int n = 0; n < 6; ++n) CHECK(g[n] == doctest::Approx(oracle::harmonic_gamma2[n]).epsilon(1e-6));
}

TEST_CASE("free interval norming constants") {
    const Frame f(PotentialModel::regular(0.0, 2.0), 1.0);
    const auto e = eigenvalues(f, 5);
    const auto g = norming_constants(f, e, Side::Left);
    // phi(c)=... gauge: phi = sin(k x)/sin(k c) is not used; phi is seeded with phi'(0)=1
    for (int n = 0; n < 5; ++n) CHECK(g[n] == doctest::Approx(1.0 / e[n]).epsilon(1e-7));
}

TEST_CASE("Dirichlet and Neumann sub-spectra interlace") {
    for (const auto& m : {PotentialModel::harmonic(), PotentialModel::bessel(1.0), PotentialModel::regular(0.0, 2.0)}) {
        const double c = std::isinf(m.a()) ? 0.0 : 0.5 * (m.a() + m.b());
        const Frame f(m, c);
        const auto mu = sub_spectrum(f, c, Side::Left, SubBC::Dirichlet, 20);
        const auto nu = sub_spectrum(f, c, Side::Left, SubBC::Neumann, 21);
        for (int n = 0; n < 20; ++n) {
            CHECK(nu[n] < mu[n]);
            CHECK(mu[n] < nu[n + 1]);
        }
    }
}

TEST_CASE("spectral measure and Parseval") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto mu = spectral_measure(f, 30);
    REQUIRE(mu.atoms.size() == 30);
    CHECK(mu.atoms[0].weight == doctest::Approx(oracle::inv_sqrt_pi).epsilon(1e-6));
    std::vector<double> x(2401), v(2401);
    for (int i = 0; i < 2401; ++i) {
        x[i] = -12.0 + 24.0 * i / 2400.0;
        v[i] = std::exp(-x[i] * x[i]);
    }
    const auto r = parseval(f, x, v, mu);
    CHECK(r.defect < 1e-6);
    CHECK(r.norm2 == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-8));

    std::vector<double> bad(10, 0.0);
    CHECK_THROWS_AS(expand(f, x, bad, mu), GridMismatch);
    const Frame other(PotentialModel::harmonic(), 0.5);
    CHECK_THROWS_AS(expand(other, x, v, mu), GridMismatch);
}

TEST_CASE("eigenfunctions are orthogonal") {
    const Frame f(PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 0.5, 1.0}}), 0.0);
    const auto e = eigenvalues(f, 4);
    std::vector<double> x(3001);
    for (int i = 0; i < 3001; ++i) x[i] = -10.0 + 20.0 * i / 3000.0;
    std::vector<std::vector<double>> u;
    for (double l : e) u.push_back(eigenfunction_on_grid(f, l, x));
    auto dot = [&](const auto& a, const auto& b) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (a[i] * b[i] + a[i + 1] * b[i + 1]);
        return s;
    };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) CHECK(std::abs(dot(u[i], u[j])) < 1e-7 * std::sqrt(dot(u[i], u[i]) * dot(u[j], u[j])));
}

TEST_CASE("convergence exponent and genus") {
    const auto h = exponent_report(eigenvalues(Frame(PotentialModel::harmonic(), 0.0), 60));
    CHECK(h.s == doctest::Approx(1.0).epsilon(0.05));
    CHECK(h.genus == 1);
    CHECK_FALSE(h.below_floor);
    const auto r = exponent_report(eigenvalues(Frame(PotentialModel::regular(0.0, 1.0), 0.5), 60));
    CHECK(r.s == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.genus == 0);
    CHECK_FALSE(r.below_floor);
    std::vector<double> fast;
    for (int n = 1; n <= 60; ++n) fast.push_back(std::pow(n, 3.0));
    CHECK(exponent_report(fast).below_floor);
}

TEST_CASE("norming pairs satisfy gamma_+^2 gamma_-^2 = Wdot^2") {
    const Frame f(PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 0.0, 1.0}}), 0.0);
    const auto p = norming_pairs(f, eigenvalues(f, 6));
    for (std::size_t n = 0; n < p.size(); ++n) {
        CHECK(p[n].gamma_plus2 * p[n].gamma_minus2 == doctest::Approx(p[n].wdot * p[n].wdot).epsilon(1e-6));
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(sign * std::exp(-p[n].nu) * p[n].wdot == doctest::Approx(p[n].gamma_minus2).epsilon(1e-6));
        CHECK(sign * std::exp(p[n].nu) * p[n].wdot == doctest::Approx(p[n].gamma_plus2).epsilon(1e-6));
    }
    CHECK_THROWS_AS(wronskian_derivative(f, 2.5), NotAnEigenvalue);
}

TEST_CASE("repeated solves are bitwise identical") {
    const Frame f(PotentialModel::bessel(1.0), 0.5);
    CHECK(eigenvalues(f, 8) == eigenvalues(f, 8));
}

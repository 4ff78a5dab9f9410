#include <cmath>

#include "doctest.h"
#include "frozen_values.hpp"
#include "specweyl/errors.hpp"
#include "specweyl/spectrum.hpp"
#include "specweyl/weyl.hpp"

using namespace specweyl;

namespace {
cplx to_c(oracle::C c) { return {c.re, c.im}; }
}

TEST_CASE("harmonic m_+ at the origin") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    for (const auto& t : oracle::harmonic_m_plus) {
        const cplx want = to_c(t.value);
        CHECK(std::abs(m_half_line(f, to_c(t.z), Side::Right) - want) < 1e-8 * std::abs(want));
    }
}

TEST_CASE("free m_- with a Dirichlet end") {
    const Frame f(PotentialModel::regular(0.0, 2.0), 1.0);
    for (const auto& t : oracle::free_m_minus_c1) {
        const cplx want = to_c(t.value);
        CHECK(std::abs(m_half_line(f, to_c(t.z), Side::Left) - want) < 1e-9 * std::abs(want));
    }
}

TEST_CASE("frame normalization W(theta, phi) = 1") {
    const Frame f(PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 0.0, 1.0}}), 0.3);
    for (cplx z : {cplx(2.0, 1.0), cplx(-5.0, 0.2), cplx(30.0, 3.0)}) {
        for (double x : {-1.0, 0.3, 1.7}) {
            const auto w = wronskian(theta(f, z, x), phi(f, z, x));
            CHECK(std::abs(w.value() - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("psi is the right Weyl solution") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const cplx z(4.0, 2.0);
    const cplx ratio0 = psi(f, z, 0.0).value() / chi(f, z, 0.0).value();
    for (double x : {-0.5, 0.7, 2.0}) {
        const cplx p = psi(f, z, x).value();
        const cplx direct = theta(f, z, x).value() + singular_M(f, z) * phi(f, z, x).value();
        CHECK(std::abs(p - direct) < 1e-8 * std::abs(p));
        CHECK(std::abs(p / chi(f, z, x).value() - ratio0) < 1e-8 * std::abs(ratio0));
    }
}

TEST_CASE("M is real on the real axis and has the measure's residues") {
    for (const auto& m : {PotentialModel::harmonic(), PotentialModel::regular(0.0, 1.0), PotentialModel::bessel(1.0),
                          PotentialModel::poschl_teller(1.0)}) {
        const Frame f(m, std::isinf(m.a()) ? 0.3 : 0.4 * m.a() + 0.6 * m.b());
        for (cplx z : {cplx(0.5, 0.1), cplx(-20.0, 3.0), cplx(100.0, 1.0)}) {
            const cplx a = singular_M(f, z), b = singular_M(f, std::conj(z));
            CHECK(std::abs(a - std::conj(b)) < 1e-9 * std::abs(a));
        }
        const auto mu = spectral_measure(f, 2);
        for (const auto& atom : mu.atoms) {
            const cplx z(atom.lambda, 1e-5 * (1.0 + atom.lambda));
            const cplx res = (atom.lambda - z) * singular_M(f, z);
            CHECK(std::abs(res - atom.weight) < 1e-3 * atom.weight);
        }
    }
}

TEST_CASE("scaled M agrees with M and survives large |z|") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const cplx z(-3.0, 2.0);
    CHECK(std::abs(singular_M_scaled(f, z).value() - singular_M(f, z)) < 1e-12 * std::abs(singular_M(f, z)));
    const auto big = singular_M_scaled(f, cplx(0.0, 1e5));
    CHECK(std::isfinite(big.exponent));
    CHECK(std::isfinite(std::abs(big.mantissa)));
}

TEST_CASE("M near eigenvalues and Dirichlet nodes") {
    const Frame f(PotentialModel::harmonic(), 0.0);
    CHECK(std::abs(singular_M(f, cplx(5.0, 0.0))) > 1e8);
    // odd eigenfunctions vanish at the base point
    CHECK_THROWS_AS(singular_M(f, cplx(3.0, 0.0)), DirichletCollision);
    CHECK(std::isfinite(std::abs(singular_M(f, cplx(2.0, 0.0)))));
}

TEST_CASE("frame cache returns identical values") {
    const Frame f(PotentialModel::bessel(1.0), 0.4);
    const cplx z(7.0, 0.3);
    const cplx a = singular_M(f, z);
    const cplx b = singular_M(f, z);
    CHECK(a == b);
    CHECK(f.gauge().find("c=0.4") != std::string::npos);
}

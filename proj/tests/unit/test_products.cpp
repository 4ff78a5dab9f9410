#include <cmath>

#include "doctest.h"
#include "frozen_values.hpp"
#include "specweyl/errors.hpp"
#include "specweyl/products.hpp"
#include "specweyl/spectrum.hpp"

using namespace specweyl;

namespace {
const Frame& free_frame() {
    static const Frame f(PotentialModel::regular(0.0, 2.0), 1.0);
    return f;
}
const ProductRep& free_rep() {
    static const ProductRep rep = make_product_rep(free_frame(), 100);
    return rep;
}
}  // namespace

TEST_CASE("sub-spectra of the free half interval") {
    const auto& rep = free_rep();
    REQUIRE(rep.mu.size() == 100);
    REQUIRE(rep.nu.size() == 100);
    for (int n = 0; n < 5; ++n) {
        CHECK(rep.mu[n] == doctest::Approx(std::pow((n + 1) * pi, 2)).epsilon(1e-9));
        CHECK(rep.nu[n] == doctest::Approx(std::pow((n + 0.5) * pi, 2)).epsilon(1e-9));
    }
    CHECK(rep.genus == 0);
    CHECK_NOTHROW(check_interlacing(rep));
}

TEST_CASE("Krein product reproduces m_-") {
    const auto& rep = free_rep();
    CHECK(rep.C == doctest::Approx(-1.0).epsilon(1e-6));
    const cplx z(0.0, 1.0);
    const cplx direct = m_half_line(free_frame(), z, Side::Left);
    double prev = 1.0;
    for (int N : {10, 25, 50, 100}) {
        const double err = std::abs(krein_m_minus(rep, z, N) - direct) / std::abs(direct);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 2e-5);
    CHECK(krein_m_minus(rep, cplx(-1.0, 0.0)).real() == doctest::Approx(-oracle::coth1).epsilon(1e-5));
    for (const auto& t : oracle::free_m_minus_c1) {
        const cplx want{t.value.re, t.value.im};
        CHECK(std::abs(krein_m_minus(rep, {t.z.re, t.z.im}) - want) < 1e-3 * std::abs(want));
    }
}

TEST_CASE("Krein constant fit is real") {
    const auto fit = fit_krein_constant(free_rep(), free_frame(), cplx(0.0, 1.0));
    CHECK(fit.C == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(fit.imag_residual < 1e-4);
}

TEST_CASE("product poles") {
    CHECK_THROWS_AS(krein_m_minus(free_rep(), cplx(free_rep().mu[0], 0.0)), PoleHit);
}

TEST_CASE("interlacing violations are reported") {
    ProductRep bad = free_rep();
    std::swap(bad.mu[3], bad.nu[3]);
    CHECK_THROWS_AS(check_interlacing(bad), DomainError);
}

TEST_CASE("h polynomial of the free problem") {
    const auto h = h_polynomial(free_rep());
    REQUIRE(!h.coeffs.empty());
    // C = -1: log C = i pi; genus 0 leaves no further coefficients
    CHECK(std::abs(h.coeffs[0] - cplx(0.0, pi)) < 1e-6);
}

TEST_CASE("constructed phi matches direct phi up to scale") {
    const auto& f = free_frame();
    for (cplx z : {cplx(0.0, 1.0), cplx(-4.0, 0.5), cplx(15.0, 2.0), cplx(-100.0, 10.0)}) {
        const auto a = construct_phi(free_rep(), f, z, f.c());
        const auto b = phi(f, z, f.c());
        const double w = std::abs(wronskian(a, b).w);
        CHECK(w < 1e-3 * a.magnitude() * b.magnitude());
        // the Wronskian of two solutions does not depend on x
        for (double x : {0.4, 1.6}) {
            const auto wx = wronskian(construct_phi(free_rep(), f, z, x), phi(f, z, x));
            const auto wc = wronskian(a, b);
            CHECK(std::abs(wx.value() - wc.value()) < 1e-6 * a.magnitude() * b.magnitude() * std::exp(wc.exponent));
        }
    }
    // equals alpha at the base point
    const cplx z(2.0, 1.0);
    const cplx a = construct_phi(free_rep(), f, z, f.c()).value();
    CHECK(std::abs(a - std::exp(log_alpha(free_rep(), z))) < 1e-10 * std::abs(a));
}

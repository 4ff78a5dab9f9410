#include "specweyl/products.hpp"

#include <algorithm>
#include <cmath>

#include "specweyl/errors.hpp"
#include "specweyl/spectrum.hpp"

namespace specweyl {

namespace {

int terms(const ProductRep& rep, int N) {
    const int avail = static_cast<int>(std::min(rep.mu.size(), rep.nu.size()));
    if (N < 0) N = rep.N;
    if (N > avail) throw DomainError("product truncation exceeds the stored eigenvalues");
    return N;
}

void check_pole(const ProductRep& rep, cplx z, int N) {
    for (int n = 0; n < N; ++n)
        if (std::abs(z - rep.mu[n]) < 1e-10 * (1.0 + std::abs(rep.mu[n])))
            throw PoleHit("z hits the Dirichlet eigenvalue " + std::to_string(rep.mu[n]));
}

}  // namespace

void check_interlacing(const ProductRep& rep) {
    const std::size_t n = std::min(rep.mu.size(), rep.nu.size());
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = rep.nu[i] < rep.mu[i] && (i + 1 >= rep.nu.size() || rep.mu[i] < rep.nu[i + 1]);
        if (!ok) throw DomainError("interlacing violated at index " + std::to_string(i));
    }
}

ProductRep make_product_rep(const Frame& f, int N, int genus) {
    if (N < 1) throw DomainError("product truncation must be >= 1");
    ProductRep rep;
    rep.N = N;
    rep.mu = sub_spectrum(f, f.c(), Side::Left, SubBC::Dirichlet, N);
    rep.nu = sub_spectrum(f, f.c(), Side::Left, SubBC::Neumann, N);
    check_interlacing(rep);
    rep.genus = genus >= 0 ? genus : exponent_report(rep.mu).genus;
    const double zref = std::min(0.0, rep.nu.front() - 1.0);
    rep.C = (m_half_line(f, zref, Side::Left) / std::exp(krein_log_product(rep, zref))).real();
    return rep;
}

cplx krein_log_product(const ProductRep& rep, cplx z, int N) {
    N = terms(rep, N);
    check_pole(rep, z, N);
    cplx s = 0.0;
    for (int n = 0; n < N; ++n) s += log_elementary_factor(0, rep.nu[n], z) - log_elementary_factor(0, rep.mu[n], z);
    return s;
}

cplx krein_m_minus(const ProductRep& rep, cplx z, int N) { return rep.C * std::exp(krein_log_product(rep, z, N)); }

KreinFit fit_krein_constant(const ProductRep& rep, const Frame& f, cplx z0) {
    if (z0.imag() == 0.0) throw DomainError("fit_krein_constant needs nonreal z0");
    const cplx r = m_half_line(f, z0, Side::Left) / std::exp(krein_log_product(rep, z0));
    return {r.real(), std::abs(r.imag()) / std::abs(r.real())};
}

HPolynomial h_polynomial(const ProductRep& rep) {
    check_interlacing(rep);
    const int N = terms(rep, -1);
    HPolynomial h;
    h.coeffs.push_back(std::log(cplx(rep.C, 0.0)));
    h.tail_bounds.push_back(0.0);
    for (int k = 1; k <= rep.genus; ++k) {
        auto partial = [&](int upto) {
            double s = 0.0;
            for (int n = 0; n < upto; ++n) s += std::pow(rep.mu[n], -k) - std::pow(rep.nu[n], -k);
            return s;
        };
        const double sN = partial(N);
        if (N >= 4) {
            // Cauchy test on dyadic partial sums
            const double d1 = std::abs(sN - partial(N / 2)), d0 = std::abs(partial(N / 2) - partial(N / 4));
            if (d1 > d0 && d1 > 1e-12 * (1.0 + std::abs(sN)))
                throw NonConvergent("inner sum of order " + std::to_string(k) + " fails the Cauchy test");
        }
        h.coeffs.push_back(sN / k);
        // interlacing telescopes the tail to at most |mu_N|^{-k}
        h.tail_bounds.push_back(std::pow(std::abs(rep.mu[N - 1]), -k) / k);
    }
    return h;
}

cplx log_alpha(const ProductRep& rep, cplx z) {
    const int N = terms(rep, -1);
    cplx s = 0.0;
    for (int n = 0; n < N; ++n) s += log_elementary_factor(rep.genus, rep.mu[n], z);
    return s;
}

ScaledValue construct_phi(const ProductRep& rep, const Frame& f, cplx z, double x) {
    const cplx la = log_alpha(rep, z);
    const cplx m = krein_m_minus(rep, z);
    const ScaledValue c = base_c(f, z, x), s = base_s(f, z, x);
    // alpha (c - m s), aligned to the larger exponent
    const double e = std::max(c.exponent, s.exponent);
    const cplx fc = std::exp(c.exponent - e), fs = std::exp(s.exponent - e);
    ScaledValue r(c.u * fc - m * s.u * fs, c.du * fc - m * s.du * fs, e);
    r = r.scaled(std::exp(cplx(0.0, la.imag())));
    r.exponent += la.real();
    r.renormalize();
    return r;
}

}  // namespace specweyl

#pragma once
#include <vector>

#include "specweyl/special.hpp"
#include "specweyl/weyl.hpp"

namespace specweyl {

// Dirichlet (mu_n) and Neumann (nu_{n-1}) eigenvalues of (a,c), truncated at N pairs.
struct ProductRep {
    std::vector<double> mu;
    std::vector<double> nu;
    int genus = 0;
    double C = 1.0;
    int N = 0;
};

// Sub-spectra at the frame's base point; genus from exponent_report(mu) when genus < 0
// (needs N >= 20). C defaults to m_-(z_ref)/P_N(z_ref) at the real point z_ref = min(0, nu_0 - 1).
ProductRep make_product_rep(const Frame& f, int N, int genus = -1);

// Checks interlacing nu_{n-1} < mu_n < nu_n; throws DomainError otherwise.
void check_interlacing(const ProductRep& rep);

// prod_{n<=N} E_0(nu_{n-1},z)/E_0(mu_n,z) without the constant, accumulated pairwise in logs.
cplx krein_log_product(const ProductRep& rep, cplx z, int N = -1);
// C times the product above.
cplx krein_m_minus(const ProductRep& rep, cplx z, int N = -1);

struct KreinFit {
    double C;
    double imag_residual;  // |Im| of the fitted ratio relative to |C|
};
KreinFit fit_krein_constant(const ProductRep& rep, const Frame& f, cplx z0);

// h(z) = log C + sum_k z^k/k sum_n (mu_n^{-k} - nu_{n-1}^{-k}); coefficient k at index k.
struct HPolynomial {
    std::vector<cplx> coeffs;
    std::vector<double> tail_bounds;  // bound on the truncated tail of each inner sum
};
HPolynomial h_polynomial(const ProductRep& rep);

// log alpha(z) = sum log E_p(mu_n, z)
cplx log_alpha(const ProductRep& rep, cplx z);

// alpha(z) c(z,x) + beta(z) s(z,x) with beta = -m^_-(z) alpha(z); equals alpha(z) at x = c.
ScaledValue construct_phi(const ProductRep& rep, const Frame& f, cplx z, double x);

} // namespace specweyl

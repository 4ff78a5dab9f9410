#pragma once
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "specweyl/model.hpp"
#include "specweyl/propagate.hpp"
#include "specweyl/scaled.hpp"

namespace specweyl {

// Fundamental system (theta, phi) at base point c with theta(c)=0, theta'(c)=-1/phi(c), so W(theta,phi)=1.
// phi is seeded at the left endpoint, chi (the right Weyl solution) at the right endpoint.
class Frame {
public:
    Frame(const PotentialModel& model, double c, double tol = 1e-12);

    const PotentialModel& model() const { return model_; }
    double c() const { return c_; }
    double tol() const { return tol_; }

    // Values of phi and chi at c, cached per z.
    struct BaseData {
        ScaledValue phi;
        ScaledValue chi;
    };
    BaseData at_base(cplx z) const;

    // "k=v;..." string describing the gauge (model, base point, seed templates)
    std::string gauge() const;

private:
    PotentialModel model_;
    double c_;
    double tol_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<double, double>, BaseData> cache_;
};

ScaledValue phi(const Frame& f, cplx z, double x);
ScaledValue chi(const Frame& f, cplx z, double x);
ScaledValue theta(const Frame& f, cplx z, double x);

// Base-point solutions: c(c)=1, c'(c)=0 and s(c)=0, s'(c)=1.
ScaledValue base_c(const Frame& f, cplx z, double x);
ScaledValue base_s(const Frame& f, cplx z, double x);

// m_-(z) = -phi'/phi (Left) and m_+(z) = chi'/chi (Right) at c.
cplx m_half_line(const Frame& f, cplx z, Side side);

// W(phi,chi) at c in scaled form.
ScaledWronskian weyl_wronskian(const Frame& f, cplx z);

// M(z) = -chi(c)/(phi(c) W(phi,chi)); log-scaled variant avoids overflow at large |z|.
cplx singular_M(const Frame& f, cplx z);
struct ScaledComplex {
    cplx mantissa;
    double exponent;
    cplx value() const;
};
ScaledComplex singular_M_scaled(const Frame& f, cplx z);

// psi = chi / W(chi,phi) = theta + M phi
ScaledValue psi(const Frame& f, cplx z, double x);

} // namespace specweyl

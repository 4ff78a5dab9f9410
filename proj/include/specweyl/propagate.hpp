#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "specweyl/model.hpp"
#include "specweyl/scaled.hpp"

namespace specweyl {

struct PropagateOptions {
    double tol = 1e-12;
    bool track_phase = false;      // real z and real data only
    bool accumulate_norm = false;  // integral of u^2 along the path
    bool record_steps = false;
    std::vector<double> outputs;   // ordered along the direction of travel
};

struct PropagateResult {
    ScaledValue end;
    double phase = 0.0;      // unwrapped Pruefer angle atan2(u,u') at the end
    cplx norm{0.0};          // integral from `from` to `to` of u^2, in units of e^{2 end.exponent}
    std::vector<double> grid;
    std::vector<ScaledValue> values;
    std::size_t steps = 0;
};

// Adaptive DOP853 on (u,u') for -u'' + q u = z u with renormalization after every step.
PropagateResult propagate(const PotentialModel& model, cplx z, double from, double to,
                          const ScaledValue& init, const PropagateOptions& opt = {},
                          double init_phase = 0.0);

struct Trajectory {
    std::vector<double> grid;
    std::vector<ScaledValue> values;
    cplx z;
    const PotentialModel* model = nullptr;
};

Trajectory integrate(const PotentialModel& model, cplx z, double from_x, double to_x,
                     const ScaledValue& init, double tol);

// Prüfer angle of the seed: in [0,pi) for Left seeds, (0,pi] for Right seeds.
double initial_phase(const ScaledValue& s, Side side);

// Either a model endpoint (angle empty: seeds come from the model) or an interior point with
// a boundary condition (u,u') ~ (sin angle, cos angle).
struct Boundary {
    double x = 0.0;
    std::optional<double> angle;
    static Boundary endpoint(const PotentialModel& m, Side s) { return {s == Side::Left ? m.a() : m.b(), {}}; }
    static Boundary interior(double x, double angle) { return {x, angle}; }
};

struct Shot {
    ScaledValue v;        // value at the target point
    double phase = 0.0;   // unwrapped Prüfer angle at the target point
    cplx norm{0.0};       // |integral| of u^2 from the endpoint (tail included), units e^{2 v.exponent}
    double start = 0.0;
};

// Propagates the boundary solution of `from` to x = to.
Shot shoot(const PotentialModel& model, cplx z, const Boundary& from, Side side, double to,
           double tol, bool phase, bool norm);

// Number of eigenvalues of the (sub-)interval problem strictly below lambda.
int oscillation_count(const PotentialModel& model, double lambda, const Boundary& left,
                      const Boundary& right, double tol = 1e-11);

// Count from the two Prüfer angles at a common matching point.
int count_from_phases(double theta_left, double theta_right);

// Matching point for the truncated problem: argmin q, ties broken toward the middle.
double match_point(const PotentialModel& model, double lo, double hi);

} // namespace specweyl

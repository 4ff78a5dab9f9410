// Runs the fifteen acceptance criteria and prints one PASS/FAIL line for each.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "specweyl/errors.hpp"
#include "specweyl/products.hpp"
#include "specweyl/spectrum.hpp"
#include "specweyl/verify.hpp"

using namespace specweyl;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const PotentialModel& gauss_perturbed() {
    static const PotentialModel m = PotentialModel::perturbed_harmonic({Term{Term::Type::Gaussian, 1.0, 0.0, 1.0}});
    return m;
}

// q = 0 on (0,2) with the cut at c = 1: the left half problem lives on (0,1)
const Frame& free_frame() {
    static const Frame f(PotentialModel::regular(0.0, 2.0), 1.0);
    return f;
}
const ProductRep& free_rep() {
    static const ProductRep rep = make_product_rep(free_frame(), 500);
    return rep;
}

Outcome harmonic_spectrum() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = eigenvalues(Frame(PotentialModel::harmonic(), 0.0), 10);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double err = 0.0;
    for (int n = 0; n < 10; ++n) err = std::max(err, std::abs(e[n] - (2.0 * n + 1.0)));
    return {err <= 1e-6 && secs <= 10.0, "max abs err " + fmt(err) + ", " + fmt(secs) + " s"};
}

Outcome poschl_teller() {
    const auto e = eigenvalues(Frame(PotentialModel::poschl_teller(1.0), 0.5), 5);
    int best = -1;
    double best_err = 1e300;
    for (int offset : {0, 1}) {
        double err = 0.0;
        for (int n = 1; n <= 5; ++n) err = std::max(err, rel(e[n - 1], pi * pi * (n + offset) * (n + offset)));
        if (err < best_err) best_err = err, best = offset;
    }
    return {best_err <= 1e-6, "offset " + std::to_string(best) + " (n >= 1), max rel err " + fmt(best_err)};
}

Outcome harmonic_norming() {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto g = norming_constants(f, eigenvalues(f, 6), Side::Left);
    double err = 0.0, fact = 1.0;
    for (int n = 0; n <= 5; ++n) {
        if (n > 0) fact *= n;
        err = std::max(err, rel(g[n], fact * std::sqrt(pi)));
    }
    return {err <= 1e-4, "max rel err " + fmt(err)};
}

Outcome interlacing() {
    int violations = 0;
    std::string detail;
    const std::array<std::pair<const char*, PotentialModel>, 3> models{{
        {"harmonic", PotentialModel::harmonic()},
        {"bessel l=1", PotentialModel::bessel(1.0)},
        {"regular", PotentialModel::regular(0.0, 1.0)},
    }};
    for (const auto& [name, m] : models) {
        const double c = std::isinf(m.a()) ? 0.0 : 0.5 * (m.a() + m.b());
        const Frame f(m, c);
        for (Side side : {Side::Left, Side::Right}) {
            const auto mu = sub_spectrum(f, c, side, SubBC::Dirichlet, 20);
            const auto nu = sub_spectrum(f, c, side, SubBC::Neumann, 21);
            for (int n = 0; n < 20; ++n) violations += !(nu[n] < mu[n]) + !(mu[n] < nu[n + 1]);
        }
        detail += std::string(detail.empty() ? "" : ", ") + name;
    }
    return {violations == 0, std::to_string(violations) + " violations (" + detail + ", both halves)"};
}

Outcome krein() {
    const auto& rep = free_rep();
    const cplx z(0.0, 1.0);
    const cplx direct = m_half_line(free_frame(), z, Side::Left);
    std::vector<double> lx, ly;
    bool decreasing = true;
    double err = 0.0;
    for (int N : {25, 50, 100, 200, 500}) {
        const double e = std::abs(krein_m_minus(rep, z, N) - direct) / std::abs(direct);
        if (!ly.empty() && std::log(e) >= ly.back()) decreasing = false;
        lx.push_back(std::log(N));
        ly.push_back(std::log(e));
        err = e;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) sx += lx[i], sy += ly[i], sxx += lx[i] * lx[i], sxy += lx[i] * ly[i];
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    return {err <= 1e-3 && slope <= -0.8 && decreasing, "rel err " + fmt(err) + " at N=500, log-log slope " + fmt(slope)};
}

Outcome construction() {
    // W is x-independent; it is measured at the base point where construct_phi = alpha (1, -m^_-)
    double worst = 0.0;
    const double c = free_frame().c();
    for (cplx z : {cplx(0.0, 1.0), cplx(-4.0, 0.5), cplx(15.0, 2.0), cplx(60.0, -3.0), cplx(-100.0, 10.0)}) {
        const auto a = construct_phi(free_rep(), free_frame(), z, c);
        const auto b = phi(free_frame(), z, c);
        worst = std::max(worst, std::abs(wronskian(a, b).w) / (a.magnitude() * b.magnitude()));
    }
    return {worst <= 1e-3, "max |W|/scale " + fmt(worst)};
}

Outcome ray_laws() {
    const RaySpec ray;
    double worst = -1e300;
    bool ok = true;
    const Frame h(PotentialModel::harmonic(), 0.0);
    const Frame r(PotentialModel::regular(0.0, 1.0), 0.5);
    for (const auto& d : {ray_phi_asymptotics(h, ray, 0.5, 0.2), ray_M_asymptotics(h, ray, -0.5), ray_psi_asymptotics(h, ray, 0.5),
                          ray_phi_asymptotics(r, ray, 0.6, 0.3), ray_M_asymptotics(r, ray, 0.3), ray_psi_asymptotics(r, ray, 0.5)}) {
        ok = ok && d.verdict == Verdict::Bounded && d.slope <= 0.05;
        worst = std::max(worst, d.slope);
    }
    return {ok, "6 laws Bounded, max slope " + fmt(worst)};
}

Outcome weber_law() {
    RaySpec ray;
    ray.radii = {1e2, 1e3, 1e4};
    const auto d = ray_weber_asymptotics(Frame(gauss_perturbed(), 0.0), ray, 0.0);
    const auto v = d.values();
    const double vmax = *std::max_element(v.begin(), v.end());
    return {d.verdict == Verdict::Bounded && std::isfinite(vmax), "values up to " + fmt(vmax) + ", slope " + fmt(d.slope)};
}

Outcome norming_wronskian() {
    const Frame f(gauss_perturbed(), 0.0);
    const auto p = norming_pairs(f, eigenvalues(f, 6));
    double err = 0.0, rec = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        err = std::max(err, rel(p[n].gamma_plus2 * p[n].gamma_minus2, p[n].wdot * p[n].wdot));
        const double sign = n % 2 ? -1.0 : 1.0;
        rec = std::max(rec, rel(sign * std::exp(-p[n].nu) * p[n].wdot, p[n].gamma_minus2));
        rec = std::max(rec, rel(sign * std::exp(p[n].nu) * p[n].wdot, p[n].gamma_plus2));
    }
    return {err <= 1e-4 && rec <= 1e-4, "product rel err " + fmt(err) + ", reconstruction rel err " + fmt(rec)};
}

Outcome exponent() {
    const auto h = exponent_report(eigenvalues(Frame(PotentialModel::harmonic(), 0.0), 60));
    const auto r = exponent_report(eigenvalues(Frame(PotentialModel::regular(0.0, 1.0), 0.5), 60));
    bool floor_flag = h.below_floor || r.below_floor;
    for (const auto& m : {PotentialModel::bessel(1.0), PotentialModel::poschl_teller(1.0), gauss_perturbed()}) {
        const double c = std::isinf(m.a()) ? 0.0 : 0.5 * (m.a() + m.b());
        floor_flag = floor_flag || exponent_report(eigenvalues(Frame(m, c), 60)).below_floor;
    }
    const bool ok = std::abs(h.s - 1.0) <= 0.05 && h.genus == 1 && std::abs(r.s - 0.5) <= 0.05 && r.genus == 0 && !floor_flag;
    return {ok, "harmonic s=" + fmt(h.s) + " p=" + std::to_string(h.genus) + ", regular s=" + fmt(r.s) +
                    " p=" + std::to_string(r.genus) + (floor_flag ? ", floor flagged" : ", floor never flagged")};
}

Outcome parseval_defect() {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto mu = spectral_measure(f, 30);
    std::vector<double> x(4801), v(4801);
    for (int i = 0; i < 4801; ++i) {
        x[i] = -12.0 + 24.0 * i / 4800.0;
        v[i] = std::exp(-x[i] * x[i]);
    }
    const auto r = parseval(f, x, v, mu);
    return {r.defect <= 1e-6, "defect " + fmt(r.defect)};
}

Outcome stieltjes() {
    const Frame f(PotentialModel::harmonic(), 0.0);
    const auto mu = spectral_measure(f, 2);
    const double w0 = mu.atoms[0].weight;
    const auto one = stieltjes_invert(f, 0.0, 2.0);
    const auto none = stieltjes_invert(f, 1.5, 2.5);
    const double e1 = rel(one.mass, w0);
    const double e0 = std::abs(none.mass) / w0;
    return {e1 <= 1e-2 && e0 <= 1e-3, "atom rel err " + fmt(e1) + ", empty/nearest weight " + fmt(e0)};
}

Outcome borg_marchenko() {
    const RaySpec ray;
    const auto h = PotentialModel::harmonic();
    const Frame f0(h, -3.0);
    const auto same = bm_diagnostic(f0, Frame(h, -3.0), 1.0, ray);
    const auto after = bm_diagnostic(f0, Frame(PotentialModel::perturbed_harmonic({Term{Term::Type::Bump, 1.0, 3.0, 1.0}}), -3.0), 1.0, ray);
    const auto before = bm_diagnostic(f0, Frame(PotentialModel::perturbed_harmonic({Term{Term::Type::Bump, 1.0, -0.5, 1.0}}), -3.0), 1.0, ray);
    bool zero = true;
    for (double v : same.values()) zero = zero && v == 0.0;
    const bool ok = zero && after.verdict == Verdict::Bounded && after.slope <= 0.05 / 3.0 &&
                    before.verdict == Verdict::Diverging && before.slope >= 3.0 * 0.3;
    return {ok, std::string("identical ") + (zero ? "exactly 0" : "nonzero") + ", after " + to_string(after.verdict) + " (slope " +
                    fmt(after.slope) + "), before " + to_string(before.verdict) + " (slope " + fmt(before.slope) + ")"};
}

Outcome hochstadt_lieberman() {
    const RaySpec ray;
    const auto h = PotentialModel::harmonic();
    std::vector<DecayDiagnostic> d;
    for (double c : {0.0, 0.5, 1.0}) d.push_back(hl_condition(Frame(h, c), c, ray));
    const double at_1e4 = d[0].values()[2];
    bool monotone = true;
    for (std::size_t i = 0; i < ray.radii.size(); ++i)
        monotone = monotone && d[1].log_values[i] < d[0].log_values[i] && d[2].log_values[i] < d[1].log_values[i];
    return {std::abs(at_1e4 - 1.0) <= 1e-2 && monotone,
            "c=0 value " + fmt(at_1e4) + " at r=1e4, " + (monotone ? "monotone in c" : "not monotone in c")};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string run_cli(const std::string& args) {
    const std::string cmd = std::string("cd '") + SPECWEYL_ROOT + "' && '" + SPECWEYL_CLI + "' " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    if (pclose(p) != 0) out += "<nonzero exit>";
    return out;
}

Outcome golden() {
    std::ifstream cases(std::string(SPECWEYL_ROOT) + "/tests/golden/cases.txt");
    std::string line;
    int total = 0, bad = 0;
    std::vector<std::string> seen, mismatched;
    while (std::getline(cases, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(": ");
        const std::string name = line.substr(0, colon), args = line.substr(colon + 2);
        const std::string want = read_file(std::string(SPECWEYL_ROOT) + "/tests/golden/" + name + ".out");
        ++total;
        if (want.empty() || run_cli(args) != want) {
            ++bad;
            mismatched.push_back(name);
        }
        seen.push_back(args.substr(0, args.find(' ')));
    }
    int covered = 0;
    for (const char* sub : {"eig", "measure", "norming", "mfun", "weber", "krein-check", "construct-phi", "bm-check", "hl-check",
                            "invert", "parseval", "exponent"})
        covered += std::find(seen.begin(), seen.end(), sub) != seen.end();
    std::string detail = std::to_string(total - bad) + "/" + std::to_string(total) + " files identical, " +
                         std::to_string(covered) + "/12 subcommands covered";
    for (const auto& m : mismatched) detail += "; differs: " + m;
    return {bad == 0 && total > 0 && covered == 12, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"harmonic spectrum", harmonic_spectrum},
        {"Poschl-Teller spectrum", poschl_teller},
        {"harmonic norming constants", harmonic_norming},
        {"Dirichlet/Neumann interlacing", interlacing},
        {"Krein product", krein},
        {"phi from two spectra", construction},
        {"ray asymptotic laws", ray_laws},
        {"Weber high-energy law", weber_law},
        {"norming/Wronskian relation", norming_wronskian},
        {"convergence exponent", exponent},
        {"Parseval defect", parseval_defect},
        {"Stieltjes inversion", stieltjes},
        {"Borg-Marchenko diagnostic", borg_marchenko},
        {"Hochstadt-Lieberman condition", hochstadt_lieberman},
        {"CLI determinism (golden files)", golden},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

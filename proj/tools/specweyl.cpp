// specweyl command-line front end
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "specweyl/errors.hpp"
#include "specweyl/model_io.hpp"
#include "specweyl/products.hpp"
#include "specweyl/special.hpp"
#include "specweyl/spectrum.hpp"
#include "specweyl/verify.hpp"

using namespace specweyl;

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw Usage(std::string(what) + ": cannot parse '" + item + "'");
        }
        if (pos != item.size() || !std::isfinite(v)) throw Usage(std::string(what) + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Usage(std::string(what) + ": empty list");
    return out;
}

std::vector<cplx> parse_points(const std::string& s) {
    const auto v = parse_list(s, "--z");
    if (v.size() % 2) throw Usage("--z expects RE,IM pairs");
    std::vector<cplx> z;
    for (std::size_t i = 0; i < v.size(); i += 2) z.emplace_back(v[i], v[i + 1]);
    return z;
}

PotentialModel load(const std::string& path) {
    try {
        return load_model(path);
    } catch (const Error& e) {
        throw Usage(e.what());
    }
}

double base_point(const PotentialModel& m, const std::optional<double>& c) {
    const double v = c ? *c : default_base_point(m);
    if (!(v > m.a() && v < m.b())) throw Usage("--c " + num(v) + " lies outside the open interval");
    return v;
}

RaySpec make_ray(double angle, const std::string& radii) {
    RaySpec r;
    r.angle = angle;
    r.radii = parse_list(radii, "--radii");
    try {
        r.validate();
    } catch (const Error& e) {
        throw Usage(e.what());
    }
    return r;
}

void emit_diagnostic(std::ostream& out, const DecayDiagnostic& d) {
    out << "r,log_value,value\n";
    for (std::size_t i = 0; i < d.radii.size(); ++i)
        out << num(d.radii[i]) << ',' << num(d.log_values[i]) << ',' << num(std::exp(d.log_values[i])) << '\n';
    out << "# slope: " << num(d.slope) << '\n';
    out << "# verdict: " << to_string(d.verdict) << '\n';
}

nlohmann::ordered_json gauge_json(const Frame& f) {
    nlohmann::ordered_json g;
    g["descriptor"] = f.gauge();
    g["base_point"] = f.c();
    g["model"] = to_string(f.model().kind());
    return g;
}

std::string fmt_json(const nlohmann::ordered_json& j) {
    // numbers in the same 17-digit form as the CSV output
    std::function<std::string(const nlohmann::ordered_json&, int)> dump = [&](const nlohmann::ordered_json& v, int ind) -> std::string {
        const std::string pad(ind + 2, ' '), close(ind, ' ');
        if (v.is_object()) {
            if (v.empty()) return "{}";
            std::string s = "{\n";
            bool first = true;
            for (const auto& [k, x] : v.items()) {
                if (!first) s += ",\n";
                first = false;
                s += pad + nlohmann::json(k).dump() + ": " + dump(x, ind + 2);
            }
            return s + "\n" + close + "}";
        }
        if (v.is_array()) {
            if (v.empty()) return "[]";
            std::string s = "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ",\n" : "") + pad + dump(v[i], ind + 2);
            return s + "\n" + close + "]";
        }
        if (v.is_number_float()) return num(v.get<double>());
        return v.dump();
    };
    return dump(j, 0) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"specweyl: spectral data and Weyl functions of Schroedinger operators"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write output to this file instead of stdout");

    std::string model_path, model0_path, model1_path;
    std::optional<double> c_opt, base_opt;
    int count = 10;
    double tol = 1e-12;
    bool csv = false, as_json = false;
    std::string side = "left", z_list, nu_str = "0,0", radii = "100,1000,10000,100000", interval, eps = "0.1,0.01,0.001";
    std::string xs = "", grid;
    double x_val = 0.0, angle = pi / 2;
    int n_terms = 500;

    auto model_opt = [&](CLI::App* s) {
        s->add_option("--model", model_path, "model JSON file")->required()->check(CLI::ExistingFile);
        s->add_option("--tol", tol, "integration tolerance")->check(CLI::Range(1e-14, 1e-6));
    };
    auto count_opt = [&](CLI::App* s, int def) {
        count = def;
        s->add_option("--count", count, "number of eigenvalues")->check(CLI::Range(1, 10000));
    };

    auto* eig = app.add_subcommand("eig", "lowest eigenvalues");
    model_opt(eig);
    eig->add_option("--count", count, "number of eigenvalues")->check(CLI::Range(1, 10000));
    eig->add_flag("--csv", csv, "CSV output (default)");
    eig->add_flag("--json", as_json, "JSON output");
    eig->add_option("--c", c_opt, "frame base point");

    auto* measure = app.add_subcommand("measure", "atomic spectral measure (JSON)");
    model_opt(measure);
    measure->add_option("--count", count)->check(CLI::Range(1, 10000));
    measure->add_option("--c", c_opt, "frame base point");

    auto* norming = app.add_subcommand("norming", "norming constants gamma_n^2");
    model_opt(norming);
    norming->add_option("--count", count)->check(CLI::Range(1, 10000));
    norming->add_option("--side", side, "left (phi) or right (chi)")->check(CLI::IsMember({"left", "right"}));
    norming->add_option("--c", c_opt, "frame base point");

    auto* mfun = app.add_subcommand("mfun", "singular Weyl function M(z)");
    model_opt(mfun);
    mfun->add_option("--c", c_opt, "frame base point");
    mfun->add_option("--z", z_list, "RE,IM[,RE,IM...]")->required();

    auto* weber = app.add_subcommand("weber", "parabolic cylinder function D_nu(x)");
    weber->add_option("--nu", nu_str, "RE,IM")->required();
    weber->add_option("--x", x_val, "real argument")->required();

    auto* krein = app.add_subcommand("krein-check", "Krein product for m_- against the direct value");
    model_opt(krein);
    krein->add_option("--c", c_opt, "cut / frame base point");
    krein->add_option("--n-terms", n_terms, "product truncation N")->check(CLI::Range(16, 5000));
    krein->add_option("--z", z_list, "RE,IM")->required();

    auto* cphi = app.add_subcommand("construct-phi", "phi from Dirichlet/Neumann data");
    model_opt(cphi);
    cphi->add_option("--c", c_opt, "cut / frame base point");
    cphi->add_option("--n-terms", n_terms, "product truncation N")->check(CLI::Range(16, 5000));
    cphi->add_option("--z", z_list, "RE,IM[,RE,IM...]")->required();
    cphi->add_option("--x", xs, "comma-separated positions (default: the base point)");

    auto* bm = app.add_subcommand("bm-check", "Borg-Marchenko decay diagnostic");
    bm->add_option("--model0", model0_path)->required()->check(CLI::ExistingFile);
    bm->add_option("--model1", model1_path)->required()->check(CLI::ExistingFile);
    bm->add_option("--c", c_opt, "cut")->required();
    bm->add_option("--base", base_opt, "shared frame base point (default: c-4 on the line, else (a+c)/2)");
    bm->add_option("--angle", angle, "ray angle")->check(CLI::Range(0.0, 2 * pi));
    bm->add_option("--radii", radii, "R1,R2,...");
    bm->add_option("--tol", tol)->check(CLI::Range(1e-14, 1e-6));

    auto* hl = app.add_subcommand("hl-check", "Hochstadt-Lieberman condition chi(c)/phi(c)");
    model_opt(hl);
    hl->add_option("--c", c_opt, "cut");
    hl->add_option("--angle", angle, "ray angle")->check(CLI::Range(0.0, 2 * pi));
    hl->add_option("--radii", radii, "R1,R2,...");

    auto* inv = app.add_subcommand("invert", "Stieltjes inversion of M over an interval");
    model_opt(inv);
    inv->add_option("--c", c_opt, "frame base point");
    inv->add_option("--interval", interval, "X0,X1")->required();
    inv->add_option("--eps", eps, "decreasing eps ladder");

    auto* pars = app.add_subcommand("parseval", "expansion of f(x)=exp(-x^2) and the Parseval defect");
    model_opt(pars);
    pars->add_option("--count", count)->check(CLI::Range(1, 10000));
    pars->add_option("--c", c_opt, "frame base point");
    pars->add_option("--grid", grid, "LO,HI,N uniform quadrature grid");

    auto* expo = app.add_subcommand("exponent", "convergence exponent and genus of the spectrum");
    model_opt(expo);
    expo->add_option("--count", count)->check(CLI::Range(20, 10000));
    expo->add_option("--c", c_opt, "frame base point");

    // subcommand-specific defaults
    pars->preparse_callback([&](std::size_t) { count = 30; });
    expo->preparse_callback([&](std::size_t) { count = 60; });
    (void)count_opt;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::ostringstream out;
    try {
        if (eig->parsed()) {
            if (csv && as_json) throw Usage("--csv and --json are exclusive");
            const auto m = load(model_path);
            const Frame f(m, base_point(m, c_opt), tol);
            const auto e = eigenvalues(f, count);
            if (as_json) {
                nlohmann::ordered_json j;
                j["eigenvalues"] = e;
                j["gauge"] = gauge_json(f);
                out << fmt_json(j);
            } else {
                for (double v : e) out << num(v) << '\n';
            }
        } else if (measure->parsed()) {
            const auto m = load(model_path);
            const Frame f(m, base_point(m, c_opt), tol);
            const auto mu = spectral_measure(f, count);
            nlohmann::ordered_json j;
            j["atoms"] = nlohmann::ordered_json::array();
            for (const auto& a : mu.atoms) j["atoms"].push_back({{"lambda", a.lambda}, {"weight", a.weight}});
            j["gauge"] = gauge_json(f);
            out << fmt_json(j);
        } else if (norming->parsed()) {
            const auto m = load(model_path);
            const Frame f(m, base_point(m, c_opt), tol);
            const auto e = eigenvalues(f, count);
            const auto g = norming_constants(f, e, side == "left" ? Side::Left : Side::Right);
            out << "n,lambda,gamma2\n";
            for (std::size_t i = 0; i < e.size(); ++i) out << i << ',' << num(e[i]) << ',' << num(g[i]) << '\n';
        } else if (mfun->parsed()) {
            const auto m = load(model_path);
            const auto zs = parse_points(z_list);
            const Frame f(m, base_point(m, c_opt), tol);
            out << "re_z,im_z,re_M,im_M\n";
            for (cplx z : zs) {
                const cplx M = singular_M(f, z);
                out << num(z.real()) << ',' << num(z.imag()) << ',' << num(M.real()) << ',' << num(M.imag()) << '\n';
            }
        } else if (weber->parsed()) {
            const auto nv = parse_list(nu_str, "--nu");
            if (nv.size() != 2) throw Usage("--nu expects RE,IM");
            const auto w = weber_D_full(cplx(nv[0], nv[1]), x_val);
            out << "re_mantissa,im_mantissa,exponent,re_deriv_mantissa,im_deriv_mantissa,deriv_exponent\n";
            out << num(w.value.mantissa.real()) << ',' << num(w.value.mantissa.imag()) << ',' << num(w.value.exponent) << ','
                << num(w.derivative.mantissa.real()) << ',' << num(w.derivative.mantissa.imag()) << ','
                << num(w.derivative.exponent) << '\n';
        } else if (krein->parsed()) {
            const auto m = load(model_path);
            const auto zs = parse_points(z_list);
            if (zs.size() != 1) throw Usage("krein-check takes a single --z point");
            const Frame f(m, base_point(m, c_opt), tol);
            const auto rep = make_product_rep(f, n_terms);
            const cplx direct = m_half_line(f, zs[0], Side::Left);
            out << "N,rel_err\n";
            std::vector<double> lx, ly;
            for (int N = n_terms / 16; N <= n_terms; N *= 2) {
                const double err = std::abs(krein_m_minus(rep, zs[0], N) - direct) / std::abs(direct);
                out << N << ',' << num(err) << '\n';
                lx.push_back(std::log(N));
                ly.push_back(std::log(err));
                if (N * 2 > n_terms && N != n_terms) N = n_terms / 2;
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(lx.size());
            for (std::size_t i = 0; i < lx.size(); ++i) sx += lx[i], sy += ly[i], sxx += lx[i] * lx[i], sxy += lx[i] * ly[i];
            out << "# C: " << num(rep.C) << '\n';
            out << "# slope: " << num((sxy - sx * sy / n) / (sxx - sx * sx / n)) << '\n';
        } else if (cphi->parsed()) {
            const auto m = load(model_path);
            const auto zs = parse_points(z_list);
            const Frame f(m, base_point(m, c_opt), tol);
            const auto xv = xs.empty() ? std::vector<double>{f.c()} : parse_list(xs, "--x");
            for (double x : xv)
                if (!(x > m.a() && x < m.b())) throw Usage("--x outside the open interval");
            const auto rep = make_product_rep(f, n_terms);
            out << "re_z,im_z,x,re_mantissa,im_mantissa,exponent,re_ratio,im_ratio\n";
            for (cplx z : zs)
                for (double x : xv) {
                    const ScaledValue p = construct_phi(rep, f, z, x), d = phi(f, z, x);
                    const cplx ratio = p.u / d.u * std::exp(p.exponent - d.exponent);
                    out << num(z.real()) << ',' << num(z.imag()) << ',' << num(x) << ',' << num(p.u.real()) << ','
                        << num(p.u.imag()) << ',' << num(p.exponent) << ',' << num(ratio.real()) << ',' << num(ratio.imag())
                        << '\n';
                }
        } else if (bm->parsed()) {
            const auto m0 = load(model0_path), m1 = load(model1_path);
            const RaySpec ray = make_ray(angle, radii);
            const double c = *c_opt;
            for (const auto* m : {&m0, &m1})
                if (!(c > m->a() && c < m->b())) throw Usage("--c outside the open interval");
            const double base = base_opt ? *base_opt : (std::isfinite(m0.a()) ? 0.5 * (m0.a() + c) : c - 4.0);
            for (const auto* m : {&m0, &m1})
                if (!(base > m->a() && base < m->b())) throw Usage("--base outside the open interval");
            const Frame f0(m0, base, tol), f1(m1, base, tol);
            emit_diagnostic(out, bm_diagnostic(f0, f1, c, ray));
        } else if (hl->parsed()) {
            const auto m = load(model_path);
            const RaySpec ray = make_ray(angle, radii);
            const double c = base_point(m, c_opt);
            const Frame f(m, c, tol);
            emit_diagnostic(out, hl_condition(f, c, ray));
        } else if (inv->parsed()) {
            const auto m = load(model_path);
            const auto iv = parse_list(interval, "--interval");
            if (iv.size() != 2 || !(iv[0] < iv[1])) throw Usage("--interval expects X0,X1 with X0 < X1");
            const auto ladder = parse_list(eps, "--eps");
            for (std::size_t i = 0; i < ladder.size(); ++i)
                if (!(ladder[i] > 0) || (i && !(ladder[i] < ladder[i - 1]))) throw Usage("--eps must be positive and decreasing");
            const Frame f(m, base_point(m, c_opt), tol);
            const auto r = stieltjes_invert(f, iv[0], iv[1], ladder);
            out << "eps,mass\n";
            for (std::size_t i = 0; i < r.eps.size(); ++i) out << num(r.eps[i]) << ',' << num(r.raw[i]) << '\n';
            // the eps ladder is trusted when successive raw values contract
            bool contracting = r.raw.size() >= 3;
            for (std::size_t i = 2; i < r.raw.size(); ++i)
                if (std::abs(r.raw[i] - r.raw[i - 1]) > std::abs(r.raw[i - 1] - r.raw[i - 2]) + 1e-12) contracting = false;
            out << "# mass: " << num(r.mass) << '\n';
            out << "# verdict: " << (contracting ? "Bounded" : "Inconclusive") << '\n';
        } else if (pars->parsed()) {
            const auto m = load(model_path);
            const Frame f(m, base_point(m, c_opt), tol);
            double lo, hi;
            int n;
            if (grid.empty()) {
                lo = std::isfinite(m.a()) ? m.a() : -12.0;
                hi = std::isfinite(m.b()) ? m.b() : 12.0;
                n = 4801;
                if (std::isfinite(m.a())) lo += 1e-9 * (hi - lo);
                if (std::isfinite(m.b())) hi -= 1e-9 * (hi - lo);
            } else {
                const auto g = parse_list(grid, "--grid");
                if (g.size() != 3 || !(g[0] < g[1]) || g[2] < 3 || g[2] > 1e7) throw Usage("--grid expects LO,HI,N with N >= 3");
                lo = g[0], hi = g[1], n = static_cast<int>(g[2]);
            }
            std::vector<double> x(n), v(n);
            for (int i = 0; i < n; ++i) {
                x[i] = lo + (hi - lo) * i / (n - 1);
                v[i] = std::exp(-x[i] * x[i]);
            }
            const auto mu = spectral_measure(f, count);
            const auto r = parseval(f, x, v, mu);
            out << "n,lambda,coefficient\n";
            for (std::size_t i = 0; i < mu.atoms.size(); ++i)
                out << i << ',' << num(mu.atoms[i].lambda) << ',' << num(r.coefficients[i]) << '\n';
            out << "# norm2: " << num(r.norm2) << '\n';
            out << "# series: " << num(r.series) << '\n';
            out << "# defect: " << num(r.defect) << '\n';
        } else if (expo->parsed()) {
            const auto m = load(model_path);
            const Frame f(m, base_point(m, c_opt), tol);
            const auto rep = exponent_report(eigenvalues(f, count));
            out << "kappa,s,genus,r2,window_begin,window_end,below_floor\n";
            out << num(rep.kappa) << ',' << num(rep.s) << ',' << rep.genus << ',' << num(rep.r2) << ',' << rep.window_begin
                << ',' << rep.window_end << ',' << (rep.below_floor ? "true" : "false") << '\n';
        }
    } catch (const Usage& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 3;
    }

    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "usage error: cannot write " << out_path << '\n';
            return 2;
        }
        f << out.str();
    }
    return 0;
}

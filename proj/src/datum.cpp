#include "gaborwf/datum.hpp"
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_airy.h>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace gwf {

double smooth_step(double t) {
    auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    t = std::clamp(t, 0.0, 1.0);
    const double a = f(t);
    return a / (a + f(1.0 - t));
}

double taper(double x, double a, double b) {
    return 1.0 - smooth_step((std::abs(x) - a) / (b - a));
}

namespace {

SampledDistribution build(double X, int n, const std::string& label,
                          const std::function<cplx(double)>& f) {
    std::vector<cplx> vals(n);
    const double dx = 2.0 * X / n;
    for (int j = 0; j < n; ++j) vals[j] = f(-X + dx * j);
    return SampledDistribution::make(X, std::move(vals), label);
}

} // namespace

SampledDistribution datum_gaussian(double X, int n) {
    const double c = std::pow(std::numbers::pi, -0.25);
    return build(X, n, "gaussian", [c](double x) { return c * std::exp(-x * x / 2.0); });
}

SampledDistribution datum_dirac(double X, int n) {
    std::vector<cplx> vals(n, 0.0);
    vals[n / 2] = n / (2.0 * X);  // unit mass
    return SampledDistribution::make(X, std::move(vals), "dirac");
}

SampledDistribution datum_monomial(int k, double X, int n) {
    if (k < 0) throw invariant_violation("monomial: power must be >= 0");
    const double a = 0.75 * X, b = 0.95 * X;
    return build(X, n, "monomial(" + std::to_string(k) + ")",
                 [=](double x) { return std::pow(x, k) * taper(x, a, b); });
}

SampledDistribution datum_chirp(double alpha, double X, int n) {
    const double a = 0.75 * X, b = 0.95 * X;
    std::ostringstream name;
    name << "chirp(" << alpha << ")";
    return build(X, n, name.str(), [=](double x) {
        return std::exp(cplx(0.0, alpha * x * x / 2.0)) * taper(x, a, b);
    });
}

SampledDistribution datum_heaviside(double X, int n) {
    const double a = 0.75 * X, b = 0.95 * X;
    return build(X, n, "heaviside",
                 [=](double x) { return x >= 0.0 ? taper(x, a, b) : 0.0; });
}

SampledDistribution datum_power_phase(int p, double scale, double X, int n) {
    if (p < 3) throw invariant_violation("power_phase: power must be >= 3");
    if (scale <= 0.0) scale = (p == 4) ? 300.0 : 15.0;
    const double Xi = std::numbers::pi * n / (2.0 * X);
    // instantaneous frequency scale*p*x^{p-1}: plateau ends where it clears
    // the scanned shells, support ends before it aliases
    const double f_lo = 1.5 * std::min(X, Xi);
    const double a = std::pow(f_lo / (scale * p), 1.0 / (p - 1));
    const double b = std::pow(0.9 * Xi / (scale * p), 1.0 / (p - 1));
    if (b <= a)
        throw resolution_error("power_phase: grid cannot separate taper band from Nyquist");
    std::ostringstream name;
    name << "power_phase(" << p << ", " << scale << ")";
    const double s = scale;
    return build(X, n, name.str(), [=](double x) {
        return std::exp(cplx(0.0, s * std::pow(x, p))) * taper(x, a, b);
    });
}

SampledDistribution datum_airy_fourier(double c, double X, int n) {
    if (c <= 0.0) c = 0.45;
    gsl_set_error_handler_off();
    const double a = 0.75 * X, b = 0.95 * X;
    std::ostringstream name;
    name << "airy_fourier(" << c << ")";
    return build(X, n, name.str(), [=](double x) -> cplx {
        gsl_sf_result res;
        const int status = gsl_sf_airy_Ai_e(c * x, GSL_PREC_DOUBLE, &res);
        const double v = (status == GSL_SUCCESS) ? res.val : 0.0;
        return v * taper(x, a, b);
    });
}

SampledDistribution datum_from_samples(const std::string& path, double X) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open samples file: " + path);
    std::vector<cplx> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double re = 0.0, im = 0.0;
        char comma = ',';
        if (!(ls >> re)) throw std::runtime_error("bad samples line: " + line);
        if (ls >> comma >> im) {}
        vals.emplace_back(re, im);
    }
    return SampledDistribution::make(X, std::move(vals), "samples:" + path);
}

SampledDistribution make_datum(const std::string& expr, double X, int n) {
    std::string name = expr;
    std::vector<double> args;
    const auto lp = expr.find('(');
    if (lp != std::string::npos) {
        const auto rp = expr.rfind(')');
        if (rp == std::string::npos || rp < lp)
            throw invariant_violation("datum expression: unbalanced parentheses in " + expr);
        name = expr.substr(0, lp);
        std::string inner = expr.substr(lp + 1, rp - lp - 1);
        std::istringstream ls(inner);
        std::string tok;
        while (std::getline(ls, tok, ','))
            if (tok.find_first_not_of(" \t") != std::string::npos)
                args.push_back(std::stod(tok));
    }
    auto arg = [&](size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };

    if (name == "gaussian") return datum_gaussian(X, n);
    if (name == "dirac") return datum_dirac(X, n);
    if (name == "heaviside") return datum_heaviside(X, n);
    if (name == "monomial") return datum_monomial(static_cast<int>(arg(0, 1)), X, n);
    if (name == "chirp") return datum_chirp(arg(0, 1.0), X, n);
    if (name == "power_phase")
        return datum_power_phase(static_cast<int>(arg(0, 3)), arg(1, 0.0), X, n);
    if (name == "airy_fourier") return datum_airy_fourier(arg(0, 0.0), X, n);
    throw invariant_violation("unknown datum: " + name);
}

} // namespace gwf

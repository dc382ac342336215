// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Usage: acceptance [--criterion N]   (no argument runs all nine)
#include <chrono>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gaborwf/catalog.hpp"
#include "gaborwf/datum.hpp"
#include "gaborwf/lagrangian.hpp"
#include "gaborwf/propagation.hpp"
#include "gaborwf/wf_detector.hpp"
#include "test_support.hpp"

using namespace gwf;
using gwf::testing::Rng;

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << why;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mat q_1d(cplx a, cplx b) {
    Mat Q = Mat::Zero(2, 2);
    Q(0, 0) = a;
    Q(1, 1) = b;
    return Q;
}

Mat q_heat(int d) {
    Mat Q = Mat::Zero(2 * d, 2 * d);
    for (int j = 0; j < d; ++j) Q(d + j, d + j) = 1.0;
    return Q;
}

Mat q_degenerate(int d, int cross, bool rotor) {
    Mat Q = Mat::Zero(2 * d, 2 * d);
    Q(0, 0) = 1.0;
    for (int j = 0; j < d; ++j) Q(d + j, d + j) = kI;
    for (int j = 0; j < cross; ++j) {
        Q(j + 1, d + j) = kI;
        Q(d + j, j + 1) = kI;
    }
    if (rotor) Q(d - 1, d - 1) = kI;
    return Q;
}

Subspace span_of(const std::vector<int>& axes, int ambient) {
    RMat b = RMat::Zero(ambient, static_cast<int>(axes.size()));
    for (size_t k = 0; k < axes.size(); ++k) b(axes[k], static_cast<int>(k)) = 1.0;
    return Subspace{ambient, b, 1e-10};
}

RVec unit2(double x, double y) {
    RVec v(2);
    v << x, y;
    return v.normalized();
}

RVec axis(int k, int ambient) {
    RVec v = RVec::Zero(ambient);
    v(k) = 1.0;
    return v;
}

double angle_to(const RVec& u, const RVec& v) {
    return std::acos(std::clamp(u.normalized().dot(v.normalized()), -1.0, 1.0));
}

GaussianGenerator random_generator(int d, int N, Rng& rng) {
    const int m = d + N;
    RMat g = gwf::testing::random_real_matrix(m, m, rng);
    RMat re = 0.5 * (g + g.transpose());
    RMat a = gwf::testing::random_real_matrix(m, m, rng);
    RMat im = a.transpose() * a;
    im.bottomRightCorner(N, N) += 0.2 * RMat::Identity(N, N);
    GeneratorResult r = validate_generator(re.cast<cplx>() + kI * im.cast<cplx>(), d, N);
    if (!r.ok()) throw std::logic_error("random generator rejected");
    return *r.gen;
}

Subspace direct_real_points(const ComplexLagrangian& lam) {
    const int m = static_cast<int>(lam.Z.rows());
    if (lam.Z.cols() == 0) return zero_space(m);
    Mat P = lam.Z * (lam.Z.adjoint() * lam.Z).inverse() * lam.Z.adjoint();
    return nullspace(Mat(Mat::Identity(m, m) - P));
}

double ang_dist_deg(double a, double b) {
    double d = std::fmod(std::abs(a - b), 360.0);
    return std::min(d, 360.0 - d);
}

// criterion 5 helper: expected angles hit within hit_tol, caps within spur_tol
bool flags_match(const WFEstimate& est, const std::vector<double>& expect_deg,
                 std::string& why) {
    for (double e : expect_deg) {
        bool hit = false;
        for (const auto& c : est.caps)
            if (ang_dist_deg(c.center_deg, e) <= 1.5) hit = true;
        if (!hit) {
            why = "no cap within 1.5 deg of " + std::to_string(e);
            return false;
        }
    }
    for (const auto& c : est.caps) {
        bool near = false;
        for (double e : expect_deg)
            if (ang_dist_deg(c.center_deg, e) <= 3.0) near = true;
        if (!near) {
            why = "spurious cap at " + std::to_string(c.center_deg) + " deg";
            return false;
        }
    }
    return true;
}

// ----------------------------------------------------------------------------

Outcome criterion_1() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const double tol = 1e-9;

    struct Golden {
        const char* name;
        int d;
        Mat Q;
        Subspace expect;
    };
    std::vector<Golden> goldens;
    goldens.push_back({"multiplication x^2", 1, q_1d(1.0, 0.0), span_of({1}, 2)});
    goldens.push_back({"heat d=1", 1, q_heat(1), span_of({0}, 2)});
    goldens.push_back({"heat d=2", 2, q_heat(2), span_of({0, 1}, 4)});
    goldens.push_back({"|x|^2+|xi|^2", 1, Mat(Mat::Identity(2, 2)), zero_space(2)});
    goldens.push_back({"|x|^2+i xi^2", 1, q_1d(1.0, kI), zero_space(2)});
    goldens.push_back({"(1+i) xi^2", 1, q_1d(0.0, cplx(1.0, 1.0)), span_of({0}, 2)});
    goldens.push_back({"degenerate first (d=2)", 2, q_degenerate(2, 1, false), zero_space(4)});
    goldens.push_back({"degenerate second (d=3)", 3, q_degenerate(3, 1, true), span_of({2, 5}, 6)});

    double worst = 0.0;
    for (const auto& g : goldens) {
        const HamiltonMap fm = hamilton_map(QuadraticHamiltonian::make(g.d, g.Q));
        const SingularSpaceResult res = singular_space(fm);
        const double pd = projector_distance(res.S, g.expect);
        worst = std::max(worst, pd);
        if (res.S.dim() != g.expect.dim() || pd >= tol)
            out.fail(std::string(g.name) + ": projector distance " + std::to_string(pd));
        // the normal symbol is characterized by its first chain link alone
        if (std::string(g.name) == "(1+i) xi^2") {
            const Subspace ker_re = nullspace(fm.F_re);
            if (projector_distance(res.S, ker_re) >= tol)
                out.fail("(1+i) xi^2: S differs from Ker Re F");
        }
    }
    const double el = seconds_since(t0);
    if (el >= 1.0) out.fail("runtime " + std::to_string(el) + " s exceeds 1 s");
    out.detail << "8 subspace goldens over 7 symbol families, worst projector distance " << worst
               << ", " << el << " s";
    return out;
}

Outcome criterion_2() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1002);
    double worst_res = 0.0, worst_defect = 1e9;
    for (int k = 0; k < 200; ++k) {
        const int d = 1 + k % 3;
        // Scale is a gauge freedom (Q -> cQ rescales time), so draw at unit
        // Frobenius norm; the absolute residual M^T J M - J otherwise grows
        // as ||M||^2 ~ e^{4t||F||} past what doubles can represent.
        Mat Q = gwf::testing::random_admissible_Q_matrix(d, rng);
        Q /= Q.norm();
        const HamiltonMap fm = hamilton_map(QuadraticHamiltonian::make(d, Q));
        std::vector<Vec> probes;
        for (int p = 0; p < 5; ++p) probes.push_back(gwf::testing::random_cvec(2 * d, rng));
        for (int j = 0; j < 50; ++j) {
            const double t = 0.02 + 0.04 * j;
            const Mat M = expm(cplx(0.0, -2.0 * t) * fm.F);
            worst_res = std::max(worst_res, symplectic_residual(M));
            worst_defect = std::min(worst_defect, graph_positivity_defect(fm.F, t, probes));
        }
    }
    if (worst_res >= 1e-10)
        out.fail("symplectic residual " + std::to_string(worst_res));
    if (worst_defect <= -1e-10)
        out.fail("positivity defect " + std::to_string(worst_defect));
    const double el = seconds_since(t0);
    if (el >= 30.0) out.fail("runtime " + std::to_string(el) + " s exceeds 30 s");
    out.detail << "200 symbols x 50 times: max residual " << worst_res << ", min defect "
               << worst_defect << ", " << el << " s";
    return out;
}

Outcome criterion_3() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1002);  // the same 200 symbols as criterion 2
    std::vector<double> t_grid;
    for (int j = 0; j <= 32; ++j) t_grid.push_back(j / 32.0);
    double worst_pd = 0.0;
    int disagreements = 0;
    for (int k = 0; k < 200; ++k) {
        const int d = 1 + k % 3;
        Mat Q = gwf::testing::random_admissible_Q_matrix(d, rng);
        Q /= Q.norm();
        const auto h = QuadraticHamiltonian::make(d, Q);
        const HamiltonMap fm = hamilton_map(h);
        const Subspace S = singular_space(fm).S;
        const Subspace S_flow = singular_space_via_flow_kernels(fm, 1.0, 4 * d + 4);
        worst_pd = std::max(worst_pd, projector_distance(S, S_flow));
        for (int c = 0; c < S.dim(); ++c)
            if (!flow_vanishing_membership(h, RVec(S.basis.col(c)), t_grid)) ++disagreements;
        for (int p = 0; p < 5; ++p) {
            const RVec v = gwf::testing::random_unit(2 * d, rng);
            const RVec off = v - S.basis * (S.basis.transpose() * v);
            if (off.norm() < 0.3) continue;  // too close to S to classify robustly
            if (flow_vanishing_membership(h, v, t_grid)) ++disagreements;
        }
    }
    if (worst_pd >= 1e-8) out.fail("projector distance " + std::to_string(worst_pd));
    if (disagreements != 0)
        out.fail(std::to_string(disagreements) + " classification disagreements");
    const double el = seconds_since(t0);
    if (el >= 60.0) out.fail("runtime " + std::to_string(el) + " s exceeds 60 s");
    out.detail << "200 symbols: algebraic vs flow-kernel distance " << worst_pd
               << ", flow-vanishing disagreements " << disagreements << ", " << el << " s";
    return out;
}

Outcome criterion_4() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const double tol = 1e-8;

    {  // diffusion absorbs the frequency axis
        const auto h = QuadraticHamiltonian::make(1, q_heat(1));
        ConicSet wf0{2, {{unit2(0.0, 1.0), 0.0}, {unit2(0.0, -1.0), 0.0}}};
        const PropagationReport rep = propagate(h, wf0, 0.5);
        if (!rep.bound_singular.patches.empty() || !rep.bound_general.patches.empty())
            out.fail("heat: bound for WF(delta) not empty");
    }
    {  // oscillator rotates rays by exactly 2t
        const auto h = QuadraticHamiltonian::make(1, q_1d(kI, kI));
        double worst = 0.0;
        for (double t : {0.3, kPi / 4.0, 1.1}) {
            const PropagationReport rep = propagate(h, ConicSet::ray(unit2(0.0, 1.0)), t);
            const RVec expect = unit2(std::sin(2.0 * t), std::cos(2.0 * t));
            if (rep.bound_singular.patches.size() != 1 || rep.bound_general.patches.size() != 1) {
                out.fail("oscillator: expected a single ray in both bounds");
                continue;
            }
            worst = std::max(worst, angle_to(rep.bound_singular.patches[0].direction, expect));
            worst = std::max(worst, angle_to(rep.bound_general.patches[0].direction, expect));
        }
        if (worst >= tol) out.fail("oscillator angular error " + std::to_string(worst));
        out.detail << "rotation error " << worst << " rad";
    }
    {  // globally smoothing symbols
        for (const Mat& Q : {Mat(Mat::Identity(2, 2)), q_1d(1.0, kI)}) {
            const auto h = QuadraticHamiltonian::make(1, Q);
            for (const ConicSet& wf0 :
                 {ConicSet::everything(2), ConicSet::ray(unit2(1.0, 0.0)),
                  ConicSet::ray(unit2(1.0, 2.0))}) {
                const PropagationReport rep = propagate(h, wf0, 0.4);
                if (!rep.bound_singular.patches.empty() || !rep.bound_general.patches.empty())
                    out.fail("smoothing symbol left a nonempty bound");
            }
        }
    }
    {  // degenerate d=3: only the (x3, xi3) pair moves, as a rotation block
        const auto h = QuadraticHamiltonian::make(3, q_degenerate(3, 1, true));
        const double t = 0.25;
        double worst = 0.0;
        RVec e3img = RVec::Zero(6), e6img = RVec::Zero(6);
        e3img(2) = std::cos(2.0 * t);
        e3img(5) = -std::sin(2.0 * t);
        e6img(2) = std::sin(2.0 * t);
        e6img(5) = std::cos(2.0 * t);
        const PropagationReport r3 = propagate(h, ConicSet::ray(axis(2, 6)), t);
        const PropagationReport r6 = propagate(h, ConicSet::ray(axis(5, 6)), t);
        if (r3.bound_singular.patches.size() != 1 || r6.bound_singular.patches.size() != 1) {
            out.fail("degenerate: surviving rays lost");
        } else {
            worst = std::max(worst, angle_to(r3.bound_singular.patches[0].direction, e3img));
            worst = std::max(worst, angle_to(r6.bound_singular.patches[0].direction, e6img));
            if (worst >= tol) out.fail("degenerate angular error " + std::to_string(worst));
        }
        for (int k : {0, 1, 3, 4})
            if (!propagate(h, ConicSet::ray(axis(k, 6)), t).bound_singular.patches.empty())
                out.fail("degenerate: direction outside the pair survived");
    }
    out.detail << ", " << seconds_since(t0) << " s";
    return out;
}

Outcome criterion_5() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const double X = 40.0;
    const int n = 4096;

    struct Golden {
        const char* name;
        SampledDistribution u;
        std::vector<double> expect_deg;
    };
    std::vector<Golden> goldens;
    goldens.push_back({"delta", datum_dirac(X, n), {90, 270}});
    goldens.push_back({"constant", datum_monomial(0, X, n), {0, 180}});
    goldens.push_back({"chirp", datum_chirp(1.0, X, n), {45, 225}});
    goldens.push_back({"heaviside", datum_heaviside(X, n), {0, 90, 270}});
    goldens.push_back({"cubic phase", datum_power_phase(3, 0.0, X, n), {90}});
    goldens.push_back({"quartic phase", datum_power_phase(4, 0.0, X, n), {90, 270}});
    goldens.push_back({"airy", datum_airy_fourier(0.45, X, n), {180}});

    for (const auto& g : goldens) {
        const WFEstimate est = estimate_wf(g.u);
        std::string why;
        if (!flags_match(est, g.expect_deg, why))
            out.fail(std::string(g.name) + ": " + why);
    }
    const double el = seconds_since(t0);
    if (el >= 120.0) out.fail("runtime " + std::to_string(el) + " s exceeds 120 s");
    out.detail << "7 wave-front goldens at 1.5/3.0 deg tolerances, " << el << " s";
    return out;
}

Outcome criterion_6() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    // grid, window and shell layout chosen so every direction's decay is
    // measurable: see the scenario notes for the heat-on-airy configuration
    const double X = 113.0;
    const int n = 8192;
    const SampledDistribution u0 = datum_airy_fourier(1.6, X, n);
    DetectorConfig cfg;
    cfg.window_scale = 0.2;
    cfg.rmax_frac = 0.72;
    cfg.n_shells = 8;
    const auto h = QuadraticHamiltonian::make(1, q_heat(1));

    const WFEstimate est0 = estimate_wf(u0, cfg);
    if (est0.caps.size() != 1)
        out.fail("t=0: expected one flagged cap, got " + std::to_string(est0.caps.size()));
    else if (ang_dist_deg(est0.caps[0].center_deg, 180.0) > 1.5)
        out.fail("t=0: cap center " + std::to_string(est0.caps[0].center_deg) + " deg");

    for (double t : {0.1, 0.5}) {
        const auto ut = fast_path(h, u0, t);
        if (!ut) {
            out.fail("heat fast path not taken");
            break;
        }
        const WFEstimate est = estimate_wf(*ut, cfg);
        double worst = -1e9;
        for (const auto& r : est.per_direction) worst = std::max(worst, r.exponent);
        if (!est.empty())
            out.fail("t=" + std::to_string(t) + ": " + std::to_string(est.flagged.size()) +
                     " directions flagged");
        if (worst >= -8.0)
            out.fail("t=" + std::to_string(t) + ": worst exponent " + std::to_string(worst));
        out.detail << "t=" << t << " worst exponent " << worst << "; ";
    }
    const double el = seconds_since(t0);
    if (el >= 30.0) out.fail("runtime " + std::to_string(el) + " s exceeds 30 s");
    out.detail << el << " s";
    return out;
}

Outcome criterion_7() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1007);
    const int N_h = 128;
    double worst_growth = 0.0, worst_drift = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto h = gwf::testing::random_admissible_Q(1, rng);
        const GalerkinOperator op = hermite_matrix(h, N_h, 1.0);
        HermiteRep u0{N_h, Vec::Zero(N_h), 1.0};
        for (int m = 0; m < N_h / 2; ++m) u0.coeffs(m) = gwf::testing::random_cvec(1, rng)(0);
        const double n0 = u0.coeffs.norm();
        for (double t : {0.1, 0.5, 1.0}) {
            const EvolveResult r = evolve(op, u0, t);
            worst_growth = std::max(worst_growth, r.u.coeffs.norm() / n0 - 1.0);
        }
    }
    for (int k = 0; k < 15; ++k) {
        const auto h = gwf::testing::random_imaginary_Q(1, rng);
        const GalerkinOperator op = hermite_matrix(h, N_h, 1.0);
        HermiteRep u0{N_h, gwf::testing::random_cvec(N_h, rng), 1.0};
        const double n0 = u0.coeffs.norm();
        for (double t : {0.1, 0.5, 1.0}) {
            const EvolveResult r = evolve(op, u0, t);
            worst_drift = std::max(worst_drift, std::abs(r.u.coeffs.norm() / n0 - 1.0));
        }
    }
    if (worst_growth > 1e-6)
        out.fail("interior-mode growth " + std::to_string(worst_growth));
    if (worst_drift > 1e-9)
        out.fail("unitary norm drift " + std::to_string(worst_drift));
    out.detail << "50 dissipative symbols: max growth " << worst_growth
               << "; 15 unitary symbols: max drift " << worst_drift << "; "
               << seconds_since(t0) << " s";
    return out;
}

Outcome criterion_8() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1008);
    double worst_red = 0.0, worst_real = 0.0, worst_tilde = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int d = 1 + k % 3;
        const int N = 1 + static_cast<int>(rng() % 3);
        const GaussianGenerator g = random_generator(d, N, rng);

        const ReductionCoefficients co = reduction_coefficients(g);
        const double r1 =
            (2.0 * (co.B * g.Pxth() + co.C * g.Pthth()) - Mat::Identity(N, N)).norm();
        const double r2 = (co.A + 2.0 * (co.B * g.Pxx() + co.C * g.Pthx())).norm();
        worst_red = std::max(worst_red, std::max(r1, r2));

        const ComplexLagrangian lam = lagrangian_of_generator(g);
        const Subspace direct = direct_real_points(lam);
        worst_real = std::max(
            worst_real, projector_distance(real_points(normal_form(lam), true), direct));
        worst_tilde = std::max(
            worst_tilde, projector_distance(direct_real_points(tilde_refine(lam)), direct));
    }
    if (worst_red >= 1e-10) out.fail("reduction residual " + std::to_string(worst_red));
    if (worst_real >= 1e-8) out.fail("real-points distance " + std::to_string(worst_real));
    if (worst_tilde >= 1e-8) out.fail("tilde real-points distance " + std::to_string(worst_tilde));
    const double el = seconds_since(t0);
    if (el >= 30.0) out.fail("runtime " + std::to_string(el) + " s exceeds 30 s");
    out.detail << "100 generators: reduction residual " << worst_red << ", real-points "
               << worst_real << ", tilde " << worst_tilde << ", " << el << " s";
    return out;
}

Outcome criterion_9() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1009);
    std::vector<Mat> symbols = {q_1d(1.0, 0.0),          q_heat(1),
                                Mat(Mat::Identity(2, 2)), q_1d(0.0, kI),
                                q_1d(kI, kI),             q_1d(0.0, cplx(1.0, 1.0)),
                                q_1d(1.0, kI),            q_degenerate(3, 1, true)};
    for (int k = 0; k < 50; ++k)
        symbols.push_back(gwf::testing::random_admissible_Q_matrix(1 + k % 3, rng));

    double worst = 0.0;
    for (const Mat& Q : symbols) {
        const int d = static_cast<int>(Q.rows()) / 2;
        const HamiltonMap fm = hamilton_map(QuadraticHamiltonian::make(d, Q));
        // For the degenerate d=3 rotor the third kernel direction exits at
        // 7th order in t (sigma_4 ~ 6e-11 at t=0.1), below any workable rank
        // threshold, so both routes promote a tolerance-determined spurious
        // direction there; sample where the rank decisions are well posed.
        for (double t : {0.25, 0.5, 1.0}) {
            const Subspace via_bound = kernel_wf_bound(fm, t);
            const Subspace via_param = real_points(normal_form(graph_lagrangian(fm, t)), true);
            worst = std::max(worst, projector_distance(via_bound, via_param));
        }
    }
    if (worst >= 1e-8) out.fail("projector distance " + std::to_string(worst));

    {  // exact-propagation case: the bound is the whole twisted rotation graph
        const HamiltonMap fm = hamilton_map(QuadraticHamiltonian::make(1, q_1d(kI, kI)));
        for (double t : {0.1, 0.5, 1.0, kPi / 2.0}) {
            const Subspace s = kernel_wf_bound(fm, t);
            const double c = std::cos(2.0 * t), sn = std::sin(2.0 * t);
            RVec b1(4), b2(4);
            b1 << c, 1.0, -sn, 0.0;
            b2 << sn, 0.0, c, -1.0;
            if (s.dim() != 2 || !s.contains(RVec(b1.normalized()), 1e-8) ||
                !s.contains(RVec(b2.normalized()), 1e-8))
                out.fail("oscillator bound is not the twisted rotation graph at t=" +
                         std::to_string(t));
        }
    }
    out.detail << "58 symbols x 3 times: worst projector distance " << worst << ", "
               << seconds_since(t0) << " s";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) {
            only = std::atoi(argv[a + 1]);
            ++a;
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > 9) {
        std::fprintf(stderr, "criterion must be 1..9\n");
        return 2;
    }

    Outcome (*runners[9])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                               criterion_6, criterion_7, criterion_8, criterion_9};
    bool all_pass = true;
    for (int k = 1; k <= 9; ++k) {
        if (only != 0 && k != only) continue;
        Outcome o;
        try {
            o = runners[k - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "unexpected exception: " << e.what();
        }
        std::printf("CRITERION %d: %s — %s\n", k, o.pass ? "PASS" : "FAIL",
                    o.detail.str().c_str());
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}

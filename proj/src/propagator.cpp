#include "gaborwf/propagator.hpp"
#include <fftw3.h>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>

namespace gwf {

SampledDistribution SampledDistribution::make(double X, std::vector<cplx> values,
                                              std::string label) {
    SampledDistribution u;
    u.d = 1;
    u.X = X;
    u.n = static_cast<int>(values.size());
    u.values = std::move(values);
    u.label = std::move(label);
    if (u.X <= 0.0)
        throw invariant_violation("SampledDistribution: X must be positive");
    if (u.n < 16 || (u.n & (u.n - 1)) != 0)
        throw invariant_violation("SampledDistribution: n must be a power of two >= 16");
    for (const cplx& v : u.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw invariant_violation("SampledDistribution: non-finite sample");
    return u;
}

double SampledDistribution::norm_l2() const {
    double s = 0.0;
    for (const cplx& v : values) s += std::norm(v);
    return std::sqrt(s * dx());
}

class ExpmCache {
public:
    std::optional<Mat> find(double t) const {
        std::shared_lock lock(mu_);
        auto it = table_.find(t);
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }
    void insert(double t, Mat E) {
        std::unique_lock lock(mu_);
        table_.emplace(t, std::move(E));
    }
private:
    mutable std::shared_mutex mu_;
    std::map<double, Mat> table_;
};

namespace {

// <h_m, x h_n> and <h_m, D h_n> for the orthonormal Hermite functions.
void ladder_matrices(int m, Mat& X0, Mat& P0) {
    X0 = Mat::Zero(m, m);
    P0 = Mat::Zero(m, m);
    for (int n = 0; n + 1 < m; ++n) {
        const double c = std::sqrt((n + 1) / 2.0);
        X0(n, n + 1) = c;       // <h_n, x h_{n+1}>
        X0(n + 1, n) = c;
        P0(n, n + 1) = cplx(0.0, 1.0) * c;   // D = -i d/dx
        P0(n + 1, n) = cplx(0.0, -1.0) * c;
    }
}

} // namespace

GalerkinOperator hermite_matrix(const QuadraticHamiltonian& h, int N_h, double scale) {
    if (h.d != 1)
        throw dimension_error("hermite_matrix: only d = 1 is supported");
    if (N_h < 4)
        throw invariant_violation("hermite_matrix: N_h must be >= 4");
    if (scale <= 0.0)
        throw invariant_violation("hermite_matrix: scale must be positive");

    const int m = N_h + 2;
    Mat X0, P0;
    ladder_matrices(m, X0, P0);
    const cplx a = h.Q(0, 0), b = h.Q(0, 1), c = h.Q(1, 1);
    const Mat big = a * scale * scale * (X0 * X0)
                  + b * (X0 * P0 + P0 * X0)
                  + c / (scale * scale) * (P0 * P0);

    GalerkinOperator op;
    op.h = h;
    op.N_h = N_h;
    op.scale = scale;
    op.M = big.topLeftCorner(N_h, N_h);
    Eigen::SelfAdjointEigenSolver<Mat> es(((op.M + op.M.adjoint()) / 2.0).eval());
    op.dissipativity_margin = es.eigenvalues().minCoeff();
    op.cache = std::make_shared<ExpmCache>();
    return op;
}

EvolveResult evolve(const GalerkinOperator& op, const HermiteRep& u0, double t) {
    if (t < 0.0)
        throw std::domain_error("evolve: t must be >= 0");
    if (u0.N_h != op.N_h || u0.scale != op.scale)
        throw dimension_error("evolve: representation does not match operator");
    Mat E;
    if (auto hit = op.cache->find(t)) {
        E = *hit;
    } else {
        E = expm(Mat(-t * op.M));
        op.cache->insert(t, E);
    }
    EvolveResult out;
    out.u = HermiteRep{op.N_h, E * u0.coeffs, op.scale};
    const double n0 = u0.coeffs.norm();
    if (n0 > 0.0)
        out.eps_trunc = std::max(0.0, out.u.coeffs.norm() / n0 - 1.0);
    return out;
}

namespace {

// rows: h_0..h_{N_h-1} evaluated on the grid, scaled basis h_n(x/s)/sqrt(s)
RMat hermite_table(int N_h, double scale, const SampledDistribution& grid_like) {
    const int n = grid_like.n;
    RMat H(N_h, n);
    const double norm0 = std::pow(std::numbers::pi, -0.25) / std::sqrt(scale);
    for (int j = 0; j < n; ++j) {
        const double y = grid_like.x(j) / scale;
        double hm1 = 0.0;
        double h0 = norm0 * std::exp(-y * y / 2.0);
        H(0, j) = h0;
        for (int k = 1; k < N_h; ++k) {
            const double hk = std::sqrt(2.0 / k) * y * h0 - std::sqrt((k - 1.0) / k) * hm1;
            hm1 = h0;
            h0 = hk;
            H(k, j) = hk;
        }
    }
    return H;
}

} // namespace

HermiteRep hermite_analysis(const SampledDistribution& u, int N_h, double scale) {
    if (u.n < 4 * N_h)
        throw resolution_error("hermite_analysis: grid too coarse for N_h");
    const RMat H = hermite_table(N_h, scale, u);
    Vec coeffs = Vec::Zero(N_h);
    for (int k = 0; k < N_h; ++k) {
        cplx s = 0.0;
        for (int j = 0; j < u.n; ++j) s += H(k, j) * u.values[j];
        coeffs(k) = s * u.dx();
    }
    return HermiteRep{N_h, coeffs, scale};
}

SampledDistribution hermite_synthesis(const HermiteRep& r, double X, int n) {
    std::vector<cplx> vals(n, 0.0);
    SampledDistribution shape;
    shape.X = X;
    shape.n = n;
    const RMat H = hermite_table(r.N_h, r.scale, shape);
    for (int j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < r.N_h; ++k) s += r.coeffs(k) * H(k, j);
        vals[j] = s;
    }
    return SampledDistribution::make(X, std::move(vals), "synthesis");
}

namespace {

void fft_inplace(std::vector<cplx>& a, int sign) {
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(a.size()),
                                      reinterpret_cast<fftw_complex*>(a.data()),
                                      reinterpret_cast<fftw_complex*>(a.data()),
                                      sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

// frequency of DFT bin m on a grid of spacing dx (standard fftfreq layout)
double fft_freq(int m, int n, double dx) {
    const int mm = (m < n / 2) ? m : m - n;
    return 2.0 * std::numbers::pi * mm / (n * dx);
}

SampledDistribution apply_fourier_multiplier(const SampledDistribution& u, cplx c, double t) {
    std::vector<cplx> a = u.values;
    fft_inplace(a, FFTW_FORWARD);
    const int n = u.n;
    for (int m = 0; m < n; ++m) {
        const double xi = fft_freq(m, n, u.dx());
        a[m] *= std::exp(-t * c * xi * xi) / static_cast<double>(n);
    }
    fft_inplace(a, FFTW_BACKWARD);
    return SampledDistribution::make(u.X, std::move(a), u.label);
}

// Sums S_m = sum_j v_j exp(-i c x_m x_j) on the shared grid, via Bluestein.
std::vector<cplx> chirp_transform(const SampledDistribution& grid, const std::vector<cplx>& v,
                                  double c) {
    const int n = grid.n;
    const double dx = grid.dx();
    const double X = grid.X;
    // x_m x_j = X^2 - X dx (m + j) + dx^2 m j
    std::vector<cplx> y(v.size());
    const cplx i1(0.0, 1.0);
    for (int j = 0; j < n; ++j)
        y[j] = v[j] * std::exp(i1 * c * (X * dx * j)) *
               std::exp(-i1 * c * (dx * dx * 0.5) * double(j) * double(j));
    int N = 1;
    while (N < 2 * n - 1) N <<= 1;
    std::vector<cplx> ypad(N, 0.0), ker(N, 0.0);
    std::copy(y.begin(), y.end(), ypad.begin());
    for (int k = -(n - 1); k <= n - 1; ++k) {
        const cplx w = std::exp(i1 * c * (dx * dx * 0.5) * double(k) * double(k));
        ker[(k + N) % N] = w;
    }
    fft_inplace(ypad, FFTW_FORWARD);
    fft_inplace(ker, FFTW_FORWARD);
    for (int k = 0; k < N; ++k) ypad[k] *= ker[k] / static_cast<double>(N);
    fft_inplace(ypad, FFTW_BACKWARD);
    std::vector<cplx> out(n);
    const cplx pre = std::exp(-i1 * c * X * X);
    for (int m = 0; m < n; ++m)
        out[m] = pre * std::exp(i1 * c * (X * dx * m)) *
                 std::exp(-i1 * c * (dx * dx * 0.5) * double(m) * double(m)) * ypad[m];
    return out;
}

// e^{-t q^w} for q = i gamma (x^2 + xi^2): fractional Fourier transform of
// angle alpha = 2 gamma t including the e^{-i alpha/2} ground-state phase.
SampledDistribution apply_harmonic_rotation(const SampledDistribution& u, double gamma, double t) {
    const double alpha_raw = 2.0 * gamma * t;
    const double two_pi = 2.0 * std::numbers::pi;
    double alpha = std::fmod(alpha_raw, two_pi);
    if (alpha < 0.0) alpha += two_pi;
    const cplx i1(0.0, 1.0);
    const cplx ground_phase = std::exp(-i1 * (alpha_raw / 2.0));

    const int n = u.n;
    if (std::abs(std::sin(alpha)) < 1e-9) {
        std::vector<cplx> vals(n);
        const bool flip = std::abs(alpha - std::numbers::pi) < 1.0;
        for (int j = 0; j < n; ++j) {
            const int src = flip ? (n - j) % n : j;
            vals[j] = ground_phase * u.values[src];
        }
        // near-degenerate residual rotation is dropped; threshold keeps the
        // phase error below ~1e-9 * X^2
        return SampledDistribution::make(u.X, std::move(vals), u.label);
    }

    const double cot = std::cos(alpha) / std::sin(alpha);
    const double csc = 1.0 / std::sin(alpha);
    const cplx C = std::sqrt((1.0 - i1 * cot) / (2.0 * std::numbers::pi));

    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j) {
        const double xj = u.x(j);
        v[j] = u.values[j] * std::exp(i1 * (cot * xj * xj / 2.0)) * u.dx();
    }
    std::vector<cplx> w = chirp_transform(u, v, csc);
    std::vector<cplx> vals(n);
    for (int m = 0; m < n; ++m) {
        const double xm = u.x(m);
        vals[m] = ground_phase * C * std::exp(i1 * (cot * xm * xm / 2.0)) * w[m];
    }
    return SampledDistribution::make(u.X, std::move(vals), u.label);
}

} // namespace

std::string fast_path_pattern(const QuadraticHamiltonian& h) {
    if (h.d != 1) return "";
    const double nq = h.Q.norm();
    const double tol = 1e-12 * std::max(1.0, nq);
    const cplx a = h.Q(0, 0), b = h.Q(0, 1), c = h.Q(1, 1);
    if (nq <= tol) return "identity";
    if (std::abs(b) <= tol && std::abs(c) <= tol) return "multiplication";
    if (std::abs(a) <= tol && std::abs(b) <= tol) return "fourier_multiplier";
    if (std::abs(b) <= tol && std::abs(a - c) <= tol &&
        std::abs(a.real()) <= tol && std::abs(a.imag()) > tol)
        return "harmonic_rotation";
    return "";
}

std::optional<SampledDistribution> fast_path(const QuadraticHamiltonian& h,
                                             const SampledDistribution& u0, double t) {
    if (t < 0.0)
        throw std::domain_error("fast_path: t must be >= 0");
    const std::string pattern = fast_path_pattern(h);
    if (pattern.empty() || u0.d != 1) return std::nullopt;
    if (pattern == "identity") return u0;
    if (pattern == "multiplication") {
        const cplx a = h.Q(0, 0);
        std::vector<cplx> vals(u0.values.size());
        for (int j = 0; j < u0.n; ++j) {
            const double xj = u0.x(j);
            vals[j] = u0.values[j] * std::exp(-t * a * xj * xj);
        }
        return SampledDistribution::make(u0.X, std::move(vals), u0.label);
    }
    if (pattern == "fourier_multiplier")
        return apply_fourier_multiplier(u0, h.Q(1, 1), t);
    return apply_harmonic_rotation(u0, h.Q(0, 0).imag(), t);
}

} // namespace gwf

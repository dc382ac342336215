#include "gaborwf/wf_detector.hpp"
#include <fftw3.h>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace gwf {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_budget(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_budget() {
    int n = g_threads.load();
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

namespace {

void parallel_for(int count, const std::function<void(int)>& body) {
    const int nt = std::min(thread_budget(), count);
    if (nt <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

RVec FlaggedDirection::direction() const {
    RVec d(2);
    d << std::cos(theta), std::sin(theta);
    return d;
}

Spectrogram stft(const SampledDistribution& u, double window_scale) {
    if (window_scale <= 0.0)
        throw invariant_violation("stft: window_scale must be positive");
    if (window_scale > u.X / 4.0)
        throw window_error("stft: window wider than X/4 sees the periodic edges");

    const int n = u.n;
    const double dx = u.dx();
    const double s = window_scale;

    // Gaussian window at every offset (k - j) * dx, |offset index| <= n-1.
    std::vector<double> w(2 * n - 1);
    const double amp = std::pow(std::numbers::pi * s * s, -0.25);
    for (int i = 0; i < 2 * n - 1; ++i) {
        const double y = dx * (i - (n - 1));
        w[i] = amp * std::exp(-y * y / (2.0 * s * s));
    }

    Spectrogram sp;
    sp.X = u.X;
    sp.Xi = std::numbers::pi * n / (2.0 * u.X);
    sp.n = n;
    sp.window_scale = s;
    sp.mags.resize(n, n);

    fftw_complex* scratch = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);

    parallel_for(n, [&](int j) {
        fftw_complex* buf = fftw_alloc_complex(n);
        for (int k = 0; k < n; ++k) {
            // (-1)^k modulation puts xi = 0 at row n/2
            const double sgn = (k & 1) ? -1.0 : 1.0;
            const cplx v = u.values[k] * (w[n - 1 - j + k] * sgn);
            buf[k][0] = v.real();
            buf[k][1] = v.imag();
        }
        fftw_execute_dft(plan, buf, buf);
        for (int m = 0; m < n; ++m)
            sp.mags(m, j) = dx * std::hypot(buf[m][0], buf[m][1]);
        fftw_free(buf);
    });

    fftw_destroy_plan(plan);
    fftw_free(scratch);
    return sp;
}

namespace {

// LSQ fit of log(profile) vs log(radius) over the populated shells; cells no
// grid point landed in are missing data, not measurements, and fewer than 4
// populated shells is not enough to call a decay rate.  Profiles flatter than
// range_floor in log get confidence 1: a genuinely flat profile carries no
// regression residual to distrust.
std::pair<double, double> slope_r2(const std::vector<double>& prof,
                                   const std::vector<double>& radii, double range_floor) {
    std::vector<double> y, x;
    for (size_t i = 0; i < prof.size(); ++i) {
        if (prof[i] <= 0.0) continue;
        y.push_back(std::log(prof[i]));
        x.push_back(std::log(radii[i]));
    }
    const int k = static_cast<int>(y.size());
    if (k < 4) return {0.0, 0.0};
    double mx = 0, my = 0;
    for (int i = 0; i < k; ++i) { mx += x[i]; my += y[i]; }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double ymin = *std::min_element(y.begin(), y.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    if (ymax - ymin < range_floor) return {slope, 1.0};
    const double ss_res = syy - sxy * sxy / sxx;
    double r2 = 1.0 - ss_res / syy;
    return {slope, std::clamp(r2, 0.0, 1.0)};
}

std::vector<double> shell_radii_for(const Spectrogram& sp, const DetectorConfig& cfg) {
    const double rmax = cfg.rmax_frac * std::min(sp.X, sp.Xi);
    std::vector<double> radii(cfg.n_shells);
    for (int i = 0; i < cfg.n_shells; ++i)
        radii[i] = rmax / std::pow(cfg.shell_ratio, cfg.n_shells - 1 - i);
    return radii;
}

} // namespace

std::pair<double, double> shell_decay(const Spectrogram& sp, double dir_x, double dir_xi,
                                      double half_angle, const std::vector<double>& radii) {
    if (radii.size() < 4)
        throw invariant_violation("shell_decay: need at least 4 shells");
    if (!std::is_sorted(radii.begin(), radii.end()) || radii.front() <= 0.0)
        throw invariant_violation("shell_decay: radii must be positive ascending");
    if (radii.back() > std::min(sp.X, sp.Xi))
        throw std::out_of_range("shell_decay: cone exits the grid at the largest radius");

    const double theta0 = std::atan2(dir_xi, dir_x);
    const double ratio = radii.size() > 1 ? radii[1] / radii[0] : 2.0;
    const int k = static_cast<int>(radii.size());
    std::vector<double> prof(k, 0.0);

    const int n = sp.n;
    for (int j = 0; j < n; ++j) {
        const double x = sp.x_of(j);
        for (int m = 0; m < n; ++m) {
            const double xi = sp.xi_of(m);
            const double r = std::hypot(x, xi);
            if (r <= radii[0] / ratio || r > radii.back()) continue;
            double dth = std::remainder(std::atan2(xi, x) - theta0, 2.0 * std::numbers::pi);
            if (std::abs(dth) > half_angle) continue;
            int i = 0;
            while (r > radii[i]) ++i;
            if (r > radii[i] / ratio)
                prof[i] = std::max(prof[i], sp.mags(m, j));
        }
    }
    return slope_r2(prof, radii, 0.15);
}

WFEstimate estimate_wf(const Spectrogram& sp, const DetectorConfig& cfg) {
    if (cfg.n_shells < 4)
        throw invariant_violation("estimate_wf: need at least 4 shells");
    const std::vector<double> radii = shell_radii_for(sp, cfg);
    const double grid_step = std::max(2.0 * sp.X / sp.n, std::numbers::pi / sp.X);
    if (radii.front() < 2.0 * grid_step)
        throw resolution_error("estimate_wf: grid does not resolve the innermost shell");

    const int nd = cfg.n_dirs;
    const int ns = cfg.n_shells;
    const double ratio = radii[1] / radii[0];
    const double two_pi = 2.0 * std::numbers::pi;

    // max |V| per (angular bin, shell)
    RMat table = RMat::Zero(nd, ns);
    const int n = sp.n;
    for (int j = 0; j < n; ++j) {
        const double x = sp.x_of(j);
        for (int m = 0; m < n; ++m) {
            const double xi = sp.xi_of(m);
            const double r = std::hypot(x, xi);
            if (r <= radii[0] / ratio || r > radii.back()) continue;
            int i = 0;
            while (r > radii[i]) ++i;
            if (r <= radii[i] / ratio) continue;
            double th = std::fmod(std::atan2(xi, x), two_pi);
            if (th < 0.0) th += two_pi;
            int b = static_cast<int>(th / two_pi * nd);
            b = std::clamp(b, 0, nd - 1);
            table(b, i) = std::max(table(b, i), sp.mags(m, j));
        }
    }

    WFEstimate est;
    est.n_det = cfg.n_det;
    est.step_deg = 360.0 / nd;
    est.shell_radii = radii;
    est.shell_table = table;
    est.per_direction.resize(nd);

    const int reach = static_cast<int>(std::lround(cfg.half_angle_deg / est.step_deg));
    parallel_for(nd, [&](int b) {
        std::vector<double> prof(ns, 0.0);
        for (int off = -reach; off <= reach; ++off) {
            const int bb = ((b + off) % nd + nd) % nd;
            for (int i = 0; i < ns; ++i) prof[i] = std::max(prof[i], table(bb, i));
        }
        DirectionReading r;
        if (*std::max_element(prof.begin(), prof.end()) > 0.0) {
            auto [slope, conf] = slope_r2(prof, radii, cfg.range_floor);
            r.exponent = slope;
            r.confidence = conf;
            r.flagged = slope > -cfg.n_det && conf > cfg.conf_min;
        }
        est.per_direction[b] = r;
    });

    const double step_rad = two_pi / nd;
    for (int b = 0; b < nd; ++b)
        if (est.per_direction[b].flagged)
            est.flagged.push_back({(b + 0.5) * step_rad, est.per_direction[b].exponent,
                                   est.per_direction[b].confidence});

    // group flagged bins into runs, merging gaps of <= merge_gap + 1 bins
    std::vector<std::pair<int, int>> runs;
    for (int b = 0; b < nd; ++b) {
        if (!est.per_direction[b].flagged) continue;
        if (!runs.empty() && b - runs.back().second <= cfg.merge_gap + 1)
            runs.back().second = b;
        else
            runs.push_back({b, b});
    }
    if (runs.size() > 1 && runs.front().first + nd - runs.back().second <= cfg.merge_gap + 1) {
        runs.front().first = runs.back().first - nd;
        runs.pop_back();
    }
    for (auto [a, b] : runs) {
        const double th0 = (a + 0.5) * est.step_deg;
        const double th1 = (b + 0.5) * est.step_deg;
        CapEstimate cap;
        cap.center_deg = std::fmod((th0 + th1) / 2.0 + 360.0, 360.0);
        cap.half_width_deg = (th1 - th0) / 2.0;
        cap.worst_exponent = -std::numeric_limits<double>::infinity();
        for (int bb = a; bb <= b; ++bb) {
            const int idx = (bb % nd + nd) % nd;
            if (est.per_direction[idx].flagged)
                cap.worst_exponent = std::max(cap.worst_exponent, est.per_direction[idx].exponent);
        }
        est.caps.push_back(cap);
    }
    return est;
}

WFEstimate estimate_wf(const SampledDistribution& u, const DetectorConfig& cfg) {
    return estimate_wf(stft(u, cfg.window_scale), cfg);
}

ConicSet to_conic(const WFEstimate& est) {
    ConicSet c;
    c.ambient_dim = 2;
    const double deg = std::numbers::pi / 180.0;
    for (const CapEstimate& cap : est.caps) {
        RVec d(2);
        d << std::cos(cap.center_deg * deg), std::sin(cap.center_deg * deg);
        // the run covers half a bin beyond each end bin's center
        c.patches.push_back({d, (cap.half_width_deg + est.step_deg / 2.0) * deg});
    }
    return c;
}

} // namespace gwf

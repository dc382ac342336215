#pragma once
#include "gaborwf/propagation.hpp"
#include "gaborwf/propagator.hpp"
#include <numbers>
#include <utility>

namespace gwf {

// Thread budget for the parallel regions (spectrogram columns, direction
// sweeps).  0 = hardware concurrency.
void set_thread_budget(int n);
int thread_budget();

// |V_phi u| on the phase-space grid [-X, X] x [-Xi, Xi], Xi = pi*n/(2X).
// Row m is the frequency xi = (m - n/2) * pi / X, column j the position
// x = -X + j * (2X/n).
struct Spectrogram {
    double X = 0.0;
    double Xi = 0.0;
    int n = 0;
    double window_scale = 1.0;
    RMat mags;

    double x_of(int j) const { return -X + (2.0 * X / n) * j; }
    double xi_of(int m) const { return (m - n / 2) * (std::numbers::pi / X); }
};

// Windowed DFT column by column with the L^2-normalized Gaussian window of
// the given scale.  The grid is treated as periodic, so u should live inside
// [-X/2, X/2] for edge-clean magnitudes.
Spectrogram stft(const SampledDistribution& u, double window_scale = 1.0);

// Least-squares slope of log(max over cone-and-shell of |V|) against
// log(radius), scanning the stored magnitudes directly.  Returns
// (exponent, confidence = R^2).  direction need not be normalized.
std::pair<double, double> shell_decay(const Spectrogram& sp, double dir_x, double dir_xi,
                                      double half_angle, const std::vector<double>& radii);

struct DetectorConfig {
    int n_dirs = 720;
    int n_shells = 7;
    double shell_ratio = std::numbers::sqrt2;
    double rmax_frac = 0.6;       // shells end at rmax_frac * min(X, Xi)
    double half_angle_deg = 3.0;  // cone half-angle of the per-direction scan
    double n_det = 3.0;           // flag when exponent > -n_det
    double conf_min = 0.8;
    double range_floor = 0.15;    // log-range below which a profile counts as flat
    int merge_gap = 1;            // flagged runs closer than this many bins merge
    double window_scale = 1.0;
};

struct DirectionReading {
    double exponent = 0.0;
    double confidence = 0.0;
    bool flagged = false;
};

struct FlaggedDirection {
    double theta = 0.0;  // radians
    double exponent = 0.0;
    double confidence = 0.0;
    RVec direction() const;
};

struct CapEstimate {
    double center_deg = 0.0;
    double half_width_deg = 0.0;
    double worst_exponent = 0.0;
};

struct WFEstimate {
    double n_det = 3.0;
    double step_deg = 0.5;
    std::vector<double> shell_radii;
    RMat shell_table;  // max |V| per (angular bin, shell), the decay curves
    std::vector<DirectionReading> per_direction;
    std::vector<FlaggedDirection> flagged;
    std::vector<CapEstimate> caps;

    bool empty() const { return flagged.empty(); }
};

WFEstimate estimate_wf(const Spectrogram& sp, const DetectorConfig& cfg = {});
WFEstimate estimate_wf(const SampledDistribution& u, const DetectorConfig& cfg = {});

// Flagged caps as a conic subset of T*R \ 0, for comparison against the
// algebraic propagation bounds.
ConicSet to_conic(const WFEstimate& est);

} // namespace gwf

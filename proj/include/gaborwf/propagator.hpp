#pragma once
#include "gaborwf/hamiltonian.hpp"
#include <memory>
#include <optional>
#include <string>

namespace gwf {

// Complex samples on the uniform grid x_j = -X + j * (2X/n).
struct SampledDistribution {
    int d = 1;
    double X = 0.0;
    int n = 0;
    std::vector<cplx> values;
    std::string label;

    static SampledDistribution make(double X, std::vector<cplx> values, std::string label = "");
    double dx() const { return 2.0 * X / n; }
    double x(int j) const { return -X + dx() * j; }
    double norm_l2() const;
};

struct HermiteRep {
    int N_h = 4;
    Vec coeffs;
    double scale = 1.0;
};

class ExpmCache;

// Matrix of q^w in the orthonormal Hermite basis (d = 1), assembled from the
// exact tridiagonal x and D matrices two modes above the truncation so every
// retained entry is exact; the compression is therefore dissipative on all
// coefficient vectors, not just interior ones.
struct GalerkinOperator {
    QuadraticHamiltonian h;
    int N_h = 4;
    double scale = 1.0;
    Mat M;
    double dissipativity_margin = 0.0;
    std::shared_ptr<ExpmCache> cache;
};

GalerkinOperator hermite_matrix(const QuadraticHamiltonian& h, int N_h, double scale);

struct EvolveResult {
    HermiteRep u;
    double eps_trunc = 0.0;  // max(0, ||out|| / ||in|| - 1)
};

EvolveResult evolve(const GalerkinOperator& op, const HermiteRep& u0, double t);

// Quadrature projection onto the Hermite basis; requires n >= 4 * N_h.
HermiteRep hermite_analysis(const SampledDistribution& u, int N_h, double scale);
SampledDistribution hermite_synthesis(const HermiteRep& r, double X, int n);

// Closed-form propagators for the recognizable Q patterns:
// multiplication (Q = [[a,0],[0,0]]), Fourier multiplier (Q = [[0,0],[0,c]]),
// harmonic rotation (Q = i*gamma*I).  Returns nullopt when Q matches none,
// signalling the Galerkin route.
std::optional<SampledDistribution> fast_path(const QuadraticHamiltonian& h,
                                             const SampledDistribution& u0, double t);

// Name of the matched fast-path pattern, for reports: "identity",
// "multiplication", "fourier_multiplier", "harmonic_rotation", or "" (none).
std::string fast_path_pattern(const QuadraticHamiltonian& h);

} // namespace gwf

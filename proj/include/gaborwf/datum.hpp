#pragma once
#include "gaborwf/propagator.hpp"

namespace gwf {

// C^infinity bump machinery: smooth_step rises 0 -> 1 on [0, 1].
double smooth_step(double t);
// 1 on [-a, a], 0 outside [-b, b], smooth in between.
double taper(double x, double a, double b);

SampledDistribution datum_gaussian(double X, int n);
SampledDistribution datum_dirac(double X, int n);
SampledDistribution datum_monomial(int k, double X, int n);
SampledDistribution datum_chirp(double alpha, double X, int n);
SampledDistribution datum_heaviside(double X, int n);
// e^{i scale x^p}, supported where the instantaneous frequency scale*p*x^{p-1}
// stays between the shell band and 0.9 * Nyquist; scale <= 0 picks a default.
SampledDistribution datum_power_phase(int p, double scale, double X, int n);
SampledDistribution datum_airy_fourier(double c, double X, int n);
SampledDistribution datum_from_samples(const std::string& path, double X);

// Parses "gaussian", "dirac", "heaviside", "monomial(k)", "chirp(a)",
// "power_phase(p[, scale])", "airy_fourier([c])".
SampledDistribution make_datum(const std::string& expr, double X, int n);

} // namespace gwf

#pragma once
#include "gaborwf/hamiltonian.hpp"
#include <optional>

namespace gwf {

// p(x, theta) = <(x,theta), P (x,theta)> with Im P >= 0 and independent
// theta-derivative rows; generates a Gaussian tempered distribution.
struct GaussianGenerator {
    int d = 1;
    int N = 0;
    Mat P;  // (d+N) x (d+N) complex symmetric

    Mat Pxx() const { return P.topLeftCorner(d, d); }
    Mat Pxth() const { return P.topRightCorner(d, N); }
    Mat Pthx() const { return P.bottomLeftCorner(N, d); }
    Mat Pthth() const { return P.bottomRightCorner(N, N); }
};

enum class GeneratorViolation { None, NotSymmetric, ImPartNotPSD, ThetaRowsDependent };

const char* to_string(GeneratorViolation v);

struct GeneratorResult {
    std::optional<GaussianGenerator> gen;
    GeneratorViolation violation = GeneratorViolation::None;
    bool ok() const { return violation == GeneratorViolation::None; }
};

GeneratorResult validate_generator(const Mat& P, int d, int N);

struct ReductionCoefficients {
    Mat A;  // N x d
    Mat B;  // N x d
    Mat C;  // N x N
};

// Solves theta = A x + B p_x'(x,theta) + C p_theta'(x,theta) identically:
// 2 [B C] [P_xth; P_thth] = I with [B C] the minimum-norm left inverse.
ReductionCoefficients reduction_coefficients(const GaussianGenerator& g);

// A complex Lagrangian plane spanned by the columns of Z (2n x k).
// Constructors in this module produce full-rank (k = n) validated spans;
// tilde_refine may return fewer columns.
struct ComplexLagrangian {
    int n = 1;   // ambient dim is 2n
    Mat Z;

    int rank_cols() const { return static_cast<int>(Z.cols()); }
    Mat projector() const;
};

double complex_projector_distance(const ComplexLagrangian& a, const ComplexLagrangian& b);

// Hermitian form whose positive semidefiniteness is the positivity of the
// plane: i * conj(Z)^T J^T Z  (equals the matrix of i sigma(conj X, X)).
Mat positivity_matrix(const ComplexLagrangian& lam);
double lagrangian_residual(const ComplexLagrangian& lam);  // ||Z^T J Z||
bool is_positive_lagrangian(const ComplexLagrangian& lam, double tol = 1e-10);

// lambda = {(x, p_x'(x,theta)) : p_theta'(x,theta) = 0} over C.
ComplexLagrangian lagrangian_of_generator(const GaussianGenerator& g);

// Parametrization lambda = {(x, 2(R_r + i R_i)x + L theta) : L^T x = 0}.
struct LagrangianParam {
    int d = 1;
    int N = 0;
    RMat R_r;      // real symmetric d x d
    RMat R_i;      // real symmetric PSD d x d
    RMat L;        // d x N, orthonormal columns
    int k = 0;     // rank of the first-coordinate projection
    double rank_gap = 0.0;  // sigma_k / sigma_{k+1} diagnostic
};

// Constructive normal form of a positive Lagrangian.
LagrangianParam normal_form(const ComplexLagrangian& lam);

// Real subspace {(x, 2 R_r x + L theta) : L^T x = 0}; with tilde = true the
// extra constraint R_i x = 0 is imposed, giving exactly lambda intersect T*R^d.
Subspace real_points(const LagrangianParam& param, bool tilde = false);

// {X in lambda : sigma(conj X, X) = 0} = Z * Ker(positivity matrix).
ComplexLagrangian tilde_refine(const ComplexLagrangian& lam);

// Flip the sign of the eta block of a plane in ambient (x, y, xi, eta) space.
ComplexLagrangian twist(const ComplexLagrangian& lam, int d);

// Twisted graph {(x, y, xi, -eta) : (x,xi) = e^{-2itF}(y,eta)}, ambient 4d.
ComplexLagrangian graph_lagrangian(const HamiltonMap& fm, double t);

// Real points of the twisted graph, computed directly from Ker_R(Im e^{-2itF}).
Subspace kernel_wf_bound(const HamiltonMap& fm, double t);

} // namespace gwf

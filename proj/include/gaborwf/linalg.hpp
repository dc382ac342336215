#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>
#include "gaborwf/errors.hpp"

namespace gwf {

using cplx = std::complex<double>;
using Mat  = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Vec  = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Standard symplectic matrix [[0, I], [-I, 0]] of size 2d.
RMat symplectic_J(int d);

// Matrix exponential. Eigendecomposition when the eigenvector basis is
// well-conditioned, scaling-and-squaring Pade otherwise.
Mat expm(const Mat& A);

// A real linear subspace, canonicalized by its orthogonal projector.
struct Subspace {
    int ambient_dim = 0;
    RMat basis;  // ambient_dim x k, orthonormal columns
    double tol = 1e-9;

    int dim() const { return static_cast<int>(basis.cols()); }
    RMat projector() const { return basis * basis.transpose(); }
    bool contains(const RVec& v, double tolerance) const;
};

Subspace full_space(int n);
Subspace zero_space(int n);

// Spectral-norm distance between orthogonal projectors.
double projector_distance(const Subspace& a, const Subspace& b);

// Orthonormal basis of {v real : ||Av|| <= tol * ||A|| * ||v||}.
// Columns ordered by descending singular value of the complement.
Subspace nullspace(const RMat& A, double tol = 1e-9);

// Kernel over the reals of a complex matrix: real null space of [Re A; Im A].
Subspace nullspace(const Mat& A, double tol = 1e-9);

// Complex kernel, returned as a matrix with orthonormal columns.
Mat complex_nullspace(const Mat& A, double tol = 1e-9);

Subspace intersect(const std::vector<Subspace>& subspaces);

// True iff the Hermitian matrix H has min eigenvalue >= -tol * ||H||.
bool is_psd(const Mat& H, double tol);
bool is_psd(const RMat& H, double tol);

// ||M^T J M - J|| (transpose, not conjugate: the form is bilinear).
double symplectic_residual(const Mat& M);

// min over samples X of i(sigma(conj(MX), MX) - sigma(conj(X), X))
// with M = expm(-2itF); nonnegative when F comes from an admissible Q.
double graph_positivity_defect(const Mat& F, double t, const std::vector<Vec>& samples);

} // namespace gwf

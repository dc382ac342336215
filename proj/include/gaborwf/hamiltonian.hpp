#pragma once
#include "gaborwf/linalg.hpp"
#include <vector>

namespace gwf {

// q(X) = <X, QX> on phase space, Q complex symmetric with Re Q >= 0.
struct QuadraticHamiltonian {
    int d = 1;
    Mat Q;

    // Validates symmetry (1e-12 relative) and positive semidefiniteness of
    // Re Q (1e-10); throws invariant_violation naming the failed condition.
    static QuadraticHamiltonian make(int d, Mat Q);

    cplx eval(const Vec& X) const { return X.transpose() * Q * X; }
    double eval_re(const RVec& X) const { return X.transpose() * Q.real() * X; }
};

struct HamiltonMap {
    int d = 1;
    Mat F;       // F = J Q
    RMat F_re;
    RMat F_im;
};

struct SingularSpaceResult {
    Subspace S;
    int j_max_used = 0;
    std::vector<int> kernel_dims;  // dim Ker[Re F (Im F)^j] per j
};

HamiltonMap hamilton_map(const QuadraticHamiltonian& h);

// S = null space over the reals of the stack [Re F; Re F Im F; ...;
// Re F (Im F)^(2d-1)].  Result satisfies (Re F) S = 0 and (Im F) S <= S.
SingularSpaceResult singular_space(const HamiltonMap& fm, double tol = 1e-9);

// || [Re F, Im F] ||; zero iff the real and imaginary Hamilton flows commute.
double normality_defect(const HamiltonMap& fm);

// Dynamical membership oracle: Re q vanishes along the Im-q flow through X.
bool flow_vanishing_membership(const QuadraticHamiltonian& h, const RVec& X,
                               const std::vector<double>& t_grid, double tol = 1e-9);

// S as the intersection over sampled s in (0, t] of Ker_R(Im e^{2isF}).
Subspace singular_space_via_flow_kernels(const HamiltonMap& fm, double t,
                                         int n_samples, double tol = 1e-9);

} // namespace gwf

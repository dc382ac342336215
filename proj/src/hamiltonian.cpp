#include "gaborwf/hamiltonian.hpp"

namespace gwf {

QuadraticHamiltonian QuadraticHamiltonian::make(int d, Mat Q) {
    if (d < 1)
        throw dimension_error("QuadraticHamiltonian: d must be >= 1");
    if (Q.rows() != 2 * d || Q.cols() != 2 * d)
        throw dimension_error("QuadraticHamiltonian: Q must be 2d x 2d");
    const double nq = Q.norm();
    if (nq > 0.0 && (Q - Q.transpose()).norm() >= 1e-12 * nq)
        throw invariant_violation("QuadraticHamiltonian: Q is not symmetric");
    if (!is_psd(Mat(Q.real().cast<cplx>()), 1e-10))
        throw invariant_violation("QuadraticHamiltonian: Re Q is not positive semidefinite");
    return QuadraticHamiltonian{d, std::move(Q)};
}

HamiltonMap hamilton_map(const QuadraticHamiltonian& h) {
    const Mat F = symplectic_J(h.d).cast<cplx>() * h.Q;
    return HamiltonMap{h.d, F, F.real(), F.imag()};
}

SingularSpaceResult singular_space(const HamiltonMap& fm, double tol) {
    const int n = 2 * fm.d;
    SingularSpaceResult out;
    out.j_max_used = n - 1;
    RMat stacked(n * n, n);
    RMat impow = RMat::Identity(n, n);
    for (int j = 0; j < n; ++j) {
        const RMat block = fm.F_re * impow;
        stacked.middleRows(j * n, n) = block;
        out.kernel_dims.push_back(nullspace(block, tol).dim());
        impow = impow * fm.F_im;
    }
    out.S = nullspace(stacked, tol);
    return out;
}

double normality_defect(const HamiltonMap& fm) {
    return (fm.F_re * fm.F_im - fm.F_im * fm.F_re).norm();
}

bool flow_vanishing_membership(const QuadraticHamiltonian& h, const RVec& X,
                               const std::vector<double>& t_grid, double tol) {
    if (static_cast<int>(t_grid.size()) < 4 * h.d + 1)
        throw dimension_error("flow_vanishing_membership: need at least 4d+1 sample times");
    const HamiltonMap fm = hamilton_map(h);
    const double bound = tol * (1.0 + X.squaredNorm());
    for (double s : t_grid) {
        const Mat flow = expm(Mat((2.0 * s * fm.F_im).cast<cplx>()));
        const RVec Y = flow.real() * X;
        if (h.eval_re(Y) > bound) return false;
    }
    return true;
}

Subspace singular_space_via_flow_kernels(const HamiltonMap& fm, double t,
                                         int n_samples, double tol) {
    if (t <= 0.0)
        throw std::domain_error("singular_space_via_flow_kernels: t must be > 0");
    if (n_samples < 4 * fm.d + 1)
        throw dimension_error("singular_space_via_flow_kernels: need at least 4d+1 samples");
    std::vector<Subspace> kernels;
    for (int j = 1; j <= n_samples; ++j) {
        const double s = t * static_cast<double>(j) / n_samples;
        const Mat flow = expm(cplx(0.0, 2.0 * s) * fm.F);
        kernels.push_back(nullspace(RMat(flow.imag()), tol));
    }
    return intersect(kernels);
}

} // namespace gwf

#include "gaborwf/linalg.hpp"
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>

namespace gwf {

RMat symplectic_J(int d) {
    RMat J = RMat::Zero(2 * d, 2 * d);
    J.topRightCorner(d, d) = RMat::Identity(d, d);
    J.bottomLeftCorner(d, d) = -RMat::Identity(d, d);
    return J;
}

Mat expm(const Mat& A) {
    if (A.rows() != A.cols())
        throw dimension_error("expm: matrix not square");
    const auto n = A.rows();
    if (n == 0) return Mat(0, 0);
    if (A.norm() == 0.0) return Mat::Identity(n, n);

    Eigen::ComplexEigenSolver<Mat> es(A);
    if (es.info() == Eigen::Success) {
        const Mat& V = es.eigenvectors();
        Eigen::JacobiSVD<Mat> svd(V);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        const double smax = svd.singularValues()(0);
        if (smin > 0.0 && smax / smin < 1e8) {
            Vec ev = es.eigenvalues().array().exp();
            return V * ev.asDiagonal() * V.inverse();
        }
    }
    return A.exp();  // scaling-and-squaring Pade fallback
}

bool Subspace::contains(const RVec& v, double tolerance) const {
    const double nv = v.norm();
    if (nv == 0.0) return true;
    const RVec res = v - basis * (basis.transpose() * v);
    return res.norm() <= tolerance * nv;
}

Subspace full_space(int n) {
    return Subspace{n, RMat::Identity(n, n), 1e-9};
}

Subspace zero_space(int n) {
    return Subspace{n, RMat(n, 0), 1e-9};
}

double projector_distance(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim != b.ambient_dim)
        throw dimension_error("projector_distance: ambient dims differ");
    const RMat D = a.projector() - b.projector();
    if (D.size() == 0) return 0.0;
    Eigen::JacobiSVD<RMat> svd(D);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

namespace {

Subspace nullspace_impl(const RMat& A, int ambient, double tol) {
    if (A.rows() == 0 || A.norm() == 0.0)
        return full_space(ambient);
    Eigen::JacobiSVD<RMat> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * smax) ++rank;
    Subspace out;
    out.ambient_dim = ambient;
    out.tol = tol;
    out.basis = svd.matrixV().rightCols(ambient - rank);
    return out;
}

} // namespace

Subspace nullspace(const RMat& A, double tol) {
    return nullspace_impl(A, static_cast<int>(A.cols()), tol);
}

Subspace nullspace(const Mat& A, double tol) {
    RMat stacked(2 * A.rows(), A.cols());
    stacked << A.real(), A.imag();
    return nullspace_impl(stacked, static_cast<int>(A.cols()), tol);
}

Mat complex_nullspace(const Mat& A, double tol) {
    const auto ambient = A.cols();
    if (A.rows() == 0 || A.norm() == 0.0)
        return Mat::Identity(ambient, ambient);
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * smax) ++rank;
    return svd.matrixV().rightCols(ambient - rank);
}

Subspace intersect(const std::vector<Subspace>& subspaces) {
    if (subspaces.empty())
        throw dimension_error("intersect: empty list");
    const int n = subspaces.front().ambient_dim;
    double tol = 0.0;
    for (const auto& s : subspaces) {
        if (s.ambient_dim != n)
            throw dimension_error("intersect: mismatched ambient dims");
        tol = std::max(tol, s.tol);
    }
    RMat stacked(static_cast<Eigen::Index>(subspaces.size()) * n, n);
    for (size_t i = 0; i < subspaces.size(); ++i)
        stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
            RMat::Identity(n, n) - subspaces[i].projector();
    Subspace out = nullspace_impl(stacked, n, tol > 0 ? tol : 1e-9);
    return out;
}

bool is_psd(const Mat& H, double tol) {
    if (H.rows() != H.cols())
        throw dimension_error("is_psd: matrix not square");
    const double nh = H.norm();
    if (nh == 0.0) return true;
    if ((H - H.adjoint()).norm() > std::max(tol, 1e-10) * nh)
        throw dimension_error("is_psd: matrix not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> es((H + H.adjoint()) / 2.0);
    const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    return es.eigenvalues().minCoeff() >= -tol * std::max(lmax, 1.0);
}

bool is_psd(const RMat& H, double tol) {
    return is_psd(Mat(H.cast<cplx>()), tol);
}

double symplectic_residual(const Mat& M) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0)
        throw dimension_error("symplectic_residual: need even square matrix");
    const int d = static_cast<int>(M.rows()) / 2;
    const Mat J = symplectic_J(d).cast<cplx>();
    return (M.transpose() * J * M - J).norm();
}

double graph_positivity_defect(const Mat& F, double t, const std::vector<Vec>& samples) {
    if (t < 0.0)
        throw std::domain_error("graph_positivity_defect: t must be >= 0");
    const int d = static_cast<int>(F.rows()) / 2;
    const Mat Jt = symplectic_J(d).transpose().cast<cplx>();
    const Mat M = expm(cplx(0.0, -2.0 * t) * F);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& X : samples) {
        const Vec W = M * X;
        const cplx fw = W.adjoint() * Jt * W;
        const cplx fx = X.adjoint() * Jt * X;
        worst = std::min(worst, std::real(cplx(0.0, 1.0) * (fw - fx)));
    }
    return samples.empty() ? 0.0 : worst;
}

} // namespace gwf

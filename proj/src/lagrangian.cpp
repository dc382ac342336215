#include "gaborwf/lagrangian.hpp"
#include <Eigen/QR>

namespace gwf {

const char* to_string(GeneratorViolation v) {
    switch (v) {
        case GeneratorViolation::None: return "None";
        case GeneratorViolation::NotSymmetric: return "NotSymmetric";
        case GeneratorViolation::ImPartNotPSD: return "ImPartNotPSD";
        case GeneratorViolation::ThetaRowsDependent: return "ThetaRowsDependent";
    }
    return "?";
}

GeneratorResult validate_generator(const Mat& P, int d, int N) {
    if (d < 1 || N < 0 || P.rows() != d + N || P.cols() != d + N)
        throw dimension_error("validate_generator: P must be (d+N) x (d+N)");
    const double np = P.norm();
    if (np > 0.0 && (P - P.transpose()).norm() >= 1e-12 * std::max(np, 1.0))
        return {std::nullopt, GeneratorViolation::NotSymmetric};
    Eigen::SelfAdjointEigenSolver<RMat> es(((P.imag() + P.imag().transpose()) / 2.0).eval());
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, np))
        return {std::nullopt, GeneratorViolation::ImPartNotPSD};
    if (N > 0) {
        Mat theta_rows(N, d + N);
        theta_rows << P.bottomLeftCorner(N, d), P.bottomRightCorner(N, N);
        Eigen::JacobiSVD<Mat> svd(theta_rows);
        const double smin = svd.singularValues()(N - 1);
        if (smin <= 1e-9 * std::max(1.0, svd.singularValues()(0)))
            return {std::nullopt, GeneratorViolation::ThetaRowsDependent};
    }
    return {GaussianGenerator{d, N, P}, GeneratorViolation::None};
}

ReductionCoefficients reduction_coefficients(const GaussianGenerator& g) {
    const int d = g.d, N = g.N;
    Mat M(d + N, N);
    M << g.Pxth(), g.Pthth();
    // minimum-norm left inverse of 2M
    Mat BC;
    if (N == 0) {
        BC = Mat(0, d + N);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(2.0 * M);
        BC = cod.pseudoInverse();
    }
    ReductionCoefficients out;
    out.B = BC.leftCols(d);
    out.C = BC.rightCols(N);
    out.A = -2.0 * (out.B * g.Pxx() + out.C * g.Pthx());
    return out;
}

Mat ComplexLagrangian::projector() const {
    if (Z.cols() == 0) return Mat::Zero(2 * n, 2 * n);
    Eigen::HouseholderQR<Mat> qr(Z);
    const Mat Q = qr.householderQ() * Mat::Identity(2 * n, Z.cols());
    return Q * Q.adjoint();
}

double complex_projector_distance(const ComplexLagrangian& a, const ComplexLagrangian& b) {
    if (a.n != b.n)
        throw dimension_error("complex_projector_distance: ambient dims differ");
    Eigen::JacobiSVD<Mat> svd(a.projector() - b.projector());
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Mat positivity_matrix(const ComplexLagrangian& lam) {
    const Mat Jt = symplectic_J(lam.n).transpose().cast<cplx>();
    return cplx(0.0, 1.0) * lam.Z.adjoint() * Jt * lam.Z;
}

double lagrangian_residual(const ComplexLagrangian& lam) {
    const Mat J = symplectic_J(lam.n).cast<cplx>();
    return (lam.Z.transpose() * J * lam.Z).norm();
}

bool is_positive_lagrangian(const ComplexLagrangian& lam, double tol) {
    const double scale = std::max(1.0, lam.Z.squaredNorm());
    if (lagrangian_residual(lam) > tol * scale) return false;
    const Mat H = positivity_matrix(lam);
    Eigen::SelfAdjointEigenSolver<Mat> es((H + H.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff() >= -tol * scale;
}

ComplexLagrangian lagrangian_of_generator(const GaussianGenerator& g) {
    const int d = g.d, N = g.N;
    Mat K;
    if (N == 0) {
        K = Mat::Identity(d, d);
    } else {
        Mat theta_rows(N, d + N);
        theta_rows << g.Pthx(), g.Pthth();
        K = complex_nullspace(theta_rows);  // (d+N) x d
    }
    ComplexLagrangian lam;
    lam.n = d;
    lam.Z = Mat(2 * d, K.cols());
    const Mat x_part = K.topRows(d);
    const Mat th_part = K.bottomRows(N);
    lam.Z.topRows(d) = x_part;
    lam.Z.bottomRows(d) = 2.0 * (g.Pxx() * x_part + g.Pxth() * th_part);
    return lam;
}

LagrangianParam normal_form(const ComplexLagrangian& lam) {
    const int n = lam.n;
    if (lam.Z.rows() != 2 * n || lam.Z.cols() != n)
        throw dimension_error("normal_form: expected a full 2n x n span");
    if (!is_positive_lagrangian(lam, 1e-8))
        throw not_positive_error("normal_form: plane is not a positive Lagrangian");

    const Mat Ztop = lam.Z.topRows(n);
    const Mat Zbot = lam.Z.bottomRows(n);

    Eigen::JacobiSVD<Mat> svd(Ztop, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int k = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * std::max(smax, 1.0)) ++k;
    double gap = std::numeric_limits<double>::infinity();
    if (k > 0 && k < sv.size() && sv(k) > 0.0) gap = sv(k - 1) / sv(k);

    LagrangianParam out;
    out.d = n;
    out.k = k;
    out.rank_gap = gap;

    if (k == n) {
        const Mat G = Zbot * Ztop.inverse();
        const Mat R = ((G + G.transpose()) / 4.0).eval();  // R = G/2, symmetrized
        out.N = 0;
        out.R_r = R.real();
        out.R_i = R.imag();
        out.L = RMat(n, 0);
        return out;
    }
    if (k == 0) {
        out.N = n;
        out.R_r = RMat::Zero(n, n);
        out.R_i = RMat::Zero(n, n);
        out.L = RMat::Identity(n, n);
        return out;
    }

    // lambda_1 = range of Ztop; for a positive plane its real span has dim k.
    Eigen::JacobiSVD<Mat> svd_u(Ztop, Eigen::ComputeFullU);
    const Mat U_cplx = svd_u.matrixU().leftCols(k);

    RMat re_im(n, 2 * k);
    re_im << U_cplx.real(), U_cplx.imag();
    Eigen::ColPivHouseholderQR<RMat> rqr(re_im);
    rqr.setThreshold(1e-9);
    if (rqr.rank() != k)
        throw not_positive_error("normal_form: Re(lambda_1) has unexpected real dimension");
    const RMat U = RMat(rqr.householderQ()).leftCols(k);
    const RMat L = nullspace(RMat(U.transpose()), 1e-12).basis;  // n x (n-k)
    RMat T(n, n);
    T << U, L;

    Mat rot = Mat::Zero(2 * n, 2 * n);
    rot.topLeftCorner(n, n) = T.transpose().cast<cplx>();
    rot.bottomRightCorner(n, n) = T.transpose().cast<cplx>();
    const Mat ZT = rot * lam.Z;

    const Mat Xp = ZT.topRows(k);
    const Mat Xpp = ZT.middleRows(k, n - k);
    const Mat Xip = ZT.middleRows(n, k);
    if (Xpp.norm() > 1e-7 * std::max(1.0, lam.Z.norm()))
        throw not_positive_error("normal_form: residual x'' block after rotation");

    Eigen::CompleteOrthogonalDecomposition<Mat> cod(Xp);
    const Mat Qt = Xip * cod.pseudoInverse();  // k x k, xi' = Qt x'
    const Mat Qsym = (Qt + Qt.transpose()) / 2.0;
    const Mat R = (U.cast<cplx>() * (Qsym / 2.0) * U.transpose().cast<cplx>()).eval();

    out.N = n - k;
    out.R_r = ((R.real() + R.real().transpose()) / 2.0).eval();
    out.R_i = ((R.imag() + R.imag().transpose()) / 2.0).eval();
    out.L = L;
    return out;
}

Subspace real_points(const LagrangianParam& param, bool tilde) {
    const int d = param.d, N = param.N;
    RMat constraints(N + (tilde ? d : 0), d);
    if (N > 0) constraints.topRows(N) = param.L.transpose();
    if (tilde) constraints.bottomRows(d) = param.R_i;
    const RMat xbasis = (constraints.rows() == 0)
                            ? RMat::Identity(d, d)
                            : nullspace(constraints, 1e-9).basis;
    const int m = static_cast<int>(xbasis.cols());
    RMat cols(2 * d, m + N);
    for (int i = 0; i < m; ++i) {
        cols.col(i).head(d) = xbasis.col(i);
        cols.col(i).tail(d) = 2.0 * param.R_r * xbasis.col(i);
    }
    for (int j = 0; j < N; ++j) {
        cols.col(m + j).head(d).setZero();
        cols.col(m + j).tail(d) = param.L.col(j);
    }
    // orthonormalize (columns may be non-orthogonal but are independent)
    Subspace out;
    out.ambient_dim = 2 * d;
    if (cols.cols() == 0) {
        out.basis = RMat(2 * d, 0);
        return out;
    }
    Eigen::ColPivHouseholderQR<RMat> qr(cols);
    qr.setThreshold(1e-12);
    out.basis = RMat(qr.householderQ()).leftCols(qr.rank());
    return out;
}

ComplexLagrangian tilde_refine(const ComplexLagrangian& lam) {
    const Mat H = positivity_matrix(lam);
    const Mat K = complex_nullspace(H, 1e-9);
    ComplexLagrangian out;
    out.n = lam.n;
    out.Z = lam.Z * K;
    return out;
}

ComplexLagrangian twist(const ComplexLagrangian& lam, int d) {
    if (lam.n != 2 * d)
        throw dimension_error("twist: plane must live in a product phase space");
    ComplexLagrangian out = lam;
    out.Z.bottomRows(d) *= -1.0;
    return out;
}

ComplexLagrangian graph_lagrangian(const HamiltonMap& fm, double t) {
    if (t < 0.0)
        throw std::domain_error("graph_lagrangian: t must be >= 0");
    const int d = fm.d;
    const Mat M = expm(cplx(0.0, -2.0 * t) * fm.F);
    ComplexLagrangian out;
    out.n = 2 * d;
    out.Z = Mat(4 * d, 2 * d);
    out.Z.topRows(d) = M.topRows(d);
    out.Z.middleRows(d, d) << Mat::Identity(d, d), Mat::Zero(d, d);
    out.Z.middleRows(2 * d, d) = M.bottomRows(d);
    out.Z.bottomRows(d) << Mat::Zero(d, d), -Mat::Identity(d, d);
    return out;
}

Subspace kernel_wf_bound(const HamiltonMap& fm, double t) {
    if (t <= 0.0)
        throw std::domain_error("kernel_wf_bound: t must be > 0");
    const int d = fm.d;
    const Mat M = expm(cplx(0.0, -2.0 * t) * fm.F);
    const Subspace K = nullspace(RMat(M.imag()), 1e-9);
    const int m = K.dim();
    RMat cols(4 * d, m);
    for (int i = 0; i < m; ++i) {
        const RVec w = K.basis.col(i);
        const RVec v = M.real() * w;
        cols.col(i).segment(0, d) = v.head(d);
        cols.col(i).segment(d, d) = w.head(d);
        cols.col(i).segment(2 * d, d) = v.tail(d);
        cols.col(i).segment(3 * d, d) = -w.tail(d);
    }
    Subspace out;
    out.ambient_dim = 4 * d;
    if (m == 0) {
        out.basis = RMat(4 * d, 0);
        return out;
    }
    Eigen::ColPivHouseholderQR<RMat> qr(cols);
    qr.setThreshold(1e-12);
    out.basis = RMat(qr.householderQ()).leftCols(qr.rank());
    return out;
}

} // namespace gwf

#include "gaborwf/propagation.hpp"
#include <cmath>
#include <numbers>

namespace gwf {

namespace {
constexpr double kAngleSlack = 1e-12;

double angle_between(const RVec& u, const RVec& v) {
    const double c = u.dot(v) / (u.norm() * v.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

// condition number from the singular values of M (or M restricted to a basis)
double cap_inflation_kappa(const RMat& M) {
    Eigen::JacobiSVD<RMat> svd(M);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0)
        throw std::invalid_argument("map_conic: map is singular on the relevant subspace");
    return sv(0) / smin;
}

double inflate(double half_angle, double kappa) {
    if (half_angle >= std::numbers::pi / 2.0 - 1e-12) return std::numbers::pi;
    const double a = std::atan(kappa * std::tan(half_angle));
    return std::min(a, std::numbers::pi);
}

ConicSet map_with_kappa(const RMat& M, const ConicSet& c, double kappa) {
    ConicSet out{c.ambient_dim, {}};
    for (const auto& p : c.patches) {
        RVec w = M * p.direction;
        const double nw = w.norm();
        if (nw <= 1e-14) continue;  // direction annihilated; no conic image
        out.patches.push_back({w / nw, inflate(p.half_angle, kappa)});
    }
    return out;
}
} // namespace

ConicSet ConicSet::ray(const RVec& direction) {
    return cap(direction, 0.0);
}

ConicSet ConicSet::cap(const RVec& direction, double half_angle) {
    ConicSet c{static_cast<int>(direction.size()), {}};
    const double nd = direction.norm();
    if (nd == 0.0)
        throw std::invalid_argument("ConicSet: zero direction");
    c.patches.push_back({direction / nd, half_angle});
    c.validate();
    return c;
}

ConicSet ConicSet::everything(int ambient_dim) {
    RVec e1 = RVec::Zero(ambient_dim);
    e1(0) = 1.0;
    return cap(e1, std::numbers::pi);
}

void ConicSet::validate() const {
    for (const auto& p : patches) {
        if (p.direction.size() != ambient_dim)
            throw dimension_error("ConicSet: patch dimension mismatch");
        if (std::abs(p.direction.norm() - 1.0) > 1e-12)
            throw invariant_violation("ConicSet: direction not unit");
        if (p.half_angle < 0.0 || p.half_angle > std::numbers::pi + 1e-12)
            throw invariant_violation("ConicSet: half angle out of range");
    }
}

bool cone_membership(const ConicSet& c, const RVec& v) {
    for (const auto& p : c.patches)
        if (angle_between(v, p.direction) <= p.half_angle + kAngleSlack)
            return true;
    return false;
}

ConicSet map_conic(const RMat& M, const ConicSet& c) {
    if (M.rows() != M.cols() || M.rows() != c.ambient_dim)
        throw dimension_error("map_conic: shape mismatch");
    return map_with_kappa(M, c, cap_inflation_kappa(M));
}

ConicSet map_conic_on(const RMat& M, const ConicSet& c, const RMat& restriction_basis) {
    if (restriction_basis.cols() == 0) return ConicSet::empty(c.ambient_dim);
    return map_with_kappa(M, c, cap_inflation_kappa(RMat(M * restriction_basis)));
}

ConicSet intersect_conic_with_subspace(const ConicSet& c, const Subspace& S, double ang_tol) {
    if (S.ambient_dim != c.ambient_dim)
        throw dimension_error("intersect_conic_with_subspace: ambient mismatch");
    ConicSet out{c.ambient_dim, {}};
    if (S.dim() == 0) return out;
    for (const auto& p : c.patches) {
        const RVec proj = S.basis * (S.basis.transpose() * p.direction);
        const double off = std::asin(std::clamp((p.direction - proj).norm(), 0.0, 1.0));
        if (off > p.half_angle + ang_tol) continue;
        RVec dir = proj;
        if (dir.norm() <= 1e-14)
            dir = S.basis.col(0);  // direction orthogonal to S but cap covers it
        out.patches.push_back({dir / dir.norm(),
                               std::min(p.half_angle + off, std::numbers::pi)});
    }
    return out;
}

PropagationReport propagate(const QuadraticHamiltonian& h, const ConicSet& wf0,
                            double t, double ang_tol) {
    if (t <= 0.0)
        throw std::domain_error("propagate: t must be > 0 (time has a direction)");
    if (wf0.ambient_dim != 2 * h.d)
        throw dimension_error("propagate: wf0 has wrong ambient dimension");
    const HamiltonMap fm = hamilton_map(h);

    PropagationReport rep;
    rep.S_used = singular_space(fm).S;
    rep.exact = h.Q.real().norm() < 1e-12 * std::max(1.0, h.Q.norm());

    const RMat flow_im = expm(Mat((2.0 * t * fm.F_im).cast<cplx>())).real();
    const ConicSet on_S = intersect_conic_with_subspace(wf0, rep.S_used, ang_tol);
    rep.bound_singular = map_conic_on(flow_im, on_S, rep.S_used.basis);

    const Mat M = expm(cplx(0.0, -2.0 * t) * fm.F);
    const Subspace K = nullspace(RMat(M.imag()), 1e-9);
    const ConicSet on_K = intersect_conic_with_subspace(wf0, K, ang_tol);
    rep.bound_general = map_conic_on(M.real(), on_K, K.basis);
    return rep;
}

ConicSet compose_semigroup_bound(const QuadraticHamiltonian& h, const ConicSet& wf0,
                                 double t1, double t2, double ang_tol) {
    const PropagationReport first = propagate(h, wf0, t2, ang_tol);
    const PropagationReport second = propagate(h, first.bound_singular, t1, ang_tol);
    return second.bound_singular;
}

} // namespace gwf

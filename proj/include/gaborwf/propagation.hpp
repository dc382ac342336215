#pragma once
#include "gaborwf/hamiltonian.hpp"

namespace gwf {

struct CapPatch {
    RVec direction;      // unit vector
    double half_angle = 0.0;  // radians in [0, pi]
};

// Finite union of angular caps in phase space minus the origin.
// An empty patch list is the empty conic set.
struct ConicSet {
    int ambient_dim = 2;
    std::vector<CapPatch> patches;

    static ConicSet empty(int ambient_dim) { return ConicSet{ambient_dim, {}}; }
    static ConicSet ray(const RVec& direction);
    static ConicSet cap(const RVec& direction, double half_angle);
    // All of the sphere: a single patch of half-angle pi.
    static ConicSet everything(int ambient_dim);
    void validate() const;
};

// Boundary-inclusive membership test against every patch.
bool cone_membership(const ConicSet& c, const RVec& v);

// Image of a conic set under an invertible linear map; half-angles inflated
// by alpha' = atan(kappa * tan(alpha)) so the image is always covered.
ConicSet map_conic(const RMat& M, const ConicSet& c);

// Like map_conic but with kappa taken from the singular values of M
// restricted to the given subspace basis (sound when patch directions lie
// in that subspace; tighter than the global condition number).
ConicSet map_conic_on(const RMat& M, const ConicSet& c, const RMat& restriction_basis);

// A patch survives iff its direction is within half_angle + ang_tol of S;
// survivors are recentered on the projection and widened accordingly.
ConicSet intersect_conic_with_subspace(const ConicSet& c, const Subspace& S, double ang_tol);

struct PropagationReport {
    ConicSet bound_general;   // flow kernel route
    ConicSet bound_singular;  // singular-space route
    Subspace S_used;
    bool exact = false;       // Re Q = 0: both bounds are equalities
};

// Wave-front bound for e^{-t q^w}: singular route maps WF(u) cap S by the
// real flow e^{2t Im F}; general route intersects with Ker_R(Im e^{-2itF})
// and maps by the (real) restriction of e^{-2itF}.
PropagationReport propagate(const QuadraticHamiltonian& h, const ConicSet& wf0,
                            double t, double ang_tol = 1e-6);

// Two-step bound: propagate by t2, then by t1; contains the one-step bound.
ConicSet compose_semigroup_bound(const QuadraticHamiltonian& h, const ConicSet& wf0,
                                 double t1, double t2, double ang_tol = 1e-6);

} // namespace gwf

#pragma once

#include <utility>
#include <vector>

#include "hybridwc/model.hpp"
#include "hybridwc/ratfunc.hpp"

namespace hybridwc {

// Line bundle on an orbifold projective line with cyclic isotropy at the two
// poles: the geometry of an edge component.  The T-weight data is the coarse
// tangent weight at 0 and the orbifold fiber weight at infinity; section and
// cohomology weights follow by direct monomial counting on the coarse
// quotient, never through the contribution product formulas.
struct FootballBundle {
    long coarse_degree;             // degree of |L| on the coarse curve
    BigRational mult_at_0;          // multiplicity of L at 0, in [0,1)
    BigRational mult_at_infty;      // multiplicity of L at infinity, in [0,1)
    RatFunc fiber_weight_at_infty;  // orbifold frame weight at infinity
    RatFunc tangent_weight_at_0;    // tau; tangent weight at infinity is -tau

    // invariant-frame weight of |L| at infinity
    RatFunc coarse_weight_at_infty() const {
        return fiber_weight_at_infty + tangent_weight_at_0 * mult_at_infty;
    }
};

struct FootballWeights {
    std::vector<RatFunc> h0;
    std::vector<RatFunc> h1;
};

// H^0(|L|) weights are w_inf + k*tau for k = 0..D; H^1 weights come from
// Serre duality, H^1(L) = -{ H^0(L^dual ⊗ omega) weights }.
inline FootballWeights football_weights(const FootballBundle& b) {
    FootballWeights out;
    RatFunc w_inf = b.coarse_weight_at_infty();
    const RatFunc& tau = b.tangent_weight_at_0;
    long D = b.coarse_degree;
    for (long k = 0; k <= D; ++k) out.h0.push_back(w_inf + tau * BigRational(k));
    for (long k = 0; k <= -D - 2; ++k) out.h1.push_back(w_inf - tau * BigRational(k + 1));
    // orbifold Riemann-Roch on genus zero: chi = h0 - h1 = D + 1
    if (static_cast<long>(out.h0.size()) - static_cast<long>(out.h1.size()) != D + 1)
        throw InternalInvariantViolation("football_weights: Euler characteristic mismatch");
    return out;
}

// Sections vanishing at a point: removes the unique non-vanishing weight at
// that pole when the multiplicity there is zero, and is invisible otherwise.
inline FootballBundle twist_down_at_poles(const FootballBundle& b, bool at_0, bool at_infty) {
    FootballBundle r = b;
    if (at_0 && b.mult_at_0.is_zero()) {
        r.coarse_degree -= 1;  // drops the top weight w_inf + D*tau
    }
    if (at_infty && b.mult_at_infty.is_zero()) {
        // drops w_inf itself: shift the frame weight up by tau
        r.fiber_weight_at_infty = r.fiber_weight_at_infty + r.tangent_weight_at_0;
        r.coarse_degree -= 1;
    }
    return r;
}

}  // namespace hybridwc

#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hybridwc/football.hpp"
#include "hybridwc/jfun.hpp"
#include "hybridwc/qseries.hpp"
#include "hybridwc/trees.hpp"

namespace hybridwc {

struct Verdict {
    bool pass = true;
    std::string witness;

    static Verdict ok() { return {}; }
    static Verdict fail(std::string w) { return {false, std::move(w)}; }
};

// ---------------------------------------------------------------------------
// Edge geometry -> football bundles (the independent oracle construction)
// ---------------------------------------------------------------------------

// One end of an edge curve: a node or marked point carries the opposite of
// the flag multiplicity; a basepoint end is an unmarked smooth point with a
// basepoint of the given order.
struct EdgeEnd {
    enum Kind { Node, Mark, Basepoint } kind = Node;
    long j = 1;
    long bp_order = 0;    // only for Basepoint
    Multiplicity flag;    // vertex-side flag multiplicity (Node/Mark)
};

struct EdgeGeometry {
    EdgeEnd at0, atinf;
    long beta_e = 1;
};

namespace detail {

inline bool is_special(const EdgeEnd& e) { return e.kind != EdgeEnd::Basepoint; }

// orbifold degree of L^{-d} on the edge curve
inline BigRational edge_deg_L_inv_d(const EdgeGeometry& g) {
    BigRational deg(g.beta_e);
    if (g.at0.kind == EdgeEnd::Basepoint) deg += BigRational(g.at0.bp_order + 1);
    if (g.atinf.kind == EdgeEnd::Basepoint) deg += BigRational(g.atinf.bp_order + 1);
    return deg;
}

inline RatFunc edge_tau(const EdgeGeometry& g, const ModelParams& p) {
    int ar = p.arity();
    MPoly t = (MPoly::var(ar, static_cast<int>(g.at0.j)) -
               MPoly::var(ar, static_cast<int>(g.atinf.j))) *
              BigRational(1, g.beta_e);
    return RatFunc(t);
}

// multiplicity of L at an end, seen from the edge branch
inline BigRational edge_mult_L(const EdgeEnd& e, const ModelParams& p) {
    if (e.kind == EdgeEnd::Basepoint) return BigRational(0);
    return e.flag.negated(p.d()).value(p.d());
}

// orbifold fiber weight of L at the infinity end: the section p_{j} of
// L^{-d} ⊗ omega_log trivializes the bundle up to its vanishing order there,
// and the log frame is weightless exactly at special points.
inline RatFunc edge_fiber_L_at_infty(const EdgeGeometry& g, const ModelParams& p) {
    int ar = p.arity();
    RatFunc tau = edge_tau(g, p);
    RatFunc lam_B = RatFunc(MPoly::var(ar, static_cast<int>(g.atinf.j)));
    if (g.atinf.kind == EdgeEnd::Basepoint)
        lam_B = lam_B - tau * BigRational(g.atinf.bp_order);  // p_j vanishes to that order
    RatFunc lam_log = RatFunc::zero(ar);
    if (!is_special(g.atinf)) lam_log = tau;  // frame d(coord), not the log frame
    RatFunc lam_L_inv_d = lam_B - lam_log;
    return -(lam_L_inv_d) * BigRational(1, p.d());
}

// football data for L^{tensor w} on the edge (w may be negative)
inline FootballBundle edge_bundle_power(const EdgeGeometry& g, long w, const ModelParams& p) {
    BigRational degL = -edge_deg_L_inv_d(g) / BigRational(p.d());
    BigRational deg = degL * BigRational(w);
    BigRational m0 = (edge_mult_L(g.at0, p) * BigRational(w)).frac();
    BigRational mi = (edge_mult_L(g.atinf, p) * BigRational(w)).frac();
    BigRational coarse = deg - m0 - mi;
    if (!coarse.is_integer())
        throw InternalInvariantViolation("edge bundle: non-integral coarse degree");
    FootballBundle b;
    b.coarse_degree = static_cast<long>(coarse.num().get_si());
    b.mult_at_0 = m0;
    b.mult_at_infty = mi;
    b.fiber_weight_at_infty = edge_fiber_L_at_infty(g, p) * BigRational(w);
    b.tangent_weight_at_0 = edge_tau(g, p);
    return b;
}

// football data for B = L^{-d} ⊗ omega_log (the p-deformation bundle)
inline FootballBundle edge_bundle_B(const EdgeGeometry& g, const ModelParams& p) {
    int ar = p.arity();
    RatFunc tau = edge_tau(g, p);
    BigRational degB(g.beta_e);
    if (g.at0.kind == EdgeEnd::Basepoint) degB += BigRational(g.at0.bp_order);
    if (g.atinf.kind == EdgeEnd::Basepoint) degB += BigRational(g.atinf.bp_order);
    if (!degB.is_integer()) throw InternalInvariantViolation("edge bundle B: bad degree");
    FootballBundle b;
    b.coarse_degree = static_cast<long>(degB.num().get_si());
    b.mult_at_0 = BigRational(0);
    b.mult_at_infty = BigRational(0);
    RatFunc lam = RatFunc(MPoly::var(ar, static_cast<int>(g.atinf.j)));
    if (g.atinf.kind == EdgeEnd::Basepoint)
        lam = lam - tau * BigRational(g.atinf.bp_order);
    b.fiber_weight_at_infty = lam;
    b.tangent_weight_at_0 = tau;
    return b;
}

}  // namespace detail

// e_T(⊕_i H^1(C_e, L^{w_i})) / e_T(⊕_j H^0(C_e, L^{-d} ⊗ omega_log)^mov),
// counted from the football weights.  With twist_nodes the L^{w_i} are
// twisted down at the node/mark preimages (sections vanishing there).
inline RatFunc edge_oracle_ratio(const EdgeGeometry& g, const ModelParams& p, bool twist_nodes) {
    int ar = p.arity();
    RatFunc num = RatFunc::one(ar);
    for (long i = 0; i < p.M(); ++i) {
        FootballBundle b = detail::edge_bundle_power(g, p.weights[i], p);
        if (twist_nodes)
            b = twist_down_at_poles(b, detail::is_special(g.at0), detail::is_special(g.atinf));
        FootballWeights w = football_weights(b);
        if (!w.h0.empty())
            throw InternalInvariantViolation("edge oracle: L^{w_i} has unexpected sections");
        for (const RatFunc& x : w.h1) num *= x;
    }
    FootballBundle bB = detail::edge_bundle_B(g, p);
    FootballWeights wB = football_weights(bB);
    if (!wB.h1.empty())
        throw InternalInvariantViolation("edge oracle: obstruction in the p-deformations");
    RatFunc den = RatFunc::one(ar);
    for (long j = 1; j <= p.N(); ++j) {
        RatFunc aj = RatFunc(MPoly::var(ar, static_cast<int>(j)));
        for (const RatFunc& x : wB.h0) {
            RatFunc wgt = x - aj;
            if (wgt.is_zero()) continue;  // fixed part: only the moving piece contributes
            den *= wgt;
        }
    }
    return num / den;
}

// The closed product of the stable-edge display (strict numerator bounds, no
// automorphism prefactor).
inline RatFunc stable_edge_product(long jv, long jvp, long be, const Multiplicity& mv,
                                   const ModelParams& p) {
    int ar = p.arity();
    MPoly aj = MPoly::var(ar, static_cast<int>(jv)), ajp = MPoly::var(ar, static_cast<int>(jvp));
    RatFunc r = RatFunc::one(ar);
    for (long i = 0; i < p.M(); ++i) {
        BigRational hi(be * p.weights[i], p.d());
        BigRational anchor(mv.numerator() * p.weights[i], p.d());
        for (const BigRational& b : b_progression(anchor, BigRational(0), hi, true, true))
            r *= RatFunc((aj - ajp) * (b / BigRational(be)) - aj * BigRational(p.weights[i], p.d()));
    }
    for (long k = 1; k <= p.N(); ++k) {
        MPoly ak = MPoly::var(ar, static_cast<int>(k));
        for (long b = 0; b <= be; ++b) {
            MPoly f = (ajp - aj) * BigRational(b, be) + aj - ak;
            if (f.is_zero()) continue;
            r /= RatFunc(f);
        }
    }
    return r;
}

// The closed product of the unstable-edge display: the 0-end vertex is an
// unmarked unstable vertex of degree bv, widening both b-ranges.
inline RatFunc unstable_edge_product(long jv, long jvp, long be, long bv,
                                     const Multiplicity& mv, const ModelParams& p) {
    int ar = p.arity();
    MPoly aj = MPoly::var(ar, static_cast<int>(jv)), ajp = MPoly::var(ar, static_cast<int>(jvp));
    RatFunc r = RatFunc::one(ar);
    for (long i = 0; i < p.M(); ++i) {
        BigRational lo(-(bv + 1) * p.weights[i], p.d());
        BigRational hi(be * p.weights[i], p.d());
        BigRational anchor(mv.numerator() * p.weights[i], p.d());
        for (const BigRational& b : b_progression(anchor, lo, hi, true, true))
            r *= RatFunc((aj - ajp) * (b / BigRational(be)) - aj * BigRational(p.weights[i], p.d()));
    }
    for (long k = 1; k <= p.N(); ++k) {
        MPoly ak = MPoly::var(ar, static_cast<int>(k));
        for (long b = -bv; b <= be; ++b) {
            MPoly f = (ajp - aj) * BigRational(b, be) + aj - ak;
            if (f.is_zero()) continue;
            r /= RatFunc(f);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Edge-formula verification against the football oracle
// ---------------------------------------------------------------------------

struct EdgeCheckCase {
    long jv = 1, jvp = 2;
    long beta_e = 1;
    Multiplicity mv, mvp;  // flag data; for the unstable case mv is forced
    long beta_v = -1;      // >= 0 selects the unstable-edge display
};

inline Verdict check_edge_formula(const EdgeCheckCase& c, const ModelParams& p) {
    EdgeGeometry g;
    g.beta_e = c.beta_e;
    std::ostringstream tag;
    if (c.beta_v < 0) {
        g.at0 = {EdgeEnd::Node, c.jv, 0, c.mv};
        g.atinf = {EdgeEnd::Node, c.jvp, 0, c.mvp};
        RatFunc untwisted = edge_oracle_ratio(g, p, false);
        RatFunc strict = stable_edge_product(c.jv, c.jvp, c.beta_e, c.mv, p);
        if (untwisted != strict) {
            tag << "stable edge display mismatch at be=" << c.beta_e << " mv="
                << c.mv.numerator() << " mvp=" << c.mvp.numerator() << ": oracle "
                << untwisted.canonical_string() << " vs " << strict.canonical_string();
            return Verdict::fail(tag.str());
        }
        RatFunc twisted = edge_oracle_ratio(g, p, true);
        RatFunc contr = contr_edge_data(c.jv, c.jvp, c.beta_e, c.mv, c.mvp, p) *
                        BigRational(p.d() * c.beta_e);
        if (twisted != contr) {
            tag << "node-twisted edge mismatch at be=" << c.beta_e << " mv="
                << c.mv.numerator() << " mvp=" << c.mvp.numerator() << ": oracle "
                << twisted.canonical_string() << " vs " << contr.canonical_string();
            return Verdict::fail(tag.str());
        }
        return Verdict::ok();
    }
    // unstable 0-end: basepoint of order beta_v, flag forced to <-(bv+1)/d>
    g.at0 = {EdgeEnd::Basepoint, c.jv, c.beta_v, p.mult(-(c.beta_v + 1))};
    g.atinf = {EdgeEnd::Node, c.jvp, 0, c.mvp};
    RatFunc oracle = edge_oracle_ratio(g, p, false);
    RatFunc display =
        unstable_edge_product(c.jv, c.jvp, c.beta_e, c.beta_v, p.mult(-(c.beta_v + 1)), p);
    if (oracle != display) {
        tag << "unstable edge display mismatch at be=" << c.beta_e << " bv=" << c.beta_v
            << " mvp=" << c.mvp.numerator() << ": oracle " << oracle.canonical_string()
            << " vs " << display.canonical_string();
        return Verdict::fail(tag.str());
    }
    return Verdict::ok();
}

// Sweep of every valid flag assignment up to the given degree bounds.
inline Verdict check_edge_formula_sweep(const ModelParams& p, long max_beta_e, long max_beta_v) {
    for (long be = 1; be <= max_beta_e; ++be) {
        for (long jv = 1; jv <= p.N(); ++jv) {
            for (long jvp = 1; jvp <= p.N(); ++jvp) {
                if (jv == jvp) continue;
                for (long am = 0; am < p.d(); ++am) {
                    EdgeCheckCase c;
                    c.jv = jv;
                    c.jvp = jvp;
                    c.beta_e = be;
                    c.mv = p.mult(am);
                    c.mvp = p.mult(be - am);
                    Verdict v = check_edge_formula(c, p);
                    if (!v.pass) return v;
                }
                for (long bv = 0; bv <= max_beta_v; ++bv) {
                    EdgeCheckCase c;
                    c.jv = jv;
                    c.jvp = jvp;
                    c.beta_e = be;
                    c.beta_v = bv;
                    c.mv = p.mult(-(bv + 1));
                    c.mvp = p.mult(be + bv + 1);
                    Verdict v = check_edge_formula(c, p);
                    if (!v.pass) return v;
                }
            }
        }
    }
    return Verdict::ok();
}

// ---------------------------------------------------------------------------
// Residue transport: how poles of one fixed-point series feed the next
// ---------------------------------------------------------------------------

struct ResidueReport {
    long j = 1, jp = 2;
    Multiplicity m, mp;
    long beta_e = 1;
    QSeries<RatFunc> lhs;  // per-beta residues of f_{j,m} at the pole
    QSeries<RatFunc> rhs;  // per-beta -q^{be} RC * evaluation of f_{j',-m'}
    long modulus = 0;      // q-degree up to which exact equality was required
    bool vertex_cone_checked = false;  // membership in the vertex cone needs stable correlators
    bool pass = true;
    long witness_beta = -1;
    std::string witness_lhs, witness_rhs;

    ResidueReport(long D) : lhs(D), rhs(D) {}
};

// Res_{z=(a_j - a_j')/be} f_{j,m} = -q^{be} RC^{m,m'}_{j,j'}(be) f_{j',-m'}|_z
// checked coefficient-by-coefficient up to q^D.  For finite epsilon the two
// sides are compared modulo {q^beta : beta > 1/eps}, and the boundary
// coefficients beyond the modulus are matched against the residue of the
// two-unstable-vertex localization graph.  rc_scale != 1 deliberately breaks
// the recursion coefficient (detector sanity in tests).
inline ResidueReport check_residue_recursion(long j, long jp, const Multiplicity& m,
                                             const Multiplicity& mp, long beta_e,
                                             const ModelParams& p, long D,
                                             const BigRational& rc_scale = BigRational(1)) {
    if (j == jp) throw InvalidEdge("check_residue_recursion: j and j' must differ");
    RatFunc rc = recursion_coeff(m, mp, j, jp, beta_e, p) * rc_scale;
    int ar = p.arity();
    MPoly pole = (MPoly::var(ar, static_cast<int>(j)) - MPoly::var(ar, static_cast<int>(jp))) *
                 BigRational(1, beta_e);
    Multiplicity mneg = mp.negated(p.d());

    ResidueReport rep(D);
    rep.j = j;
    rep.jp = jp;
    rep.m = m;
    rep.mp = mp;
    rep.beta_e = beta_e;
    rep.modulus = D;

    for (long beta = 0; beta <= D; ++beta) {
        RatFunc lhs = RatFunc::zero(ar);
        if (p.epsilon.unstable(beta))
            lhs = iota_unstable_value(beta, j, m, p).residue_z(pole);
        rep.lhs.set(beta, lhs);

        RatFunc rhs = RatFunc::zero(ar);
        long bv = beta - beta_e;
        if (bv >= 0 && p.epsilon.unstable(bv))
            rhs = -(rc * iota_unstable_value(bv, jp, mneg, p).eval_z(pole));
        rep.rhs.set(beta, rhs);

        bool boundary = !p.epsilon.unstable(beta);
        if (!boundary) {
            if (lhs != rhs) {
                rep.pass = false;
                rep.witness_beta = beta;
                rep.witness_lhs = lhs.canonical_string();
                rep.witness_rhs = rhs.canonical_string();
                return rep;
            }
            continue;
        }
        rep.modulus = std::min(rep.modulus, beta - 1);
        // beyond the modulus the unstable series contributes nothing ...
        if (!lhs.is_zero()) {
            rep.pass = false;
            rep.witness_beta = beta;
            rep.witness_lhs = lhs.canonical_string();
            rep.witness_rhs = "0 (no unstable terms past the modulus)";
            return rep;
        }
        if (rhs.is_zero()) continue;
        // ... and the surviving right-hand coefficients must equal the
        // residue of the graph with one edge joining two unstable vertices
        DecoratedTree t;
        t.vertices.push_back({j, 0});
        t.vertices.push_back({jp, bv});
        t.edges.push_back({0, 1, beta_e, m, mp});
        t.marks = {0};
        t.mark_sectors = {m.negated(p.d())};
        t.aut_order = 1;
        if (!tree_valid(t, beta, p))
            throw InternalInvariantViolation("boundary graph fails validation");
        EqStateClass ins(p);
        ins.add(j, m.negated(p.d()), RatFunc::one(ar));
        RatFunc graph_res = -evaluate_fully_unstable_tree(t, {Insertion{ins, 0}}, p);
        if (graph_res != rhs) {
            rep.pass = false;
            rep.witness_beta = beta;
            rep.witness_lhs = graph_res.canonical_string() + " (graph residue)";
            rep.witness_rhs = rhs.canonical_string();
            return rep;
        }
    }
    return rep;
}

// Every (j != j', m, m') pair with beta_e in E^{m,m'} up to the bound.
inline Verdict check_residue_recursion_sweep(const ModelParams& p, long max_beta_e, long D) {
    for (long j = 1; j <= p.N(); ++j) {
        for (long jp = 1; jp <= p.N(); ++jp) {
            if (j == jp) continue;
            for (long am = 0; am < p.d(); ++am) {
                for (long amp = 0; amp < p.d(); ++amp) {
                    for (long be = 1; be <= max_beta_e; ++be) {
                        if (((be - am - amp) % p.d() + p.d()) % p.d() != 0) continue;
                        ResidueReport rep =
                            check_residue_recursion(j, jp, p.mult(am), p.mult(amp), be, p, D);
                        if (!rep.pass) {
                            std::ostringstream w;
                            w << "residue recursion failed: j=" << j << " j'=" << jp
                              << " m=" << am << "/" << p.d() << " m'=" << amp << "/" << p.d()
                              << " be=" << be << " beta=" << rep.witness_beta << " lhs="
                              << rep.witness_lhs << " rhs=" << rep.witness_rhs;
                            return Verdict::fail(w.str());
                        }
                    }
                }
            }
        }
    }
    return Verdict::ok();
}

// ---------------------------------------------------------------------------
// Pole-location audit
// ---------------------------------------------------------------------------

// Every z-dependent denominator factor must be linear in z with root 0 or
// (a_j - a_k)/b for some k != j and integer 1 <= b <= beta.
inline std::optional<std::string> pole_audit(const RatFunc& f, long j, long beta,
                                             const ModelParams& p) {
    int ar = p.arity();
    for (const auto& [q, e] : f.factor_map()) {
        if (e >= 0 || !q.depends_on(0)) continue;
        if (q.degree_in(0) > 1)
            return "denominator factor of z-degree > 1: " + q.str();
        auto uni = q.univariate_in(0);
        MPoly u = uni.count(1) ? uni.at(1) : MPoly::zero(ar);
        MPoly v = uni.count(0) ? uni.at(0) : MPoly::zero(ar);
        if (v.is_zero()) continue;  // pole at z = 0
        bool matched = false;
        for (long k = 1; k <= p.N() && !matched; ++k) {
            if (k == j) continue;
            MPoly diff = MPoly::var(ar, static_cast<int>(j)) - MPoly::var(ar, static_cast<int>(k));
            for (long b = 1; b <= beta && !matched; ++b) {
                // root -v/u equals (a_j - a_k)/b iff u*(a_j - a_k) + b*v == 0
                if ((u * diff + v * BigRational(b)).is_zero()) matched = true;
            }
        }
        if (!matched) return "inadmissible pole from factor: " + q.str();
    }
    return std::nullopt;
}

inline Verdict check_pole_structure(long j, const Multiplicity& m, const ModelParams& p, long D) {
    for (long beta = 0; beta <= D; ++beta) {
        if (!p.epsilon.unstable(beta)) continue;
        RatFunc f = iota_unstable_value(beta, j, m, p);
        if (f.is_zero()) continue;
        auto w = pole_audit(f, j, beta, p);
        if (w) {
            std::ostringstream s;
            s << "pole audit failed at beta=" << beta << " j=" << j << " m=" << m.numerator()
              << "/" << p.d() << ": " << *w;
            return Verdict::fail(s.str());
        }
    }
    return Verdict::ok();
}

// ---------------------------------------------------------------------------
// Non-equivariant limit consistency
// ---------------------------------------------------------------------------

inline Verdict check_noneq_consistency(const ModelParams& p, long D) {
    for (long beta = 0; beta <= D; ++beta) {
        if (!p.epsilon.unstable(beta)) continue;
        EqStateClass eq(p);
        for (long j = 1; j <= p.N(); ++j) eq += unstable_coeff_eq(beta, j, p);
        StateClass lim = noneq_limit(eq, p);
        StateClass direct = unstable_coeff_noneq(beta, p);
        if (lim != direct) {
            std::ostringstream s;
            s << "non-equivariant limit mismatch at beta=" << beta;
            return Verdict::fail(s.str());
        }
    }
    return Verdict::ok();
}

}  // namespace hybridwc

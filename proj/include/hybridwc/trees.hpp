#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "hybridwc/jfun.hpp"
#include "hybridwc/model.hpp"
#include "hybridwc/state.hpp"

namespace hybridwc {

enum class VertexKind { Stable, UnstableVal1, UnstableVal2Node, UnstableVal2Mark };

// Localization tree: vertices carry a fixed point j and a degree, edges a
// degree, flags a multiplicity, and marks land on vertices.  Mark sectors are
// the multiplicities of the insertions, which enter the vertex selection rule.
struct DecoratedTree {
    struct Vertex {
        long j;
        long beta;
    };
    struct Edge {
        int a, b;     // vertex indices
        long beta;    // >= 1
        Multiplicity ma, mb;  // flag multiplicities at the a- and b-side
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<int> marks;                  // mark k -> vertex index
    std::vector<Multiplicity> mark_sectors;  // insertion sector of mark k
    long aut_order = 1;

    Multiplicity flag(int v, int e) const {
        const Edge& ed = edges[static_cast<size_t>(e)];
        if (ed.a == v) return ed.ma;
        if (ed.b == v) return ed.mb;
        throw InternalInvariantViolation("flag: vertex not on edge");
    }

    std::vector<int> edges_at(int v) const {
        std::vector<int> out;
        for (size_t e = 0; e < edges.size(); ++e)
            if (edges[e].a == v || edges[e].b == v) out.push_back(static_cast<int>(e));
        return out;
    }
    std::vector<int> marks_at(int v) const {
        std::vector<int> out;
        for (size_t k = 0; k < marks.size(); ++k)
            if (marks[k] == v) out.push_back(static_cast<int>(k));
        return out;
    }
    long valence(int v) const {
        return static_cast<long>(edges_at(v).size() + marks_at(v).size());
    }
    int other_end(int e, int v) const {
        const Edge& ed = edges[static_cast<size_t>(e)];
        return ed.a == v ? ed.b : ed.a;
    }
    long total_degree() const {
        long t = 0;
        for (const auto& v : vertices) t += v.beta;
        for (const auto& e : edges) t += e.beta;
        return t;
    }
};

inline VertexKind classify_vertex(const DecoratedTree& t, int v, const ModelParams& p) {
    long val = t.valence(v);
    long beta = t.vertices[static_cast<size_t>(v)].beta;
    size_t ne = t.edges_at(v).size();
    if (val >= 3) return VertexKind::Stable;
    if (val == 2) {
        if (beta >= 1) return VertexKind::Stable;
        if (ne == 2) return VertexKind::UnstableVal2Node;
        if (ne == 1) return VertexKind::UnstableVal2Mark;
        throw InternalInvariantViolation("degree-0 valence-2 vertex without edges");
    }
    if (val == 1)
        return p.epsilon.unstable(beta) ? VertexKind::UnstableVal1 : VertexKind::Stable;
    throw InternalInvariantViolation("isolated unmarked vertex");
}

// Selection rule at a vertex, from the multiplicity constraint with g = 0:
// (-beta_v + val - 2)/d - sum of flag and mark multiplicities must be integral.
inline bool vertex_rule_holds(const DecoratedTree& t, int v, const ModelParams& p) {
    long num = -t.vertices[static_cast<size_t>(v)].beta + t.valence(v) - 2;
    long s = 0;
    for (int e : t.edges_at(v)) s += t.flag(v, e).numerator();
    for (int k : t.marks_at(v)) s += t.mark_sectors[static_cast<size_t>(k)].numerator();
    return ((num - s) % p.d() + p.d()) % p.d() == 0;
}

inline bool edge_rule_holds(const DecoratedTree::Edge& e, const ModelParams& p) {
    long r = e.beta - e.ma.numerator() - e.mb.numerator();
    return ((r % p.d()) + p.d()) % p.d() == 0;
}

// Structural and arithmetic validity of a decorated tree of total degree beta.
inline bool tree_valid(const DecoratedTree& t, long beta, const ModelParams& p) {
    size_t V = t.vertices.size();
    if (V == 0 || t.edges.size() != V - 1) return false;
    // connectivity
    std::vector<int> comp(V, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int e : t.edges_at(v)) {
            int w = t.other_end(e, v);
            if (comp[static_cast<size_t>(w)] < 0) {
                comp[static_cast<size_t>(w)] = 0;
                stack.push_back(w);
            }
        }
    }
    for (int c : comp)
        if (c < 0) return false;
    if (t.total_degree() != beta) return false;
    for (const auto& vx : t.vertices)
        if (vx.j < 1 || vx.j > p.N() || vx.beta < 0) return false;
    for (const auto& e : t.edges) {
        if (e.beta < 1) return false;
        if (t.vertices[static_cast<size_t>(e.a)].j == t.vertices[static_cast<size_t>(e.b)].j)
            return false;  // edges join distinct fixed points
        if (!edge_rule_holds(e, p)) return false;
    }
    for (int mk : t.marks)
        if (mk < 0 || mk >= static_cast<int>(V)) return false;
    for (size_t v = 0; v < V; ++v) {
        if (!vertex_rule_holds(t, static_cast<int>(v), p)) return false;
        long val = t.valence(static_cast<int>(v));
        if (val == 0) return false;
        if (val == 2 && t.vertices[v].beta == 0 && t.edges_at(static_cast<int>(v)).empty())
            return false;  // two marks at an unstructured point bound no moduli
    }
    return true;
}

namespace detail {

// Rooted canonical encoding with decorations; returns the encoding and the
// order of the rooted automorphism group.
inline std::pair<std::string, long> rooted_encoding(const DecoratedTree& t, int v,
                                                    int parent_edge) {
    std::string label = "(" + std::to_string(t.vertices[static_cast<size_t>(v)].j) + "," +
                        std::to_string(t.vertices[static_cast<size_t>(v)].beta) + ",m";
    for (int k : t.marks_at(v)) label += std::to_string(k) + ";";
    label += ")";
    std::vector<std::pair<std::string, long>> children;
    for (int e : t.edges_at(v)) {
        if (e == parent_edge) continue;
        int w = t.other_end(e, v);
        auto [enc, aut] = rooted_encoding(t, w, e);
        std::string info = "<" + std::to_string(t.edges[static_cast<size_t>(e)].beta) + "," +
                           std::to_string(t.flag(v, e).numerator()) + "," +
                           std::to_string(t.flag(w, e).numerator()) + ">";
        children.emplace_back(info + enc, aut);
    }
    std::sort(children.begin(), children.end());
    long aut = 1;
    std::string out = label + "{";
    for (size_t i = 0; i < children.size(); ++i) {
        aut *= children[i].second;
        long run = 1;
        while (i + 1 < children.size() && children[i + 1].first == children[i].first) {
            ++i;
            ++run;
            aut *= children[i].second * run;
        }
        for (long r = 0; r < run; ++r) out += children[i].first;
    }
    out += "}";
    return {out, aut};
}

inline std::vector<int> tree_centers(const DecoratedTree& t) {
    size_t V = t.vertices.size();
    if (V == 1) return {0};
    std::vector<int> deg(V, 0);
    for (const auto& e : t.edges) {
        ++deg[static_cast<size_t>(e.a)];
        ++deg[static_cast<size_t>(e.b)];
    }
    std::vector<int> layer;
    std::vector<bool> removed(V, false);
    for (size_t v = 0; v < V; ++v)
        if (deg[v] <= 1) layer.push_back(static_cast<int>(v));
    size_t left = V;
    while (left > 2) {
        std::vector<int> next;
        for (int v : layer) {
            removed[static_cast<size_t>(v)] = true;
            --left;
            for (int e : t.edges_at(v)) {
                int w = t.other_end(e, v);
                if (removed[static_cast<size_t>(w)]) continue;
                if (--deg[static_cast<size_t>(w)] == 1) next.push_back(w);
            }
        }
        layer = std::move(next);
    }
    return layer;
}

}  // namespace detail

// Canonical key (equal iff the decorated trees are isomorphic fixing marks)
// and the automorphism order.
inline std::pair<std::string, long> canonical_form(const DecoratedTree& t) {
    auto centers = detail::tree_centers(t);
    if (centers.size() == 1) {
        auto [enc, aut] = detail::rooted_encoding(t, centers[0], -1);
        return {"U" + enc, aut};
    }
    int c1 = centers[0], c2 = centers[1];
    int estar = -1;
    for (int e : t.edges_at(c1))
        if (t.other_end(e, c1) == c2) estar = e;
    if (estar < 0) throw InternalInvariantViolation("bicentral tree without central edge");
    auto [s1, a1] = detail::rooted_encoding(t, c1, estar);
    auto [s2, a2] = detail::rooted_encoding(t, c2, estar);
    long be = t.edges[static_cast<size_t>(estar)].beta;
    long f1 = t.flag(c1, estar).numerator(), f2 = t.flag(c2, estar).numerator();
    std::string k12 = "B<" + std::to_string(be) + "," + std::to_string(f1) + "," +
                      std::to_string(f2) + ">" + s1 + "|" + s2;
    std::string k21 = "B<" + std::to_string(be) + "," + std::to_string(f2) + "," +
                      std::to_string(f1) + ">" + s2 + "|" + s1;
    long aut = a1 * a2;
    if (s1 == s2 && f1 == f2) aut *= 2;
    return {std::min(k12, k21), aut};
}

// Brute-force |Aut| by checking every vertex permutation (test oracle).
inline long aut_order_brute(const DecoratedTree& t) {
    size_t V = t.vertices.size();
    std::vector<int> perm(V);
    std::iota(perm.begin(), perm.end(), 0);
    long count = 0;
    do {
        bool ok = true;
        for (size_t v = 0; v < V && ok; ++v) {
            const auto& x = t.vertices[v];
            const auto& y = t.vertices[static_cast<size_t>(perm[v])];
            if (x.j != y.j || x.beta != y.beta) ok = false;
        }
        for (size_t k = 0; k < t.marks.size() && ok; ++k)
            if (perm[static_cast<size_t>(t.marks[k])] != t.marks[k]) ok = false;
        if (ok) {
            // each edge must map to an edge with matching degree and flags
            std::multiset<std::string> before, after;
            auto edge_sig = [](int a, int b, long beta, long fa, long fb) {
                if (a > b) {
                    std::swap(a, b);
                    std::swap(fa, fb);
                }
                return std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(beta) +
                       "_" + std::to_string(fa) + "_" + std::to_string(fb);
            };
            for (const auto& e : t.edges) {
                before.insert(edge_sig(e.a, e.b, e.beta, e.ma.numerator(), e.mb.numerator()));
                after.insert(edge_sig(perm[static_cast<size_t>(e.a)], perm[static_cast<size_t>(e.b)],
                                      e.beta, e.ma.numerator(), e.mb.numerator()));
            }
            if (before == after) ++count;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

namespace detail {

inline void prufer_trees(int V, std::vector<std::vector<std::pair<int, int>>>& all) {
    if (V == 1) {
        all.push_back({});
        return;
    }
    if (V == 2) {
        all.push_back({{0, 1}});
        return;
    }
    std::vector<int> seq(static_cast<size_t>(V - 2), 0);
    while (true) {
        // decode the Prufer sequence
        std::vector<int> deg(static_cast<size_t>(V), 1);
        for (int s : seq) ++deg[static_cast<size_t>(s)];
        std::vector<std::pair<int, int>> edges;
        std::set<int> leaves;
        for (int v = 0; v < V; ++v)
            if (deg[static_cast<size_t>(v)] == 1) leaves.insert(v);
        std::vector<int> work = seq;
        for (int s : work) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
            if (--deg[static_cast<size_t>(s)] == 1) leaves.insert(s);
        }
        int u = *leaves.begin(), w = *std::next(leaves.begin());
        edges.emplace_back(std::min(u, w), std::max(u, w));
        all.push_back(std::move(edges));
        // next sequence
        int i = V - 3;
        while (i >= 0 && seq[static_cast<size_t>(i)] == V - 1) {
            seq[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++seq[static_cast<size_t>(i)];
    }
}

template <class F>
void compositions(long total, size_t slots, long minimum, std::vector<long>& cur, F&& emit) {
    if (cur.size() == slots) {
        if (total == 0) emit(cur);
        return;
    }
    for (long v = minimum; v <= total - minimum * static_cast<long>(slots - cur.size() - 1);
         ++v) {
        cur.push_back(v);
        compositions(total - v, slots, minimum, cur, emit);
        cur.pop_back();
    }
}

}  // namespace detail

// All isomorphism classes of valid decorated trees with the given insertion
// sectors and total degree, with at most max_vertices vertices.  Output is
// sorted by canonical key and each tree carries its automorphism order.
inline std::vector<DecoratedTree> enumerate_trees(const std::vector<Multiplicity>& mark_sectors,
                                                  long beta, const ModelParams& p,
                                                  int max_vertices) {
    if (mark_sectors.empty())
        throw InvalidDegree("enumerate_trees: at least one mark is required");
    std::map<std::string, DecoratedTree> found;
    long n = static_cast<long>(mark_sectors.size());
    for (int V = 1; V <= max_vertices; ++V) {
        std::vector<std::vector<std::pair<int, int>>> shapes;
        detail::prufer_trees(V, shapes);
        std::sort(shapes.begin(), shapes.end());
        shapes.erase(std::unique(shapes.begin(), shapes.end()), shapes.end());
        long E = V - 1;
        for (const auto& shape : shapes) {
            // edge degrees >= 1 and vertex degrees >= 0 summing to beta
            for (long S = E; S <= beta; ++S) {
                std::vector<long> ed;
                detail::compositions(S, static_cast<size_t>(E), 1, ed, [&](const std::vector<long>& eds) {
                std::vector<long> vd;
                detail::compositions(beta - S, static_cast<size_t>(V), 0, vd, [&](const std::vector<long>& vds) {
                    // fixed-point labels
                    std::vector<long> js(static_cast<size_t>(V), 1);
                    while (true) {
                        bool adjacent_ok = true;
                        for (size_t e = 0; e < shape.size(); ++e)
                            if (js[static_cast<size_t>(shape[e].first)] ==
                                js[static_cast<size_t>(shape[e].second)])
                                adjacent_ok = false;
                        if (adjacent_ok) {
                            // flag choices: the a-side numerator determines the b-side
                            std::vector<long> fa(static_cast<size_t>(E), 0);
                            while (true) {
                                // mark placements
                                std::vector<int> mk(static_cast<size_t>(n), 0);
                                while (true) {
                                    DecoratedTree t;
                                    for (int v = 0; v < V; ++v)
                                        t.vertices.push_back({js[static_cast<size_t>(v)],
                                                              vds[static_cast<size_t>(v)]});
                                    for (size_t e = 0; e < shape.size(); ++e) {
                                        long a_num = fa[e];
                                        long b_num = ((eds[e] - a_num) % p.d() + p.d()) % p.d();
                                        t.edges.push_back({shape[e].first, shape[e].second, eds[e],
                                                           p.mult(a_num), p.mult(b_num)});
                                    }
                                    t.marks.assign(mk.begin(), mk.end());
                                    t.mark_sectors = mark_sectors;
                                    if (tree_valid(t, beta, p)) {
                                        auto [key, aut] = canonical_form(t);
                                        t.aut_order = aut;
                                        found.try_emplace(key, t);
                                    }
                                    // advance marks
                                    size_t i = 0;
                                    while (i < mk.size() && ++mk[i] == V) mk[i++] = 0;
                                    if (i == mk.size()) break;
                                }
                                size_t i = 0;
                                while (i < fa.size() && ++fa[i] == p.d()) fa[i++] = 0;
                                if (i == fa.size()) break;
                            }
                        }
                        size_t i = 0;
                        while (i < js.size() && ++js[i] > p.N()) js[i++] = 1;
                        if (i == js.size()) break;
                    }
                });
                });
            }
        }
    }
    std::vector<DecoratedTree> out;
    for (auto& [k, t] : found) out.push_back(std::move(t));
    return out;
}

inline std::vector<DecoratedTree> enumerate_trees_onemark(long beta, const ModelParams& p,
                                                          int max_vertices) {
    return enumerate_trees({p.mult(-(beta + 1))}, beta, p, max_vertices);
}

// RC^{m,m'}_{j,j'}(beta): the recursive term transporting residues.
inline RatFunc recursion_coeff(const Multiplicity& m, const Multiplicity& mp, long j, long jp,
                               long beta, const ModelParams& p) {
    if (j == jp || j < 1 || jp < 1 || j > p.N() || jp > p.N())
        throw InvalidEdge("recursion_coeff: needs distinct fixed points");
    if (((beta - m.numerator() - mp.numerator()) % p.d() + p.d()) % p.d() != 0)
        throw InvalidDegree("recursion_coeff: beta outside E^{m,m'}");
    int ar = p.arity();
    MPoly aj = MPoly::var(ar, static_cast<int>(j)), ajp = MPoly::var(ar, static_cast<int>(jp));
    RatFunc r(ar, BigRational(1, beta));
    for (long i = 0; i < p.M(); ++i) {
        BigRational hi(beta * p.weights[i], p.d());
        BigRational anchor(m.numerator() * p.weights[i], p.d());
        for (const BigRational& b : b_progression(anchor, BigRational(0), hi, false, true)) {
            MPoly f = (aj - ajp) * (b / BigRational(beta)) - aj * BigRational(p.weights[i], p.d());
            r *= RatFunc(f);
        }
    }
    for (long k = 1; k <= p.N(); ++k) {
        MPoly ak = MPoly::var(ar, static_cast<int>(k));
        for (long b = 0; b < beta; ++b) {
            MPoly f = (ajp - aj) * BigRational(b, beta) + aj - ak;
            if (f.is_zero()) continue;  // primed product
            r /= RatFunc(f);
        }
    }
    return r;
}

// Total stable edge contribution, automorphism factor 1/(d beta_e) included.
inline RatFunc contr_edge_data(long jv, long jvp, long be, const Multiplicity& mv,
                               const Multiplicity& mvp, const ModelParams& p) {
    if (jv == jvp) throw InvalidEdge("contr_edge: endpoints share a fixed point");
    if (((be - mv.numerator() - mvp.numerator()) % p.d() + p.d()) % p.d() != 0)
        throw InvalidDegree("contr_edge: beta_e outside E^{m,m'}");
    int ar = p.arity();
    MPoly aj = MPoly::var(ar, static_cast<int>(jv)), ajp = MPoly::var(ar, static_cast<int>(jvp));
    RatFunc r(ar, BigRational(1, p.d() * be));
    for (long i = 0; i < p.M(); ++i) {
        BigRational hi(be * p.weights[i], p.d());
        BigRational anchor(mv.numerator() * p.weights[i], p.d());
        for (const BigRational& b : b_progression(anchor, BigRational(0), hi, false, false)) {
            MPoly f = (aj - ajp) * (b / BigRational(be)) - aj * BigRational(p.weights[i], p.d());
            r *= RatFunc(f);
        }
    }
    for (long k = 1; k <= p.N(); ++k) {
        MPoly ak = MPoly::var(ar, static_cast<int>(k));
        for (long b = 0; b <= be; ++b) {
            MPoly f = (ajp - aj) * BigRational(b, be) + aj - ak;
            if (f.is_zero()) continue;  // primed product
            r /= RatFunc(f);
        }
    }
    return r;
}

inline RatFunc contr_edge(int e, const DecoratedTree& t, const ModelParams& p) {
    const auto& ed = t.edges[static_cast<size_t>(e)];
    return contr_edge_data(t.vertices[static_cast<size_t>(ed.a)].j,
                           t.vertices[static_cast<size_t>(ed.b)].j, ed.beta, ed.ma, ed.mb, p);
}

// Flag contribution: inverse of the fixed-point pairing coefficient.
inline RatFunc contr_flag(int v, int e, const DecoratedTree& t, const ModelParams& p) {
    return eta_pairing(t.vertices[static_cast<size_t>(v)].j, t.flag(v, e), p).inverse();
}

struct Insertion {
    EqStateClass cls;
    long psi_power = 0;
};

// Unstable vertex contributions, one closed formula per kind.
inline RatFunc contr_unstable_vertex(int v, const DecoratedTree& t,
                                     const std::vector<Insertion>& insertions,
                                     const ModelParams& p) {
    VertexKind kind = classify_vertex(t, v, p);
    int ar = p.arity();
    long jv = t.vertices[static_cast<size_t>(v)].j;
    long bv = t.vertices[static_cast<size_t>(v)].beta;
    auto edges = t.edges_at(v);
    switch (kind) {
        case VertexKind::Stable:
            throw ContainsStableVertex("contr_unstable_vertex: vertex is stable");
        case VertexKind::UnstableVal2Node: {
            int e1 = edges[0], e2 = edges[1];
            long j1 = t.vertices[static_cast<size_t>(t.other_end(e1, v))].j;
            long j2 = t.vertices[static_cast<size_t>(t.other_end(e2, v))].j;
            MPoly av = MPoly::var(ar, static_cast<int>(jv));
            MPoly s1 = (av - MPoly::var(ar, static_cast<int>(j1))) *
                       BigRational(1, t.edges[static_cast<size_t>(e1)].beta);
            MPoly s2 = (av - MPoly::var(ar, static_cast<int>(j2))) *
                       BigRational(1, t.edges[static_cast<size_t>(e2)].beta);
            return eta_pairing(jv, t.flag(v, e1), p) / RatFunc(s1 + s2);
        }
        case VertexKind::UnstableVal2Mark: {
            int e = edges[0];
            int k = t.marks_at(v)[0];
            long jvp = t.vertices[static_cast<size_t>(t.other_end(e, v))].j;
            long be = t.edges[static_cast<size_t>(e)].beta;
            const Insertion& ins = insertions[static_cast<size_t>(k)];
            RatFunc x = ins.cls.coeff(jv, t.mark_sectors[static_cast<size_t>(k)]);
            MPoly psi = (MPoly::var(ar, static_cast<int>(jvp)) -
                         MPoly::var(ar, static_cast<int>(jv))) *
                        BigRational(1, be);
            return x * RatFunc(psi).pow(ins.psi_power) * eta_pairing(jv, t.flag(v, e), p);
        }
        case VertexKind::UnstableVal1: {
            if (edges.empty())
                throw InternalInvariantViolation(
                    "contr_unstable_vertex: marked single vertex has no edge formula");
            int e = edges[0];
            long jvp = t.vertices[static_cast<size_t>(t.other_end(e, v))].j;
            long be = t.edges[static_cast<size_t>(e)].beta;
            Multiplicity m = t.flag(v, e);
            MPoly aj = MPoly::var(ar, static_cast<int>(jv));
            MPoly ajp = MPoly::var(ar, static_cast<int>(jvp));
            RatFunc r = eta_pairing(jv, m, p) * RatFunc((aj - ajp) * BigRational(1, be));
            for (long i = 0; i < p.M(); ++i) {
                BigRational hi(p.weights[i] * (bv + 1), p.d());
                BigRational anchor(-m.numerator() * p.weights[i], p.d());
                for (const BigRational& b : b_progression(anchor, BigRational(0), hi, true, true)) {
                    MPoly f = (ajp - aj) * (b / BigRational(be)) -
                              aj * BigRational(p.weights[i], p.d());
                    r *= RatFunc(f);
                }
            }
            for (long k = 1; k <= p.N(); ++k) {
                MPoly ak = MPoly::var(ar, static_cast<int>(k));
                for (long b = 1; b <= bv; ++b) {
                    MPoly f = (aj - ajp) * BigRational(b, be) + aj - ak;
                    if (f.is_zero()) continue;  // primed product
                    r /= RatFunc(f);
                }
            }
            return r;
        }
    }
    throw InternalInvariantViolation("contr_unstable_vertex: unreachable");
}

// Product of all vertex, flag and edge contributions over |Aut|.  Every
// vertex must be unstable; a single marked vertex follows the graph-space
// convention (the paired vertex J-coefficient, a function of z).
inline RatFunc evaluate_fully_unstable_tree(const DecoratedTree& t,
                                            const std::vector<Insertion>& insertions,
                                            const ModelParams& p) {
    for (size_t v = 0; v < t.vertices.size(); ++v)
        if (classify_vertex(t, static_cast<int>(v), p) == VertexKind::Stable)
            throw ContainsStableVertex("evaluate_fully_unstable_tree: stable vertex present");
    if (t.vertices.size() == 1) {
        if (t.marks.size() != 1 || insertions.size() != 1)
            throw InternalInvariantViolation("single-vertex tree needs exactly one insertion");
        if (insertions[0].psi_power != 0)
            throw InternalInvariantViolation("single-vertex tree: psi powers unsupported");
        long jv = t.vertices[0].j;
        Multiplicity s = t.mark_sectors[0];
        RatFunc x = insertions[0].cls.coeff(jv, s);
        return x * eta_pairing(jv, s, p) * unstable_eq_value(t.vertices[0].beta, jv, p);
    }
    RatFunc r(p.arity(), BigRational(1, t.aut_order));
    for (size_t v = 0; v < t.vertices.size(); ++v)
        r *= contr_unstable_vertex(static_cast<int>(v), t, insertions, p);
    for (size_t e = 0; e < t.edges.size(); ++e) {
        const auto& ed = t.edges[e];
        r *= contr_flag(ed.a, static_cast<int>(e), t, p);
        r *= contr_flag(ed.b, static_cast<int>(e), t, p);
        r *= contr_edge(static_cast<int>(e), t, p);
    }
    return r;
}

}  // namespace hybridwc

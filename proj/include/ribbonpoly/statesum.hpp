/**
 * statesum.hpp
 *
 * Spanning-state sums over ribbon graphs: the multivariate transition
 * polynomial Z, the three-variable boundary polynomial R, the Tutte
 * polynomial, and the mark-classified sums a marked piece contributes to a
 * composition.  Everything is exact integer arithmetic; R is computed by two
 * independent expansions that are compared on every call.
 *
 * States of a piece fall into three classes by how they relate the marks:
 * both marks on one boundary walk, marks in one component but on two
 * different walks, or marks in two different components.
 */
#pragma once

#include <cstdlib>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "ribbonpoly/poly.hpp"
#include "ribbonpoly/ribbon.hpp"

namespace ribbonpoly {

inline int& state_budget() {
    static int budget = [] {
        if (const char* env = std::getenv("RIBBONPOLY_BUDGET")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
        return 20;
    }();
    return budget;
}

inline void check_budget(const RibbonGraph& g) {
    int limit = std::min(state_budget(), 62);
    if (g.edge_count() > limit)
        throw std::invalid_argument("state sum over " + std::to_string(g.edge_count()) +
                                    " edges exceeds the budget of " + std::to_string(limit) +
                                    " (raise RIBBONPOLY_BUDGET to allow more)");
}

namespace detail {

// Sum a per-state term over every state, splitting the range across threads
// when the state space is large.
template <class Term>
MultiPoly sum_over_states(const RibbonGraph& g, Term term) {
    check_budget(g);
    const StateMask total = g.full_state() + 1;
    auto run = [&g, &term](StateMask lo, StateMask hi) {
        MultiPoly acc;
        for (StateMask s = lo; s < hi; ++s) term(acc, s);
        return acc;
    };
    if (g.edge_count() < 15) return run(0, total);
    unsigned workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::future<MultiPoly>> parts;
    StateMask chunk = total / workers + 1;
    for (StateMask lo = 0; lo < total; lo += chunk) {
        StateMask hi = std::min(total, lo + chunk);
        parts.push_back(std::async(std::launch::async, run, lo, hi));
    }
    MultiPoly out;
    for (auto& p : parts) out += p.get();
    return out;
}

}  // namespace detail

// Z(G; a, x, c, d): a tracks components, one x variable per edge, c tracks
// boundary walks, d flags a non-orientable state.
inline MultiPoly z_multivariate(const RibbonGraph& g) {
    return detail::sum_over_states(g, [&g](MultiPoly& acc, StateMask s) {
        auto c = state_counts(g, s);
        Monomial m("a", c.k);
        m *= Monomial("c", c.boundary);
        if (c.t) m *= Monomial("d", 1);
        for (int i = 0; i < g.edge_count(); ++i)
            if (s >> i & 1) m *= Monomial(g.weight_var(i), 1);
        acc.add_term(m, 1);
    });
}

// Z(G; a, b, c, d) with every edge weighted by the same variable b.
inline MultiPoly z_single(const RibbonGraph& g) {
    return detail::sum_over_states(g, [&g](MultiPoly& acc, StateMask s) {
        auto c = state_counts(g, s);
        Monomial m("a", c.k);
        m *= Monomial("b", c.e);
        m *= Monomial("c", c.boundary);
        if (c.t) m *= Monomial("d", 1);
        acc.add_term(m, 1);
    });
}

// R(G; α, β, γ): corank in α-1, nullity in β, and the genus deficiency
// 2k - ∂ + n in γ.  Cross-checked against the substitution route through Z
// on every call.
inline MultiPoly br_polynomial(const RibbonGraph& g) {
    auto full = state_counts(g, g.full_state());
    const MultiPoly am1 = MultiPoly::var("α") - MultiPoly(1);
    MultiPoly r1 = detail::sum_over_states(g, [&](MultiPoly& acc, StateMask s) {
        auto c = state_counts(g, s);
        Monomial m("β", c.n);
        m *= Monomial("γ", c.euler_genus());
        acc += am1.pow(full.r - c.r).shifted(m);
    });

    MultiPoly z = z_multivariate(g);
    std::map<std::string, RationalFn> bind;
    bind["a"] = RationalFn(am1 * MultiPoly::var("β") * MultiPoly::var("γ", 2));
    bind["c"] = RationalFn(MultiPoly::var("γ", -1));
    bind["d"] = RationalFn(MultiPoly(1));
    MultiPoly bg = MultiPoly::var("β") * MultiPoly::var("γ");
    for (int i = 0; i < g.edge_count(); ++i) bind[g.weight_var(i)] = RationalFn(bg);
    Monomial unshift;
    unshift.exps["β"] = -g.vertex_count();
    unshift.exps["γ"] = -g.vertex_count();
    MultiPoly r2 = divide_exact(substitute_poly(z, bind).shifted(unshift), am1.pow(full.k));
    if (r1 != r2)
        throw std::runtime_error(
            "internal check failed: the rank-genus and boundary-count expansions disagree");
    return r1;
}

// T(G; x, y) by the corank-nullity sum; twists play no role here.
inline MultiPoly tutte(const RibbonGraph& g) {
    auto full = state_counts(g, g.full_state());
    const MultiPoly xm1 = MultiPoly::var("x") - MultiPoly(1);
    const MultiPoly ym1 = MultiPoly::var("y") - MultiPoly(1);
    return detail::sum_over_states(g, [&](MultiPoly& acc, StateMask s) {
        auto c = state_counts(g, s);
        acc += xm1.pow(full.r - c.r) * ym1.pow(c.n);
    });
}

// Component-level classification of a piece's states: marks joined or not.
struct MarkSplit {
    MultiPoly joined;  // sum of a^(k-1) b^e over states connecting the marks
    MultiPoly split;   // sum of a^(k-2) b^e over the others
};

inline MarkSplit phi_sums(const MarkedPiece& p) {
    const RibbonGraph& g = p.graph;
    check_budget(g);
    int vu = g.vertex_index(p.u), vw = g.vertex_index(p.w);
    MarkSplit out;
    const StateMask total = g.full_state() + 1;
    for (StateMask s = 0; s < total; ++s) {
        auto c = state_counts(g, s);
        auto comp = vertex_components(g, s);
        Monomial m("b", c.e);
        if (comp[vu] == comp[vw])
            out.joined.add_term(m * Monomial("a", c.k - 1), 1);
        else
            out.split.add_term(m * Monomial("a", c.k - 2), 1);
    }
    return out;
}

// Walk-level classification, with one variable per edge.  The three sums
// are normalized so that composition formulas multiply them directly:
//   one_walk        = sum over marks-on-one-walk   of a^(k-1) (prod x) c^(∂-1)
//   two_walks       = sum over marks-on-two-walks  of a^(k-1) (prod x) c^(∂-2)
//   two_components  = sum over marks-split         of a^(k-2) (prod x) c^(∂-2)
struct MarkWalkSplit {
    MultiPoly one_walk, two_walks, two_components;
};

namespace detail {

// The walk-level sums read orientations off the stored rotations, so a
// twisted edge, even one that keeps the piece orientable, can reverse how
// the boundary runs past a mark and break every gluing formula built on
// them.  Insisting on a twist-free presentation keeps the sums honest;
// normalize_piece produces one for any orientable piece.
inline void require_untwisted(const MarkedPiece& p, const char* what) {
    for (const Edge& e : p.graph.edges())
        if (e.twisted)
            throw std::invalid_argument(std::string(what) +
                                        " need a twist-free piece; normalize_piece gives one");
}

}  // namespace detail

inline MarkWalkSplit eta_sums(const MarkedPiece& p) {
    const RibbonGraph& g = p.graph;
    detail::require_untwisted(p, "walk sums");
    check_budget(g);
    int vu = g.vertex_index(p.u), vw = g.vertex_index(p.w);
    MarkWalkSplit out;
    const StateMask total = g.full_state() + 1;
    for (StateMask s = 0; s < total; ++s) {
        auto c = state_counts(g, s);
        auto comp = vertex_components(g, s);
        Monomial m("a", c.k - 1);
        for (int i = 0; i < g.edge_count(); ++i)
            if (s >> i & 1) m *= Monomial(g.weight_var(i), 1);
        if (comp[vu] != comp[vw]) {
            out.two_components.add_term(
                m * Monomial("a", -1) * Monomial("c", c.boundary - 2), 1);
            continue;
        }
        auto walks = boundary_walks(g, s);
        if (walk_of_arc(g, walks, p.m_arc, s) == walk_of_arc(g, walks, p.n_arc, s))
            out.one_walk.add_term(m * Monomial("c", c.boundary - 1), 1);
        else
            out.two_walks.add_term(m * Monomial("c", c.boundary - 2), 1);
    }
    return out;
}

inline MarkWalkSplit eta_sums_single(const MarkedPiece& p) {
    MarkWalkSplit x = eta_sums(p);
    std::map<std::string, RationalFn> to_b;
    for (int i = 0; i < p.graph.edge_count(); ++i)
        to_b[p.graph.weight_var(i)] = RationalFn(MultiPoly::var("b"));
    return MarkWalkSplit{substitute_poly(x.one_walk, to_b), substitute_poly(x.two_walks, to_b),
                         substitute_poly(x.two_components, to_b)};
}

// The p, q, r polynomials of the edge-replacement expansion:
//   p = ac * one_walk,  q = ac * two_components,  r = ac * two_walks.
struct PqrSums {
    MultiPoly p, q, r;
};

inline PqrSums pqr_multivariate(const MarkedPiece& piece) {
    MarkWalkSplit e = eta_sums(piece);
    Monomial ac;
    ac.exps = {{"a", 1}, {"c", 1}};
    return PqrSums{e.one_walk.shifted(ac), e.two_components.shifted(ac),
                   e.two_walks.shifted(ac)};
}

inline bool piece_is_orientable(const MarkedPiece& p) {
    return state_counts(p.graph, p.graph.full_state()).t == 0;
}

// True when the piece closed up by an untwisted mark-to-mark edge is a
// plane graph; subgraphs of a plane graph stay plane, so checking the full
// state suffices.
inline bool piece_closure_planar(const MarkedPiece& p) {
    std::string id = "closure";
    while (p.graph.has_edge(id)) id += "+";
    RibbonGraph a = insert_edge(p.graph, p.m_arc, p.n_arc, false, id);
    auto c = state_counts(a, a.full_state());
    return c.t == 0 && c.euler_genus() == 0;
}

// Invariants of the piece with a half-twisted mark-to-mark edge inserted
// and contracted.  Splitting that Z by the orientability flag d recovers q
// directly and pins down p and r:
//   d-free part = q,   d part = p + r,   Z(piece) - ac q = p + c r.
struct TwistInsertInvariants {
    MultiPoly q, d_part, remainder;
};

inline TwistInsertInvariants twist_insert_invariants(const MarkedPiece& p) {
    detail::require_untwisted(p, "twisted-insertion invariants");
    std::string id = "twist";
    while (p.graph.has_edge(id)) id += "+";
    RibbonGraph contracted = contract_nonloop(insert_edge(p.graph, p.m_arc, p.n_arc, true, id), id);
    MultiPoly z = z_single(contracted);
    TwistInsertInvariants out;
    out.q = z.coefficient_of("d", 0);
    out.d_part = z.coefficient_of("d", 1);
    Monomial ac;
    ac.exps = {{"a", 1}, {"c", 1}};
    out.remainder = z_single(p.graph) - out.q.shifted(ac);
    return out;
}

// State sum of the gadget expansion restricted to class representatives
// with the fewest edges: a loop f_e never appears without its link g_e.
inline MultiPoly phi_gtilde(const RibbonGraph& templ) {
    RibbonGraph gt = build_gtilde(templ);
    std::vector<std::pair<int, int>> fg;
    for (const Edge& e : templ.edges())
        fg.push_back({gt.edge_index("f_" + e.id), gt.edge_index("g_" + e.id)});
    return detail::sum_over_states(gt, [&gt, fg](MultiPoly& acc, StateMask s) {
        for (auto [f, g] : fg)
            if ((s >> f & 1) && !(s >> g & 1)) return;
        auto c = state_counts(gt, s);
        Monomial m("a", c.k);
        m *= Monomial("c", c.boundary);
        for (int i = 0; i < gt.edge_count(); ++i)
            if (s >> i & 1) m *= Monomial(gt.weight_var(i), 1);
        acc.add_term(m, 1);
    });
}

}  // namespace ribbonpoly

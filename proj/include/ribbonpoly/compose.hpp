#pragma once

// Composition formulas for 2-decompositions: the polynomial of the
// assembled graph from the template's state sum and per-edge piece
// summaries, plus the tensor-product specializations.  Every route checks
// itself against an independently derived expression and throws on any
// disagreement rather than returning a silently wrong polynomial.

#include <future>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ribbonpoly/ribbon.hpp"
#include "ribbonpoly/statesum.hpp"

namespace ribbonpoly {

// Per-edge slot weights consumed by the monomial maps; the names follow
// the walk classification of the piece spliced into that edge.
struct EdgeSlotWeights {
    MultiPoly one_walk, two_walks, two_components;
};

// A monomial map substitutes slot weights for the gadget variables f_<e>
// and g_<e> of a polynomial, one pattern per edge.  The representatives
// variant acts on sums over minimal class representatives; the averaged
// variant acts on full gadget state sums, where the disconnected class is
// counted twice (once as the empty pattern, once as the bare loop with a
// boundary circle to discount), so those slots carry 1/2 and 1/c.
struct MonomialMapSpec {
    enum class Variant { representatives, averaged };
    Variant variant = Variant::representatives;
    std::map<EdgeId, EdgeSlotWeights> weights;
};

inline MultiPoly apply_map(const MonomialMapSpec& spec, const MultiPoly& poly) {
    const bool averaged = spec.variant == MonomialMapSpec::Variant::averaged;
    const Rat half(1, 2);
    QPoly acc;
    for (const auto& [mono, coeff] : poly.terms()) {
        Monomial residual = mono;
        std::vector<std::pair<int, int>> patterns;
        for (const auto& [id, w] : spec.weights) {
            int alpha = residual.exponent("f_" + id);
            int beta = residual.exponent("g_" + id);
            if (alpha < 0 || alpha > 1 || beta < 0 || beta > 1)
                throw std::invalid_argument("map exponent outside {0,1} for edge " + id);
            residual.exps.erase("f_" + id);
            residual.exps.erase("g_" + id);
            patterns.push_back({alpha, beta});
        }
        QPoly term(residual, Rat(coeff));
        int at = 0;
        for (const auto& [id, w] : spec.weights) {
            auto [alpha, beta] = patterns[at++];
            if (beta == 1) {
                term = term * to_qpoly(alpha == 1 ? w.two_walks : w.one_walk);
            } else {
                term = term * to_qpoly(w.two_components);
                if (averaged) {
                    term = term * QPoly(half);
                    if (alpha == 1) term = term.shifted(Monomial("c", -1));
                }
            }
        }
        acc += term;
    }
    MultiPoly out;
    for (const auto& [m, c] : acc.terms()) {
        if (boost::multiprecision::denominator(c) != 1)
            throw std::runtime_error(
                "internal check failed: the averaged map left fractional coefficients");
        out.add_term(m, boost::multiprecision::numerator(c));
    }
    return out;
}

namespace detail {

// Walk summaries of every piece at the single-variable level, with each
// piece re-presented twist-free first.  A piece whose marks force a flip
// moves its half-twist onto the template edge, so the template comes back
// possibly re-twisted; an edge without a piece acts as its own piece.
struct DecompositionSums {
    RibbonGraph templ;
    std::map<EdgeId, EdgeSlotWeights> sums;
};

inline DecompositionSums walk_summaries(const TwoDecomposition& d) {
    std::map<EdgeId, std::future<std::pair<MarkWalkSplit, bool>>> jobs;
    for (const auto& [id, pp] : d.pieces)
        jobs.emplace(id, std::async(std::launch::async, [piece = pp.first] {
                         NormalizedPiece np = normalize_piece(piece);
                         return std::make_pair(eta_sums_single(np.piece), np.template_twist);
                     }));
    DecompositionSums out;
    std::map<EdgeId, bool> toggles;
    for (auto& [id, job] : jobs) {
        auto [eta, toggled] = job.get();
        out.sums[id] = EdgeSlotWeights{eta.one_walk, eta.two_walks, eta.two_components};
        toggles[id] = toggled;
    }
    std::vector<Edge> es = d.templ.edges();
    for (auto& e : es) {
        if (toggles.count(e.id) && toggles[e.id]) e.twisted = !e.twisted;
        if (!out.sums.count(e.id))
            out.sums[e.id] = EdgeSlotWeights{MultiPoly::var("b"), MultiPoly(), MultiPoly(1)};
    }
    out.templ = RibbonGraph(d.templ.vertices(), std::move(es));
    return out;
}

}  // namespace detail

// Z(Ĝ; a, b) of the assembled decomposition from the template's component
// counts and the per-piece mark-connectivity sums.  Twists never matter at
// this level, so any decomposition the 2-sum accepts is fine.
inline MultiPoly compose_tutte(const TwoDecomposition& d) {
    const RibbonGraph& g = d.templ;
    check_budget(g);
    std::map<EdgeId, std::future<MarkSplit>> jobs;
    for (const auto& [id, pp] : d.pieces)
        jobs.emplace(id, std::async(std::launch::async,
                                    [piece = pp.first] { return phi_sums(piece); }));
    std::vector<MultiPoly> joined(g.edge_count()), split(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) {
        const EdgeId& id = g.edges()[i].id;
        if (jobs.count(id)) {
            MarkSplit phi = jobs.at(id).get();
            joined[i] = phi.joined;
            split[i] = phi.split;
        } else {
            joined[i] = MultiPoly::var("b");
            split[i] = MultiPoly(1);
        }
    }
    MultiPoly acc;
    const StateMask total = g.full_state() + 1;
    for (StateMask s = 0; s < total; ++s) {
        auto comp = vertex_components(g, s);
        int k = 0;
        for (int c : comp) k = std::max(k, c + 1);
        MultiPoly term(Monomial("a", k), 1);
        for (int i = 0; i < g.edge_count(); ++i) term = term * (s >> i & 1 ? joined[i] : split[i]);
        acc += term;
    }
    return acc;
}

// Z(Ĝ; a, b, c) when every piece closes up to a plane graph: the template
// keeps its own boundary bookkeeping and each edge contributes its
// one-walk sum when present and its split sum when absent.
inline MultiPoly compose_br_planar(const TwoDecomposition& d) {
    for (const auto& [id, pp] : d.pieces)
        if (!piece_closure_planar(pp.first))
            throw std::invalid_argument("the piece for edge " + id +
                                        " must close up to a plane graph");
    detail::DecompositionSums ds = detail::walk_summaries(d);
    const RibbonGraph& g = ds.templ;
    check_budget(g);
    std::vector<MultiPoly> present(g.edge_count()), absent(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) {
        const EdgeSlotWeights& w = ds.sums.at(g.edges()[i].id);
        if (!w.two_walks.is_zero())
            throw std::runtime_error(
                "internal check failed: a plane-closing piece split its marks across walks");
        if (g.edges()[i].twisted != d.templ.edges()[i].twisted)
            throw std::runtime_error(
                "internal check failed: a plane-closing piece forced a template twist");
        present[i] = w.one_walk;
        absent[i] = w.two_components;
    }
    MultiPoly acc;
    const StateMask total = g.full_state() + 1;
    for (StateMask s = 0; s < total; ++s) {
        auto c = state_counts(g, s);
        Monomial m("a", c.k);
        m *= Monomial("c", c.boundary);
        if (c.t) m *= Monomial("d", 1);
        MultiPoly term(m, 1);
        for (int i = 0; i < g.edge_count(); ++i) term = term * (s >> i & 1 ? present[i] : absent[i]);
        acc += term;
    }
    return acc;
}

// Z(Ĝ; a, b, c) for orientable decompositions of any genus: the template
// edges are replaced by loop-plus-link gadgets, the gadget graph's state
// sum is pushed through the averaged monomial map, and the result is
// cross-checked against the representatives route.
inline MultiPoly compose_br_general(const TwoDecomposition& d) {
    detail::DecompositionSums ds = detail::walk_summaries(d);
    // A piece whose marks sit in different components never joins the ends of
    // its template edge, so that edge drops out of every state: delete it and
    // carry its absent-edge weight as a plain factor.  Twists on such edges
    // are absorbable and must not trip the orientability check below.
    MultiPoly dangling(1);
    for (auto it = ds.sums.begin(); it != ds.sums.end();) {
        if (it->second.one_walk.is_zero() && it->second.two_walks.is_zero()) {
            dangling = dangling * it->second.two_components;
            ds.templ = delete_edge(ds.templ, it->first);
            it = ds.sums.erase(it);
        } else {
            ++it;
        }
    }
    try {
        untwist_by_flips(ds.templ);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("the assembled decomposition is not orientable");
    }
    MonomialMapSpec averaged{MonomialMapSpec::Variant::averaged, ds.sums};
    MonomialMapSpec representatives{MonomialMapSpec::Variant::representatives, ds.sums};
    MultiPoly za = apply_map(averaged, z_multivariate(build_gtilde(ds.templ)));
    MultiPoly zb = apply_map(representatives, phi_gtilde(ds.templ));
    if (za != zb)
        throw std::runtime_error("internal check failed: the two gadget expansions disagree");
    for (const auto& [var, e] : za.min_exponents().exps)
        if (e < 0)
            throw std::runtime_error(
                "internal check failed: the composed polynomial kept a negative exponent");
    return dangling * za;
}

// T(G⊗A; x, y) by the corank-nullity sum over template states with the
// piece's connectivity sums turned into the edge weights h and h': present
// edges weigh h', absent ones h.  The weights are checked against the
// Tutte polynomials of the open and closed-contracted piece.
inline MultiPoly brylawski(const RibbonGraph& templ, const MarkedPiece& piece) {
    const RibbonGraph& h = piece.graph;
    auto comps = vertex_components(h, h.full_state());
    if (comps[h.vertex_index(piece.u)] != comps[h.vertex_index(piece.w)])
        throw std::invalid_argument("the marked vertices must lie in one component of the piece");
    MarkSplit phi = phi_sums(piece);
    const MultiPoly xm1 = MultiPoly::var("x") - MultiPoly(1);
    const MultiPoly ym1 = MultiPoly::var("y") - MultiPoly(1);
    std::map<std::string, RationalFn> bind = {{"a", RationalFn(xm1 * ym1)},
                                              {"b", RationalFn(ym1)}};
    const int k = state_counts(h, h.full_state()).k, v = h.vertex_count();
    MultiPoly hh = divide_exact(substitute_poly(phi.split, bind), xm1.pow(k - 1) * ym1.pow(v - 2));
    MultiPoly hp = divide_exact(substitute_poly(phi.joined, bind), xm1.pow(k - 1) * ym1.pow(v - 1));
    std::string id = "join";
    while (h.has_edge(id)) id += "+";
    RibbonGraph closed = insert_edge(h, piece.m_arc, piece.n_arc, false, id);
    if (xm1 * hh + hp != tutte(h) || hh + ym1 * hp != tutte(contract_nonloop(closed, id)))
        throw std::runtime_error(
            "internal check failed: the tensor weights do not solve their linear system");
    check_budget(templ);
    auto full = state_counts(templ, templ.full_state());
    MultiPoly acc;
    const StateMask total = templ.full_state() + 1;
    for (StateMask s = 0; s < total; ++s) {
        auto c = state_counts(templ, s);
        acc += xm1.pow(full.r - c.r) * ym1.pow(c.n) * hh.pow(templ.edge_count() - c.e) *
               hp.pow(c.e);
    }
    return acc;
}

// R(G⊗A; α, β, γ) for a piece that closes up to a plane graph, by the same
// state sum with the template's genus tracked in γ.  The weights come from
// the walk sums under the boundary-count substitution and are checked
// against the piece's own polynomials.
inline MultiPoly brylawski_br(const RibbonGraph& templ, const MarkedPiece& piece) {
    if (!piece_closure_planar(piece))
        throw std::invalid_argument("the piece closed at its marks must be a plane graph");
    {
        const RibbonGraph& h = piece.graph;
        auto comps = vertex_components(h, h.full_state());
        if (comps[h.vertex_index(piece.u)] != comps[h.vertex_index(piece.w)])
            throw std::invalid_argument(
                "the marked vertices must lie in one component of the piece");
    }
    NormalizedPiece np = normalize_piece(piece);
    if (np.template_twist)
        throw std::runtime_error(
            "internal check failed: a plane-closing piece forced a template twist");
    MarkWalkSplit eta = eta_sums_single(np.piece);
    if (!eta.two_walks.is_zero())
        throw std::runtime_error(
            "internal check failed: a plane-closing piece split its marks across walks");
    MultiPoly f = eta.one_walk, g2 = eta.two_components;
    const MultiPoly am1 = MultiPoly::var("α") - MultiPoly(1);
    const MultiPoly beta = MultiPoly::var("β");
    std::map<std::string, RationalFn> bind = {
        {"a", RationalFn(am1 * beta * MultiPoly::var("γ", 2))},
        {"b", RationalFn(beta * MultiPoly::var("γ"))},
        {"c", RationalFn(MultiPoly::var("γ", -1))},
    };
    const RibbonGraph& hg = np.piece.graph;
    const int k = state_counts(hg, hg.full_state()).k, v = hg.vertex_count();
    auto shift = [](int be, int ge) {
        Monomial m;
        if (be != 0) m.exps["β"] = be;
        if (ge != 0) m.exps["γ"] = ge;
        return m;
    };
    MultiPoly hh =
        divide_exact(substitute_poly(g2, bind).shifted(shift(2 - v, 2 - v)), am1.pow(k - 1));
    MultiPoly hp =
        divide_exact(substitute_poly(f, bind).shifted(shift(1 - v, 1 - v)), am1.pow(k - 1));
    std::string id = "join";
    while (hg.has_edge(id)) id += "+";
    RibbonGraph closed = insert_edge(hg, np.piece.m_arc, np.piece.n_arc, false, id);
    if (am1 * hh + hp != br_polynomial(hg) ||
        hh + beta * hp != br_polynomial(contract_nonloop(closed, id)))
        throw std::runtime_error(
            "internal check failed: the tensor weights do not solve their linear system");
    check_budget(templ);
    auto full = state_counts(templ, templ.full_state());
    MultiPoly acc;
    const StateMask total = templ.full_state() + 1;
    for (StateMask s = 0; s < total; ++s) {
        auto c = state_counts(templ, s);
        Monomial m("β", c.n);
        m *= Monomial("γ", c.euler_genus());
        acc += (am1.pow(full.r - c.r) * hh.pow(templ.edge_count() - c.e) * hp.pow(c.e)).shifted(m);
    }
    return acc;
}

}  // namespace ribbonpoly

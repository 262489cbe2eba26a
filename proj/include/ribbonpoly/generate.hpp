/**
 * generate.hpp
 *
 * Graph sources for the test suites: an exhaustive walk over all rotation
 * systems on a fixed edge list (small edge counts only) and seeded random
 * graphs, marked pieces, and decompositions.
 */
#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ribbonpoly/ribbon.hpp"

namespace ribbonpoly {

// Every ribbon graph on exactly `edges` labeled edges, with every twist
// pattern: each permutation of the 2*edges half-edge slots, read off by
// cycles, is one rotation system.  720 * 8 graphs at three edges.
inline std::vector<RibbonGraph> all_graphs_with_edges(int edges) {
    std::vector<RibbonGraph> out;
    const int n = 2 * edges;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto half = [](int slot) {
        return "e" + std::to_string(slot / 2) + ":" + std::to_string(slot % 2 + 1);
    };
    do {
        std::vector<char> seen(n, 0);
        std::vector<Vertex> vs;
        for (int s = 0; s < n; ++s) {
            if (seen[s]) continue;
            Vertex v{"v" + std::to_string(vs.size()), {}};
            for (int c = s; !seen[c]; c = perm[c]) {
                seen[c] = 1;
                v.rotation.push_back(half(c));
            }
            vs.push_back(std::move(v));
        }
        for (int tw = 0; tw < (1 << edges); ++tw) {
            std::vector<Edge> es;
            for (int i = 0; i < edges; ++i)
                es.push_back(Edge{"e" + std::to_string(i), {half(2 * i), half(2 * i + 1)},
                                  (tw >> i & 1) != 0, std::nullopt});
            out.push_back(RibbonGraph(vs, std::move(es)));
        }
        if (n == 0) break;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline std::vector<RibbonGraph> all_graphs_up_to_edges(int max_edges) {
    std::vector<RibbonGraph> out;
    for (int e = 0; e <= max_edges; ++e) {
        auto batch = all_graphs_with_edges(e);
        out.insert(out.end(), batch.begin(), batch.end());
    }
    return out;
}

inline RibbonGraph random_graph(std::mt19937_64& rng, int edges, int vertices,
                                double twist_prob = 0.0) {
    if (vertices < 1) throw std::invalid_argument("random graph needs a vertex");
    std::vector<Vertex> vs(vertices);
    for (int v = 0; v < vertices; ++v) vs[v].id = "v" + std::to_string(v);
    std::vector<int> slots(2 * edges);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    std::uniform_int_distribution<int> pick_vertex(0, vertices - 1);
    std::bernoulli_distribution twist(twist_prob);
    auto half = [](int slot) {
        return "e" + std::to_string(slot / 2) + ":" + std::to_string(slot % 2 + 1);
    };
    for (int s : slots) vs[pick_vertex(rng)].rotation.push_back(half(s));
    std::vector<Edge> es;
    for (int i = 0; i < edges; ++i)
        es.push_back(Edge{"e" + std::to_string(i), {half(2 * i), half(2 * i + 1)}, twist(rng),
                          std::nullopt});
    return RibbonGraph(std::move(vs), std::move(es));
}

// Connected variant: retries until the full state spans one component.
inline RibbonGraph random_connected_graph(std::mt19937_64& rng, int edges, int vertices,
                                          double twist_prob = 0.0) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        RibbonGraph g = random_graph(rng, edges, vertices, twist_prob);
        if (state_counts(g, g.full_state()).k == 1) return g;
    }
    throw std::runtime_error("could not sample a connected graph");
}

inline MarkedPiece random_piece(std::mt19937_64& rng, int edges, int vertices,
                                double twist_prob = 0.0) {
    if (vertices < 2) throw std::invalid_argument("a marked piece needs two vertices");
    RibbonGraph g = random_graph(rng, edges, vertices, twist_prob);
    std::uniform_int_distribution<int> pick(0, vertices - 1);
    int u = pick(rng), w;
    do {
        w = pick(rng);
    } while (w == u);
    auto arc_at = [&](int v) {
        int len = static_cast<int>(g.vertices()[v].rotation.size());
        std::uniform_int_distribution<int> gap(0, len);
        return ArcPos{g.vertices()[v].id, gap(rng)};
    };
    return MarkedPiece(g, g.vertices()[u].id, g.vertices()[w].id, arc_at(u), arc_at(w));
}

inline TwoDecomposition random_decomposition(std::mt19937_64& rng, int template_edges,
                                             int template_vertices, int piece_edges,
                                             int piece_vertices, double twist_prob = 0.0,
                                             double piece_twist_prob = 0.0) {
    TwoDecomposition d;
    d.templ = random_graph(rng, template_edges, template_vertices, twist_prob);
    std::bernoulli_distribution coin(0.5);
    for (const Edge& e : d.templ.edges()) {
        if (e.twisted && d.templ.is_loop(d.templ.edge_index(e.id))) continue;
        MarkedPiece p = random_piece(rng, piece_edges, piece_vertices, piece_twist_prob);
        d.pieces.emplace(e.id, std::make_pair(std::move(p),
                                              PieceOptions{coin(rng), coin(rng)}));
    }
    return d;
}

}  // namespace ribbonpoly

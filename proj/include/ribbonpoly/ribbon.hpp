/**
 * ribbon.hpp
 *
 * Ribbon graphs as rotation systems: each vertex carries a cyclic order of
 * half-edges, each edge joins two half-edges and may be twisted.  Spanning
 * states are bitmasks over the edge list.  Boundary components of a state
 * are traced on a corner graph: every half-edge present in the state gets a
 * clockwise and a counterclockwise corner, gaps between consecutive rotation
 * entries join adjacent corners, and ribbon sides join corners across an
 * edge (straight when untwisted, crossed when twisted).  The resulting
 * 2-regular graph decomposes into cycles, one per boundary walk.
 *
 * Arc positions address gaps in the full rotation of a vertex; when a state
 * omits edges, a gap is folded onto the surviving rotation by counting the
 * included entries in front of it.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ribbonpoly {

using VertexId = std::string;
using EdgeId = std::string;
using HalfEdgeId = std::string;
using StateMask = std::uint64_t;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArcPos {
    VertexId vertex;
    int gap = 0;
};

struct Vertex {
    VertexId id;
    std::vector<HalfEdgeId> rotation;
};

struct Edge {
    EdgeId id;
    std::array<HalfEdgeId, 2> ends;
    bool twisted = false;
    std::optional<std::string> weight;
};

struct HalfEdgeLoc {
    int vertex = -1;
    int pos = -1;
    int edge = -1;
    int end = -1;
};

class RibbonGraph {
public:
    RibbonGraph() = default;
    RibbonGraph(std::vector<Vertex> vs, std::vector<Edge> es)
        : vertices_(std::move(vs)), edges_(std::move(es)) {
        auto errs = violations(vertices_, edges_);
        if (!errs.empty()) {
            std::string msg = "invalid ribbon graph:";
            for (const auto& e : errs) msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
        build_index();
    }

    // All structural problems at once, each naming the offending id.
    static std::vector<std::string> violations(const std::vector<Vertex>& vs,
                                               const std::vector<Edge>& es) {
        std::vector<std::string> errs;
        std::map<VertexId, int> vseen;
        for (const auto& v : vs) {
            if (v.id.empty()) errs.push_back("vertex with empty id");
            if (++vseen[v.id] == 2) errs.push_back("duplicate vertex id: " + v.id);
        }
        std::map<EdgeId, int> eseen;
        std::map<HalfEdgeId, int> declared;
        for (const auto& e : es) {
            if (e.id.empty()) errs.push_back("edge with empty id");
            if (++eseen[e.id] == 2) errs.push_back("duplicate edge id: " + e.id);
            if (e.ends[0] == e.ends[1])
                errs.push_back("edge " + e.id + " repeats half-edge " + e.ends[0]);
            for (const auto& h : e.ends) {
                if (h.empty()) errs.push_back("edge " + e.id + " has an empty half-edge id");
                if (++declared[h] == 2) errs.push_back("half-edge claimed twice: " + h);
            }
        }
        std::map<HalfEdgeId, int> placed;
        for (const auto& v : vs)
            for (const auto& h : v.rotation) {
                if (!declared.count(h))
                    errs.push_back("rotation of " + v.id + " mentions unknown half-edge " + h);
                if (++placed[h] == 2) errs.push_back("half-edge placed twice: " + h);
            }
        for (const auto& [h, n] : declared)
            if (!placed.count(h)) errs.push_back("half-edge never placed: " + h);
        return errs;
    }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    int vertex_index(const VertexId& id) const {
        auto it = vindex_.find(id);
        if (it == vindex_.end()) throw std::invalid_argument("unknown vertex id: " + id);
        return it->second;
    }
    int edge_index(const EdgeId& id) const {
        auto it = eindex_.find(id);
        if (it == eindex_.end()) throw std::invalid_argument("unknown edge id: " + id);
        return it->second;
    }
    bool has_vertex(const VertexId& id) const { return vindex_.count(id) != 0; }
    bool has_edge(const EdgeId& id) const { return eindex_.count(id) != 0; }

    const HalfEdgeLoc& locate(const HalfEdgeId& h) const {
        auto it = hindex_.find(h);
        if (it == hindex_.end()) throw std::invalid_argument("unknown half-edge id: " + h);
        return it->second;
    }

    bool is_loop(int edge_idx) const {
        const Edge& e = edges_[edge_idx];
        return locate(e.ends[0]).vertex == locate(e.ends[1]).vertex;
    }

    // Variable name an edge contributes to the multivariate state sum.
    std::string weight_var(int edge_idx) const {
        const Edge& e = edges_[edge_idx];
        return e.weight ? *e.weight : "x_" + e.id;
    }

    StateMask full_state() const {
        int n = edge_count();
        if (n > 64) throw std::invalid_argument("more than 64 edges in a state mask");
        return n == 64 ? ~StateMask(0) : (StateMask(1) << n) - 1;
    }

    StateMask state_of(const std::vector<EdgeId>& included) const {
        StateMask m = 0;
        for (const auto& id : included) m |= StateMask(1) << edge_index(id);
        return m;
    }

private:
    void build_index() {
        for (int i = 0; i < vertex_count(); ++i) vindex_[vertices_[i].id] = i;
        for (int i = 0; i < edge_count(); ++i) {
            eindex_[edges_[i].id] = i;
            hindex_[edges_[i].ends[0]] = HalfEdgeLoc{-1, -1, i, 0};
            hindex_[edges_[i].ends[1]] = HalfEdgeLoc{-1, -1, i, 1};
        }
        for (int v = 0; v < vertex_count(); ++v) {
            const auto& rot = vertices_[v].rotation;
            for (int p = 0; p < static_cast<int>(rot.size()); ++p) {
                auto& loc = hindex_.at(rot[p]);
                loc.vertex = v;
                loc.pos = p;
            }
        }
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::map<VertexId, int> vindex_;
    std::map<EdgeId, int> eindex_;
    std::map<HalfEdgeId, HalfEdgeLoc> hindex_;
};

namespace detail {

class ParityDsu {
public:
    explicit ParityDsu(int n) : parent_(n), rank_(n, 0), parity_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    // Root of x, with parity_ updated to the parity of the path to the root.
    int find(int x) {
        if (parent_[x] == x) return x;
        int r = find(parent_[x]);
        parity_[x] ^= parity_[parent_[x]];
        parent_[x] = r;
        return r;
    }
    int parity(int x) {
        find(x);
        return parity_[x];
    }
    // Returns false when the requested relation contradicts an earlier one.
    bool join(int a, int b, int rel) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return (parity_[a] ^ parity_[b]) == rel;
        if (rank_[ra] < rank_[rb]) {
            std::swap(ra, rb);
            std::swap(a, b);
        }
        parent_[rb] = ra;
        parity_[rb] = parity_[a] ^ parity_[b] ^ rel;
        if (rank_[ra] == rank_[rb]) ++rank_[ra];
        return true;
    }

private:
    std::vector<int> parent_, rank_, parity_;
};

}  // namespace detail

struct StateCounts {
    int k = 0;
    int e = 0;
    int r = 0;
    int n = 0;
    int boundary = 0;
    int t = 0;
    int euler_genus() const { return k - boundary + n; }
};

struct BoundaryWalks {
    int count = 0;
    // gap_walk[v][g] = walk id of gap g in the surviving rotation of vertex
    // v; a vertex isolated by the state keeps one gap of its own.
    std::vector<std::vector<int>> gap_walk;
};

inline BoundaryWalks boundary_walks(const RibbonGraph& g, StateMask s) {
    const int E = g.edge_count(), V = g.vertex_count();
    // Corner id: 2 * (2 * edge + end) + (0 clockwise | 1 counterclockwise).
    std::vector<int> gap_partner(4 * E, -1), ribbon_partner(4 * E, -1);
    std::vector<std::pair<int, int>> corner_gap(4 * E, {-1, -1});
    BoundaryWalks out;
    out.gap_walk.assign(V, {});
    for (int v = 0; v < V; ++v) {
        std::vector<int> eff;
        for (const auto& h : g.vertices()[v].rotation) {
            const auto& loc = g.locate(h);
            if (s >> loc.edge & 1) eff.push_back(2 * loc.edge + loc.end);
        }
        const int L = static_cast<int>(eff.size());
        out.gap_walk[v].assign(std::max(L, 1), -1);
        for (int j = 0; j < L; ++j) {
            int ccw_prev = 2 * eff[(j + L - 1) % L] + 1;
            int cw_here = 2 * eff[j];
            gap_partner[ccw_prev] = cw_here;
            gap_partner[cw_here] = ccw_prev;
            corner_gap[ccw_prev] = corner_gap[cw_here] = {v, j};
        }
    }
    for (int i = 0; i < E; ++i) {
        if (!(s >> i & 1)) continue;
        int cw0 = 2 * (2 * i), ccw0 = cw0 + 1;
        int cw1 = 2 * (2 * i + 1), ccw1 = cw1 + 1;
        if (g.edges()[i].twisted) {
            ribbon_partner[cw0] = cw1;
            ribbon_partner[cw1] = cw0;
            ribbon_partner[ccw0] = ccw1;
            ribbon_partner[ccw1] = ccw0;
        } else {
            ribbon_partner[cw0] = ccw1;
            ribbon_partner[ccw1] = cw0;
            ribbon_partner[ccw0] = cw1;
            ribbon_partner[cw1] = ccw0;
        }
    }
    std::vector<char> seen(4 * E, 0);
    for (int c0 = 0; c0 < 4 * E; ++c0) {
        if (gap_partner[c0] < 0 || seen[c0]) continue;
        int id = out.count++;
        int c = c0;
        do {
            seen[c] = 1;
            out.gap_walk[corner_gap[c].first][corner_gap[c].second] = id;
            int across = ribbon_partner[c];
            seen[across] = 1;
            out.gap_walk[corner_gap[across].first][corner_gap[across].second] = id;
            c = gap_partner[across];
        } while (c != c0);
    }
    for (int v = 0; v < V; ++v)
        if (out.gap_walk[v].size() == 1 && out.gap_walk[v][0] == -1)
            out.gap_walk[v][0] = out.count++;
    return out;
}

inline int boundary_components(const RibbonGraph& g, StateMask s) {
    return boundary_walks(g, s).count;
}

// Component label per vertex under the state's edges.
inline std::vector<int> vertex_components(const RibbonGraph& g, StateMask s) {
    detail::ParityDsu dsu(g.vertex_count());
    for (int i = 0; i < g.edge_count(); ++i) {
        if (!(s >> i & 1)) continue;
        const Edge& e = g.edges()[i];
        dsu.join(g.locate(e.ends[0]).vertex, g.locate(e.ends[1]).vertex, 0);
    }
    std::vector<int> comp(g.vertex_count(), -1);
    std::map<int, int> relabel;
    for (int v = 0; v < g.vertex_count(); ++v) {
        int root = dsu.find(v);
        auto [it, fresh] = relabel.try_emplace(root, static_cast<int>(relabel.size()));
        comp[v] = it->second;
    }
    return comp;
}

inline StateCounts state_counts(const RibbonGraph& g, StateMask s) {
    StateCounts c;
    detail::ParityDsu dsu(g.vertex_count());
    int merges = 0;
    bool orientable = true;
    for (int i = 0; i < g.edge_count(); ++i) {
        if (!(s >> i & 1)) continue;
        ++c.e;
        const Edge& e = g.edges()[i];
        int a = g.locate(e.ends[0]).vertex, b = g.locate(e.ends[1]).vertex;
        if (dsu.find(a) != dsu.find(b)) ++merges;
        if (!dsu.join(a, b, e.twisted ? 1 : 0)) orientable = false;
    }
    c.k = g.vertex_count() - merges;
    c.r = g.vertex_count() - c.k;
    c.n = c.e - c.r;
    c.boundary = boundary_components(g, s);
    c.t = orientable ? 0 : 1;
    return c;
}

// Fold a gap of the full rotation onto the rotation surviving in a state.
inline int effective_gap(const RibbonGraph& g, const ArcPos& arc, StateMask s) {
    int v = g.vertex_index(arc.vertex);
    const auto& rot = g.vertices()[v].rotation;
    const int len = static_cast<int>(rot.size());
    if (arc.gap < 0 || arc.gap > len)
        throw std::invalid_argument("arc gap out of range at vertex " + arc.vertex);
    int eff_len = 0, before = 0;
    for (int p = 0; p < len; ++p) {
        if (!(s >> g.locate(rot[p]).edge & 1)) continue;
        ++eff_len;
        if (p < arc.gap) ++before;
    }
    return eff_len == 0 ? 0 : before % eff_len;
}

inline int walk_of_arc(const RibbonGraph& g, const BoundaryWalks& w, const ArcPos& arc,
                       StateMask s) {
    return w.gap_walk[g.vertex_index(arc.vertex)][effective_gap(g, arc, s)];
}

inline RibbonGraph delete_edge(const RibbonGraph& g, const EdgeId& id) {
    int idx = g.edge_index(id);
    const Edge& e = g.edges()[idx];
    std::vector<Vertex> vs = g.vertices();
    for (auto& v : vs)
        v.rotation.erase(std::remove_if(v.rotation.begin(), v.rotation.end(),
                                        [&](const HalfEdgeId& h) {
                                            return h == e.ends[0] || h == e.ends[1];
                                        }),
                         v.rotation.end());
    std::vector<Edge> es = g.edges();
    es.erase(es.begin() + idx);
    return RibbonGraph(std::move(vs), std::move(es));
}

inline RibbonGraph flip_vertex(const RibbonGraph& g, const VertexId& id) {
    int vi = g.vertex_index(id);
    std::vector<Vertex> vs = g.vertices();
    std::reverse(vs[vi].rotation.begin(), vs[vi].rotation.end());
    std::vector<Edge> es = g.edges();
    for (auto& e : es) {
        int at = (g.locate(e.ends[0]).vertex == vi) + (g.locate(e.ends[1]).vertex == vi);
        if (at == 1) e.twisted = !e.twisted;
    }
    return RibbonGraph(std::move(vs), std::move(es));
}

// Mirror image: every rotation reversed, twists kept.
inline RibbonGraph reversed(const RibbonGraph& g) {
    std::vector<Vertex> vs = g.vertices();
    for (auto& v : vs) std::reverse(v.rotation.begin(), v.rotation.end());
    return RibbonGraph(std::move(vs), g.edges());
}

// Remove all twists by vertex flips, or fail when no flip set can.
inline RibbonGraph untwist_by_flips(const RibbonGraph& g) {
    detail::ParityDsu dsu(g.vertex_count());
    for (const Edge& e : g.edges()) {
        int a = g.locate(e.ends[0]).vertex, b = g.locate(e.ends[1]).vertex;
        if (!dsu.join(a, b, e.twisted ? 1 : 0))
            throw std::invalid_argument("graph is not orientable");
    }
    RibbonGraph out = g;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (dsu.parity(v)) out = flip_vertex(out, g.vertices()[v].id);
    for (const Edge& e : out.edges())
        if (e.twisted) throw std::runtime_error("vertex flips left a twisted edge");
    return out;
}

inline RibbonGraph contract_nonloop(const RibbonGraph& g, const EdgeId& id) {
    int idx = g.edge_index(id);
    const Edge& e = g.edges()[idx];
    int vu = g.locate(e.ends[0]).vertex, vw = g.locate(e.ends[1]).vertex;
    if (vu == vw) throw std::invalid_argument("contracting a loop is not supported: " + id);
    if (e.twisted) return contract_nonloop(flip_vertex(g, g.vertices()[vw].id), id);
    std::vector<Vertex> vs;
    const auto& rot_u = g.vertices()[vu].rotation;
    const auto& rot_w = g.vertices()[vw].rotation;
    int pw = g.locate(e.ends[1]).pos;
    std::vector<HalfEdgeId> opened;
    for (int i = 1; i < static_cast<int>(rot_w.size()); ++i)
        opened.push_back(rot_w[(pw + i) % rot_w.size()]);
    Vertex merged{g.vertices()[vu].id, {}};
    for (const auto& h : rot_u) {
        if (h == e.ends[0])
            merged.rotation.insert(merged.rotation.end(), opened.begin(), opened.end());
        else
            merged.rotation.push_back(h);
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v == vw) continue;
        vs.push_back(v == vu ? merged : g.vertices()[v]);
    }
    std::vector<Edge> es = g.edges();
    es.erase(es.begin() + idx);
    return RibbonGraph(std::move(vs), std::move(es));
}

inline RibbonGraph insert_edge(const RibbonGraph& g, const ArcPos& m, const ArcPos& n,
                               bool twisted, const EdgeId& id,
                               std::optional<std::string> weight = std::nullopt) {
    if (m.vertex == n.vertex)
        throw std::invalid_argument("inserting an edge needs two distinct endpoints");
    std::vector<Vertex> vs = g.vertices();
    auto splice_half = [&](const ArcPos& arc, const HalfEdgeId& h) {
        auto& rot = vs[g.vertex_index(arc.vertex)].rotation;
        if (arc.gap < 0 || arc.gap > static_cast<int>(rot.size()))
            throw std::invalid_argument("arc gap out of range at vertex " + arc.vertex);
        rot.insert(rot.begin() + arc.gap, h);
    };
    splice_half(m, id + ":1");
    splice_half(n, id + ":2");
    std::vector<Edge> es = g.edges();
    es.push_back(Edge{id, {id + ":1", id + ":2"}, twisted, std::move(weight)});
    return RibbonGraph(std::move(vs), std::move(es));
}

struct MarkedPiece {
    RibbonGraph graph;
    VertexId u, w;
    ArcPos m_arc, n_arc;

    MarkedPiece() = default;
    MarkedPiece(RibbonGraph g, VertexId uu, VertexId ww, ArcPos m, ArcPos n)
        : graph(std::move(g)), u(std::move(uu)), w(std::move(ww)), m_arc(std::move(m)),
          n_arc(std::move(n)) {
        if (u == w) throw std::invalid_argument("marked vertices must be distinct");
        if (m_arc.vertex != u || n_arc.vertex != w)
            throw std::invalid_argument("arcs must sit on the marked vertices");
        for (const ArcPos* a : {&m_arc, &n_arc}) {
            int len = static_cast<int>(graph.vertices()[graph.vertex_index(a->vertex)].rotation.size());
            if (a->gap < 0 || a->gap > len)
                throw std::invalid_argument("arc gap out of range at vertex " + a->vertex);
        }
    }
};

struct PieceOptions {
    bool swap_ends = false;
    bool flip = false;
};

namespace detail {

inline MarkedPiece flipped_piece(const MarkedPiece& p) {
    auto remap = [&](const ArcPos& a) {
        int len = static_cast<int>(
            p.graph.vertices()[p.graph.vertex_index(a.vertex)].rotation.size());
        return ArcPos{a.vertex, len == 0 ? 0 : (len - a.gap) % len};
    };
    return MarkedPiece(reversed(p.graph), p.u, p.w, remap(p.m_arc), remap(p.n_arc));
}

inline std::vector<HalfEdgeId> opened_at_gap(const std::vector<HalfEdgeId>& rot, int gap) {
    const int len = static_cast<int>(rot.size());
    if (len == 0) return {};
    gap %= len;
    std::vector<HalfEdgeId> out;
    for (int i = 0; i < len; ++i) out.push_back(rot[(gap + i) % len]);
    return out;
}

}  // namespace detail

struct NormalizedPiece {
    MarkedPiece piece;
    bool template_twist = false;
};

// Re-present an orientable piece with every twist bit cleared by flipping a
// parity-consistent set of vertices, preferring not to flip the marked ones.
// When the marks sit in one component whose parities force flipping exactly
// one of them, the flip amounts to a half-twist in the gluing; the returned
// flag says the receiving template edge must be treated as twisted instead.
inline NormalizedPiece normalize_piece(const MarkedPiece& p) {
    const RibbonGraph& g = p.graph;
    const int n = g.vertex_count();
    detail::ParityDsu dsu(n);
    for (const Edge& e : g.edges()) {
        int a = g.locate(e.ends[0]).vertex, b = g.locate(e.ends[1]).vertex;
        if (!dsu.join(a, b, e.twisted ? 1 : 0))
            throw std::invalid_argument("piece is not orientable");
    }
    const int iu = g.vertex_index(p.u), iw = g.vertex_index(p.w);
    std::map<int, int> offset;
    offset[dsu.find(iu)] = dsu.parity(iu);
    bool toggled = false;
    if (dsu.find(iw) == dsu.find(iu))
        toggled = (dsu.parity(iw) ^ offset[dsu.find(iw)]) != 0;
    else
        offset[dsu.find(iw)] = dsu.parity(iw);
    RibbonGraph out = g;
    std::vector<bool> flipped(n, false);
    for (int v = 0; v < n; ++v) {
        auto it = offset.find(dsu.find(v));
        int adj = it == offset.end() ? 0 : it->second;
        if ((dsu.parity(v) ^ adj) != 0) {
            out = flip_vertex(out, g.vertices()[v].id);
            flipped[v] = true;
        }
    }
    for (const Edge& e : out.edges())
        if (e.twisted) throw std::runtime_error("vertex flips left a twisted edge");
    auto remap = [&](const ArcPos& a, int vi) {
        if (!flipped[vi]) return a;
        int len = static_cast<int>(g.vertices()[vi].rotation.size());
        return ArcPos{a.vertex, len == 0 ? 0 : (len - a.gap) % len};
    };
    return {MarkedPiece(std::move(out), p.u, p.w, remap(p.m_arc, iu), remap(p.n_arc, iw)),
            toggled};
}

// Splice a marked piece into the place of a template edge.  The spliced
// copy's vertices and edges get ids prefixed with "<edge>.", and the two
// marked rotations are opened at their arcs and inlined where the template
// half-edges sat.  A twisted template edge is first straightened by flipping
// its far endpoint; a twisted loop has no consistent side to attach to.
inline RibbonGraph two_sum(const RibbonGraph& templ, const EdgeId& edge_id,
                           const MarkedPiece& piece, const PieceOptions& opt = {}) {
    int eidx = templ.edge_index(edge_id);
    if (templ.edges()[eidx].twisted) {
        if (templ.is_loop(eidx))
            throw std::invalid_argument("cannot splice into a twisted loop: " + edge_id);
        const Edge& e = templ.edges()[eidx];
        return two_sum(flip_vertex(templ, templ.vertices()[templ.locate(e.ends[1]).vertex].id),
                       edge_id, piece, opt);
    }
    const Edge& e = templ.edges()[eidx];
    MarkedPiece p = opt.flip ? detail::flipped_piece(piece) : piece;

    const std::string prefix = edge_id + ".";
    std::map<HalfEdgeId, HalfEdgeId> hmap;
    std::vector<Edge> new_edges;
    for (const Edge& pe : p.graph.edges()) {
        Edge ne{prefix + pe.id, {prefix + pe.id + ":1", prefix + pe.id + ":2"}, pe.twisted,
                pe.weight};
        hmap[pe.ends[0]] = ne.ends[0];
        hmap[pe.ends[1]] = ne.ends[1];
        new_edges.push_back(std::move(ne));
    }
    auto renamed = [&](const std::vector<HalfEdgeId>& rot) {
        std::vector<HalfEdgeId> out;
        for (const auto& h : rot) out.push_back(hmap.at(h));
        return out;
    };

    int pu = p.graph.vertex_index(p.u), pw = p.graph.vertex_index(p.w);
    auto seq_u = detail::opened_at_gap(renamed(p.graph.vertices()[pu].rotation), p.m_arc.gap);
    auto seq_w = detail::opened_at_gap(renamed(p.graph.vertices()[pw].rotation), p.n_arc.gap);
    const HalfEdgeId& at_u = opt.swap_ends ? e.ends[1] : e.ends[0];
    const HalfEdgeId& at_w = opt.swap_ends ? e.ends[0] : e.ends[1];

    std::vector<Vertex> vs;
    for (const Vertex& v : templ.vertices()) {
        Vertex nv{v.id, {}};
        for (const auto& h : v.rotation) {
            if (h == at_u)
                nv.rotation.insert(nv.rotation.end(), seq_u.begin(), seq_u.end());
            else if (h == at_w)
                nv.rotation.insert(nv.rotation.end(), seq_w.begin(), seq_w.end());
            else
                nv.rotation.push_back(h);
        }
        vs.push_back(std::move(nv));
    }
    for (int v = 0; v < p.graph.vertex_count(); ++v) {
        if (v == pu || v == pw) continue;
        const Vertex& pv = p.graph.vertices()[v];
        vs.push_back(Vertex{prefix + pv.id, renamed(pv.rotation)});
    }
    std::vector<Edge> es;
    for (int i = 0; i < templ.edge_count(); ++i)
        if (i != eidx) es.push_back(templ.edges()[i]);
    es.insert(es.end(), new_edges.begin(), new_edges.end());
    return RibbonGraph(std::move(vs), std::move(es));
}

struct TwoDecomposition {
    RibbonGraph templ;
    std::map<EdgeId, std::pair<MarkedPiece, PieceOptions>> pieces;
};

inline RibbonGraph assemble(const TwoDecomposition& d) {
    RibbonGraph g = d.templ;
    for (const auto& [edge_id, pp] : d.pieces) g = two_sum(g, edge_id, pp.first, pp.second);
    return g;
}

// Same piece spliced into every template edge; explicit weight labels are
// dropped so each copy gets its own default variables.
inline RibbonGraph tensor_product(const RibbonGraph& templ, const MarkedPiece& piece) {
    MarkedPiece stripped = piece;
    {
        std::vector<Edge> es = stripped.graph.edges();
        for (auto& e : es) e.weight.reset();
        stripped.graph = RibbonGraph(stripped.graph.vertices(), std::move(es));
    }
    RibbonGraph g = templ;
    std::vector<EdgeId> ids;
    for (const Edge& e : templ.edges()) ids.push_back(e.id);
    for (const auto& id : ids) g = two_sum(g, id, stripped);
    return g;
}

namespace detail {

// The two-edge gadget standing in for one template edge: a loop f wrapped
// around one attachment point and a link g to the other.  The four ways a
// state can meet {f, g} must reproduce the four ways a spliced piece can
// relate its marks: connected with marks on one walk ({g}), connected with
// marks on two walks ({f, g}), and disconnected ({f} and the empty set).
inline void check_gadget_semantics() {
    std::vector<Vertex> vs = {{"u", {"f:1", "g:1", "f:2"}}, {"w", {"g:2"}}};
    std::vector<Edge> es = {{"f", {"f:1", "f:2"}, false, std::nullopt},
                            {"g", {"g:1", "g:2"}, false, std::nullopt}};
    RibbonGraph gad(std::move(vs), std::move(es));
    ArcPos m{"u", 0}, n{"w", 0};
    auto fail = [] { throw std::runtime_error("splice gadget lost its marking semantics"); };

    StateMask only_g = gad.state_of({"g"}), both = gad.state_of({"f", "g"});
    StateMask only_f = gad.state_of({"f"}), none = 0;
    auto cg = state_counts(gad, only_g);
    auto wg = boundary_walks(gad, only_g);
    if (cg.k != 1 || cg.boundary != 1 ||
        walk_of_arc(gad, wg, m, only_g) != walk_of_arc(gad, wg, n, only_g))
        fail();
    auto cb = state_counts(gad, both);
    auto wb = boundary_walks(gad, both);
    if (cb.k != 1 || cb.boundary != 2 ||
        walk_of_arc(gad, wb, m, both) == walk_of_arc(gad, wb, n, both))
        fail();
    if (state_counts(gad, only_f).k != 2 || state_counts(gad, none).k != 2) fail();
}

}  // namespace detail

// Replace every edge by its loop-plus-link gadget.  The input is first made
// twist-free by vertex flips, so it must be orientable.  The fresh edges are
// named f_<edge> and g_<edge> and weighted by variables of the same name.
inline RibbonGraph build_gtilde(const RibbonGraph& templ) {
    detail::check_gadget_semantics();
    RibbonGraph g = untwist_by_flips(templ);
    std::map<HalfEdgeId, std::vector<HalfEdgeId>> expand;
    std::vector<Edge> es;
    for (const Edge& e : g.edges()) {
        std::string f = "f_" + e.id, gg = "g_" + e.id;
        expand[e.ends[0]] = {f + ":1", gg + ":1", f + ":2"};
        expand[e.ends[1]] = {gg + ":2"};
        es.push_back(Edge{f, {f + ":1", f + ":2"}, false, f});
        es.push_back(Edge{gg, {gg + ":1", gg + ":2"}, false, gg});
    }
    std::vector<Vertex> vs;
    for (const Vertex& v : g.vertices()) {
        Vertex nv{v.id, {}};
        for (const auto& h : v.rotation) {
            const auto& seq = expand.at(h);
            nv.rotation.insert(nv.rotation.end(), seq.begin(), seq.end());
        }
        vs.push_back(std::move(nv));
    }
    return RibbonGraph(std::move(vs), std::move(es));
}

}  // namespace ribbonpoly

// Link diagrams from PD codes: the all-A smoothing state, the ribbon graph it
// spans, the Kauffman bracket evaluated through the boundary polynomial, an
// independent skein oracle, writhe, and the Jones polynomial.
//
// PD convention: X(a,b,c,d) lists the four arc ids around a crossing in
// counterclockwise planar order starting at the incoming under-strand, so the
// under-strand runs a -> c and the over-strand occupies b and d.  The
// A-smoothing joins (a,d) and (b,c); the B-smoothing joins (a,b) and (c,d).

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ribbonpoly/ribbon.hpp"
#include "ribbonpoly/statesum.hpp"

namespace ribbonpoly {

struct LinkDiagram {
    std::vector<std::array<int, 4>> crossings;
};

// Accepts "X(1,4,2,5) X(3,6,4,1) ..." and bracket variants such as the
// PD[X[4,2,5,1],...] form; an empty text is the 0-crossing unknot.
inline LinkDiagram parse_pd(const std::string& text) {
    LinkDiagram d;
    std::size_t i = 0;
    auto skip_filler = [&] {
        while (i < text.size()) {
            char ch = text[i];
            if (ch == 'P' && i + 1 < text.size() && text[i + 1] == 'D') {
                i += 2;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '[' ||
                ch == ']') {
                ++i;
                continue;
            }
            break;
        }
    };
    skip_filler();
    while (i < text.size()) {
        if (text[i] != 'X' && text[i] != 'x')
            throw parse_error("expected a crossing starting with X at offset " +
                              std::to_string(i));
        ++i;
        std::array<int, 4> tuple{};
        for (int slot = 0; slot < 4; ++slot) {
            while (i < text.size()) {
                char ch = text[i];
                if (std::isdigit(static_cast<unsigned char>(ch))) break;
                if (ch == '-') throw parse_error("arc ids must be positive integers");
                if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '(' ||
                    ch == '[') {
                    ++i;
                    continue;
                }
                throw parse_error(std::string("unexpected character '") + ch +
                                  "' inside a crossing tuple");
            }
            if (i >= text.size())
                throw parse_error("crossing tuple ended before four arc ids were read");
            long v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                v = v * 10 + (text[i++] - '0');
            if (v <= 0) throw parse_error("arc ids must be positive integers");
            tuple[slot] = static_cast<int>(v);
        }
        while (i < text.size() && (text[i] == ')' || text[i] == ']')) ++i;
        d.crossings.push_back(tuple);
        skip_filler();
    }
    std::map<int, int> uses;
    for (const auto& t : d.crossings)
        for (int a : t) ++uses[a];
    for (const auto& [arc, count] : uses)
        if (count != 2)
            throw parse_error("arc " + std::to_string(arc) + " appears " +
                              std::to_string(count) + " times, expected exactly 2");
    if (!d.crossings.empty()) {
        std::vector<int> group(d.crossings.size());
        for (std::size_t ci = 0; ci < group.size(); ++ci) group[ci] = static_cast<int>(ci);
        auto root = [&](int x) {
            while (group[x] != x) x = group[x] = group[group[x]];
            return x;
        };
        std::map<int, int> first_seen;
        for (std::size_t ci = 0; ci < d.crossings.size(); ++ci)
            for (int a : d.crossings[ci]) {
                auto it = first_seen.find(a);
                if (it == first_seen.end())
                    first_seen[a] = static_cast<int>(ci);
                else
                    group[root(it->second)] = root(static_cast<int>(ci));
            }
        for (std::size_t ci = 0; ci < d.crossings.size(); ++ci)
            if (root(static_cast<int>(ci)) != root(0))
                throw parse_error("the crossings do not form one connected diagram");
    }
    return d;
}

struct StateCircles {
    struct Visit {
        int crossing;
        int corner;  // 0: the smoothing arc on slots {0,3}; 1: on slots {1,2}
    };
    struct ChordEnd {
        int circle;
        int visit;
    };
    std::vector<std::vector<Visit>> circles;
    std::vector<std::array<ChordEnd, 2>> chords;  // indexed by crossing
};

namespace detail {

// dart = 4*crossing + slot; mate of a dart is the dart at the far end of its
// arc.
inline std::vector<int> arc_mates(const LinkDiagram& d) {
    std::vector<int> mate(4 * d.crossings.size(), -1);
    std::map<int, int> open_end;
    for (std::size_t ci = 0; ci < d.crossings.size(); ++ci)
        for (int s = 0; s < 4; ++s) {
            int arc = d.crossings[ci][s];
            int dart = static_cast<int>(4 * ci) + s;
            auto it = open_end.find(arc);
            if (it == open_end.end()) {
                open_end[arc] = dart;
            } else {
                mate[dart] = it->second;
                mate[it->second] = dart;
                open_end.erase(it);
            }
        }
    return mate;
}

struct TracedState {
    StateCircles state;
    // Slot at which each smoothing arc was entered while tracing its circle,
    // fixing the traversal direction the visit order reflects.
    std::vector<std::array<int, 2>> entry_slot;
};

// Walk the circles of the all-A smoothing.  Each crossing contributes the
// corner arc joining slots {0,3} and the one joining {1,2}; a circle
// alternates between corner arcs and diagram arcs.
inline TracedState trace_a_state(const LinkDiagram& d) {
    TracedState out;
    const int n = static_cast<int>(d.crossings.size());
    out.entry_slot.assign(n, {-1, -1});
    if (n == 0) {
        out.state.circles.push_back({});
        return out;
    }
    std::vector<int> mate = arc_mates(d);
    auto corner_of = [](int slot) { return (slot == 0 || slot == 3) ? 0 : 1; };
    auto partner = [](int slot) {
        switch (slot) {
            case 0: return 3;
            case 3: return 0;
            case 1: return 2;
            default: return 1;
        }
    };
    out.state.chords.assign(
        n, {StateCircles::ChordEnd{-1, -1}, StateCircles::ChordEnd{-1, -1}});
    std::vector<char> corner_seen(2 * n, 0);
    for (int c0 = 0; c0 < 2 * n; ++c0) {
        if (corner_seen[c0]) continue;
        std::vector<StateCircles::Visit> circle;
        int ci = c0 / 2;
        int slot = c0 % 2 == 0 ? 0 : 1;
        while (true) {
            int corner = corner_of(slot);
            if (corner_seen[2 * ci + corner]) break;
            corner_seen[2 * ci + corner] = 1;
            out.entry_slot[ci][corner] = slot;
            out.state.chords[ci][corner] = {static_cast<int>(out.state.circles.size()),
                                            static_cast<int>(circle.size())};
            circle.push_back({ci, corner});
            int next = mate[4 * ci + partner(slot)];
            ci = next / 4;
            slot = next % 4;
        }
        out.state.circles.push_back(std::move(circle));
    }
    return out;
}

struct DiagramOrientation {
    // Entry slot of the oriented under / over strand at each crossing, after
    // giving every component the direction under which its under-strands
    // enter at slot 0.
    std::vector<int> under_entry, over_entry;
    int components = 0;
};

inline DiagramOrientation orient_strands(const LinkDiagram& d) {
    const int n = static_cast<int>(d.crossings.size());
    DiagramOrientation out;
    out.under_entry.assign(n, -1);
    out.over_entry.assign(n, -1);
    if (n == 0) {
        out.components = 1;
        return out;
    }
    std::vector<int> mate = arc_mates(d);
    std::vector<char> seen(4 * n, 0);
    for (int start = 0; start < 4 * n; ++start) {
        if (seen[start]) continue;
        ++out.components;
        std::vector<int> entries;
        int dart = start;
        while (!seen[dart]) {
            seen[dart] = 1;
            entries.push_back(dart);
            int exit = 4 * (dart / 4) + (dart % 4 + 2) % 4;
            int next = mate[exit];
            seen[4 * (next / 4) + (next % 4 + 2) % 4] = 1;
            dart = next;
        }
        int zeros = 0, twos = 0;
        for (int e : entries) {
            if (e % 4 == 0) ++zeros;
            if (e % 4 == 2) ++twos;
        }
        if (zeros > 0 && twos > 0)
            throw std::invalid_argument(
                "the arc numbering admits no consistent orientation");
        bool reversed = twos > 0;
        for (int e : entries) {
            int ci = e / 4, s = e % 4;
            int entry = reversed ? (s + 2) % 4 : s;
            if (s % 2 == 0)
                out.under_entry[ci] = entry;
            else
                out.over_entry[ci] = entry;
        }
    }
    return out;
}

}  // namespace detail

inline int writhe(const LinkDiagram& d) {
    if (d.crossings.empty()) return 0;
    detail::DiagramOrientation o = detail::orient_strands(d);
    int w = 0;
    for (std::size_t ci = 0; ci < d.crossings.size(); ++ci)
        w += o.over_entry[ci] == (o.under_entry[ci] + 1) % 4 ? 1 : -1;
    return w;
}

inline StateCircles all_a_state(const LinkDiagram& d) {
    return detail::trace_a_state(d).state;
}

// The ribbon graph spanned by the all-A state: one vertex per circle with the
// chord ends in traversal order, one edge per crossing.  With the crossing
// drawn at the compass center and slots 0..3 at S,E,N,W, the corner arc
// through {0,3} rounds the SW corner and the one through {1,2} rounds the NE
// corner; a circle entering the SW arc at S, or the NE arc at N, keeps the
// crossing on its right.  A band between two circle arcs preserves the disk
// orientations induced by the traversal directions exactly when both arcs
// run along the same side of it, so the edge is recorded twisted when the
// sides differ.  Vertex flips then remove every twist; a failure would mean
// the circles did not bound disjoint disks and is reported as internal.
inline RibbonGraph ribbon_of_diagram(const LinkDiagram& d) {
    detail::TracedState tr = detail::trace_a_state(d);
    const int n = static_cast<int>(d.crossings.size());
    std::vector<Vertex> vs(tr.state.circles.size());
    for (std::size_t v = 0; v < tr.state.circles.size(); ++v) {
        vs[v].id = "c" + std::to_string(v);
        for (const auto& visit : tr.state.circles[v])
            vs[v].rotation.push_back("x" + std::to_string(visit.crossing) + ":" +
                                     (visit.corner == 0 ? "1" : "2"));
    }
    std::vector<Edge> es;
    for (int ci = 0; ci < n; ++ci) {
        bool sw_right = tr.entry_slot[ci][0] == 0;
        bool ne_right = tr.entry_slot[ci][1] == 2;
        std::string id = "x" + std::to_string(ci);
        es.push_back(Edge{id, {id + ":1", id + ":2"}, sw_right != ne_right, std::nullopt});
    }
    RibbonGraph g(std::move(vs), std::move(es));
    if (n == 0) return g;
    try {
        return untwist_by_flips(g);
    } catch (const std::exception&) {
        throw std::runtime_error(
            "internal check failed: the all-A ribbon graph would not untwist");
    }
}

// <D> = A^{n(F)-r(F)} R(F; -A^4, -1-A^-4, (-A^2-A^-2)^-1) over the all-A
// ribbon graph F.  The inverse powers of -A^2-A^-2 must clear; the division
// is checked and the exact Laurent polynomial in A returned.
inline MultiPoly kauffman_bracket(const LinkDiagram& d) {
    RibbonGraph f = ribbon_of_diagram(d);
    MultiPoly r = br_polynomial(f);
    StateCounts full = state_counts(f, f.full_state());
    MultiPoly delta = -MultiPoly::var("A", 2) - MultiPoly::var("A", -2);
    std::map<std::string, RationalFn> bind;
    bind["α"] = RationalFn(-MultiPoly::var("A", 4));
    bind["β"] = RationalFn(MultiPoly(-1) - MultiPoly::var("A", -4));
    bind["γ"] = RationalFn(MultiPoly(1), delta);
    RationalFn value = substitute(r, bind);
    try {
        return value.to_polynomial().shifted(Monomial("A", full.n - full.r));
    } catch (const std::exception&) {
        throw std::runtime_error(
            "internal check failed: the bracket evaluation kept a denominator");
    }
}

// Independent check: expand all 2^n smoothings, join arc ends per smoothing
// with a union-find, count circles, and weigh each state by
// A^{#A - #B} (-A^2-A^-2)^{circles - 1}.
inline MultiPoly bracket_oracle(const LinkDiagram& d) {
    const int n = static_cast<int>(d.crossings.size());
    int budget = 16;
    if (const char* env = std::getenv("RIBBONPOLY_BUDGET")) budget = std::atoi(env);
    if (n > budget)
        throw std::invalid_argument("the skein expansion is limited to " +
                                    std::to_string(budget) +
                                    " crossings; this diagram has " + std::to_string(n));
    std::set<int> arcs;
    for (const auto& t : d.crossings) arcs.insert(t.begin(), t.end());
    MultiPoly delta = -MultiPoly::var("A", 2) - MultiPoly::var("A", -2);
    MultiPoly total;
    for (unsigned long state = 0; state < (1ul << n); ++state) {
        std::map<int, int> parent;
        auto find = [&](int x) {
            while (true) {
                auto it = parent.find(x);
                if (it == parent.end() || it->second == x) return x;
                x = it->second;
            }
        };
        auto unite = [&](int x, int y) {
            int rx = find(x), ry = find(y);
            if (rx != ry) parent[rx] = ry;
        };
        int a_count = 0;
        for (int ci = 0; ci < n; ++ci) {
            const auto& t = d.crossings[ci];
            if (state >> ci & 1) {
                unite(t[0], t[1]);
                unite(t[2], t[3]);
            } else {
                ++a_count;
                unite(t[0], t[3]);
                unite(t[1], t[2]);
            }
        }
        std::set<int> roots;
        for (int a : arcs) roots.insert(find(a));
        int circles = arcs.empty() ? 1 : static_cast<int>(roots.size());
        MultiPoly term(1);
        for (int k = 1; k < circles; ++k) term = term * delta;
        total += term.shifted(Monomial("A", 2 * a_count - n));
    }
    return total;
}

// J = ((-A^3)^-w <D>) rewritten at A = q^-1 and reported as a Laurent
// polynomial in q, where q stands for t^{1/4}.  The sign stays with the
// writhe factor, which leaves the unknot with a positive kink at J = 1.
inline MultiPoly jones(const LinkDiagram& d) {
    const int w = writhe(d);
    MultiPoly f = kauffman_bracket(d).shifted(Monomial("A", -3 * w));
    if (w % 2 != 0) f = -f;
    MultiPoly out;
    for (const auto& [m, c] : f.terms()) out.add_term(Monomial("q", -m.exponent("A")), c);
    return out;
}

}  // namespace ribbonpoly

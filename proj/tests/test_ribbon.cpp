#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ribbonpoly/generate.hpp"
#include "ribbonpoly/ribbon.hpp"

using namespace ribbonpoly;

namespace {

RibbonGraph loop_graph(bool twisted) {
    return RibbonGraph({{"v", {"e:1", "e:2"}}}, {{"e", {"e:1", "e:2"}, twisted, std::nullopt}});
}

RibbonGraph bouquet2() {
    return RibbonGraph({{"v", {"e:1", "f:1", "e:2", "f:2"}}},
                       {{"e", {"e:1", "e:2"}, false, std::nullopt},
                        {"f", {"f:1", "f:2"}, false, std::nullopt}});
}

RibbonGraph single_edge() {
    return RibbonGraph({{"u", {"e:1"}}, {"w", {"e:2"}}},
                       {{"e", {"e:1", "e:2"}, false, std::nullopt}});
}

RibbonGraph cycle_graph(int n) {
    std::vector<Vertex> vs;
    std::vector<Edge> es;
    auto eid = [](int i) { return "e" + std::to_string(i); };
    for (int i = 0; i < n; ++i) {
        int prev = (i + n - 1) % n;
        vs.push_back(Vertex{"v" + std::to_string(i), {eid(prev) + ":2", eid(i) + ":1"}});
        es.push_back(Edge{eid(i), {eid(i) + ":1", eid(i) + ":2"}, false, std::nullopt});
    }
    return RibbonGraph(std::move(vs), std::move(es));
}

MarkedPiece path_piece(int edges) {
    std::vector<Vertex> vs;
    std::vector<Edge> es;
    auto eid = [](int i) { return "a" + std::to_string(i); };
    for (int i = 0; i <= edges; ++i) {
        Vertex v{"p" + std::to_string(i), {}};
        if (i > 0) v.rotation.push_back(eid(i - 1) + ":2");
        if (i < edges) v.rotation.push_back(eid(i) + ":1");
        vs.push_back(std::move(v));
    }
    for (int i = 0; i < edges; ++i)
        es.push_back(Edge{eid(i), {eid(i) + ":1", eid(i) + ":2"}, false, std::nullopt});
    RibbonGraph g(std::move(vs), std::move(es));
    return MarkedPiece(g, "p0", "p" + std::to_string(edges), ArcPos{"p0", 0},
                       ArcPos{"p" + std::to_string(edges), 0});
}

std::multiset<std::array<int, 4>> count_profile(const RibbonGraph& g) {
    std::multiset<std::array<int, 4>> prof;
    for (StateMask s = 0; s <= g.full_state(); ++s) {
        auto c = state_counts(g, s);
        prof.insert({c.k, c.e, c.boundary, c.t});
        if (s == g.full_state()) break;
    }
    return prof;
}

}  // namespace

TEST_CASE("boundary walks of the basic surfaces") {
    CHECK(boundary_components(loop_graph(false), 1) == 2);
    CHECK(boundary_components(loop_graph(true), 1) == 1);
    CHECK(boundary_components(bouquet2(), 3) == 1);
    CHECK(boundary_components(single_edge(), 1) == 1);
    CHECK(boundary_components(cycle_graph(3), cycle_graph(3).full_state()) == 2);
    CHECK(boundary_components(cycle_graph(3), 0) == 3);
    RibbonGraph lone({{"v", {}}}, {});
    CHECK(boundary_components(lone, 0) == 1);
}

TEST_CASE("state counts on the basic surfaces") {
    auto c = state_counts(cycle_graph(3), cycle_graph(3).full_state());
    CHECK(c.k == 1);
    CHECK(c.e == 3);
    CHECK(c.r == 2);
    CHECK(c.n == 1);
    CHECK(c.boundary == 2);
    CHECK(c.t == 0);
    CHECK(c.euler_genus() == 0);

    auto tl = state_counts(loop_graph(true), 1);
    CHECK(tl.k == 1);
    CHECK(tl.boundary == 1);
    CHECK(tl.t == 1);
    CHECK(tl.euler_genus() == 1);

    auto b = state_counts(bouquet2(), 3);
    CHECK(b.boundary == 1);
    CHECK(b.t == 0);
    CHECK(b.euler_genus() == 2);
}

TEST_CASE("orientable states have even genus") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        RibbonGraph g = random_graph(rng, 6, 3, 0.4);
        for (StateMask s = 0; s < (StateMask(1) << 6); ++s) {
            auto c = state_counts(g, s);
            CHECK(c.euler_genus() >= 0);
            if (c.t == 0) CHECK(c.euler_genus() % 2 == 0);
        }
    }
}

TEST_CASE("structural violations are all reported") {
    std::vector<Vertex> vs = {{"v", {"e:1", "e:1"}}, {"v", {}}};
    std::vector<Edge> es = {{"e", {"e:1", "e:2"}, false, std::nullopt},
                            {"e", {"f:1", "f:2"}, false, std::nullopt}};
    auto errs = RibbonGraph::violations(vs, es);
    auto has = [&](const std::string& needle) {
        for (const auto& m : errs)
            if (m.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(has("duplicate vertex id: v"));
    CHECK(has("duplicate edge id: e"));
    CHECK(has("half-edge placed twice: e:1"));
    CHECK(has("half-edge never placed: e:2"));
    CHECK_THROWS_AS(RibbonGraph(vs, es), std::invalid_argument);
}

TEST_CASE("deletion and contraction preserve state counts") {
    for (const RibbonGraph& g : all_graphs_up_to_edges(3)) {
        for (int ei = 0; ei < g.edge_count(); ++ei) {
            const EdgeId id = g.edges()[ei].id;
            RibbonGraph del = delete_edge(g, id);
            for (StateMask s = 0; s < (StateMask(1) << del.edge_count()); ++s) {
                StateMask lifted = 0;
                for (int j = 0; j < del.edge_count(); ++j)
                    if (s >> j & 1) lifted |= StateMask(1) << g.edge_index(del.edges()[j].id);
                auto a = state_counts(del, s), b = state_counts(g, lifted);
                REQUIRE(a.k == b.k);
                REQUIRE(a.boundary == b.boundary);
                REQUIRE(a.t == b.t);
            }
            if (g.is_loop(ei)) continue;
            RibbonGraph con = contract_nonloop(g, id);
            for (StateMask s = 0; s < (StateMask(1) << con.edge_count()); ++s) {
                StateMask lifted = StateMask(1) << ei;
                for (int j = 0; j < con.edge_count(); ++j)
                    if (s >> j & 1) lifted |= StateMask(1) << g.edge_index(con.edges()[j].id);
                auto a = state_counts(con, s), b = state_counts(g, lifted);
                REQUIRE(a.k == b.k);
                REQUIRE(a.boundary == b.boundary);
                REQUIRE(a.n == b.n);
                REQUIRE(a.t == b.t);
            }
        }
    }
}

TEST_CASE("contracting a twisted edge leaves the loop twisted") {
    RibbonGraph g({{"u", {"e:1", "f:1"}}, {"w", {"e:2", "f:2"}}},
                  {{"e", {"e:1", "e:2"}, true, std::nullopt},
                   {"f", {"f:1", "f:2"}, false, std::nullopt}});
    RibbonGraph c = contract_nonloop(g, "e");
    REQUIRE(c.vertex_count() == 1);
    REQUIRE(c.edge_count() == 1);
    CHECK(c.edges()[0].id == "f");
    CHECK(c.edges()[0].twisted);
    auto cc = state_counts(c, 1);
    CHECK(cc.boundary == 1);
    CHECK(cc.t == 1);
    CHECK_THROWS_AS(contract_nonloop(c, "f"), std::invalid_argument);
}

TEST_CASE("splicing paths into a digon lengthens the cycle") {
    RibbonGraph tri = two_sum(cycle_graph(2), "e1", path_piece(2));
    REQUIRE(tri.vertex_count() == 3);
    REQUIRE(tri.edge_count() == 3);
    auto c = state_counts(tri, tri.full_state());
    CHECK(c.k == 1);
    CHECK(c.boundary == 2);
    CHECK(c.euler_genus() == 0);
    CHECK(count_profile(tri) == count_profile(cycle_graph(3)));
    RibbonGraph sq = two_sum(cycle_graph(2), "e1", path_piece(3));
    CHECK(count_profile(sq) == count_profile(cycle_graph(4)));
}

TEST_CASE("splicing a path into a loop gives a cycle") {
    RibbonGraph g = two_sum(loop_graph(false), "e", path_piece(2));
    REQUIRE(g.vertex_count() == 2);
    REQUIRE(g.edge_count() == 2);
    CHECK(count_profile(g) == count_profile(cycle_graph(2)));
}

TEST_CASE("the four gluings of a piece have matching state profiles") {
    std::mt19937_64 rng(8211);
    for (int trial = 0; trial < 30; ++trial) {
        RibbonGraph templ = random_graph(rng, 2, 2, 0.3);
        MarkedPiece piece = random_piece(rng, 2, 2, 0.3);
        EdgeId target = templ.edges()[0].id;
        if (templ.edges()[0].twisted && templ.is_loop(0)) continue;
        std::vector<std::multiset<std::array<int, 4>>> profs;
        for (bool swap : {false, true})
            for (bool flip : {false, true})
                profs.push_back(count_profile(two_sum(templ, target, piece,
                                                      PieceOptions{swap, flip})));
        CHECK(profs[0] == profs[1]);
        CHECK(profs[0] == profs[2]);
        CHECK(profs[0] == profs[3]);
    }
}

TEST_CASE("vertex flips and mirrors do not change any state") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        RibbonGraph g = random_graph(rng, 5, 3, 0.5);
        std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
        RibbonGraph f = flip_vertex(g, g.vertices()[pick(rng)].id);
        RibbonGraph m = reversed(g);
        for (StateMask s = 0; s < (StateMask(1) << 5); ++s) {
            auto a = state_counts(g, s), b = state_counts(f, s), c = state_counts(m, s);
            REQUIRE(a.k == b.k);
            REQUIRE(a.boundary == b.boundary);
            REQUIRE(a.t == b.t);
            REQUIRE(a.boundary == c.boundary);
            REQUIRE(a.t == c.t);
        }
    }
}

TEST_CASE("flip sequences remove removable twists") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        RibbonGraph g = random_graph(rng, 5, 3, 0.0);
        std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
        for (int flips = 0; flips < 3; ++flips) g = flip_vertex(g, g.vertices()[pick(rng)].id);
        RibbonGraph u = untwist_by_flips(g);
        for (const Edge& e : u.edges()) CHECK_FALSE(e.twisted);
        for (StateMask s = 0; s < (StateMask(1) << 5); ++s)
            REQUIRE(state_counts(g, s).boundary == state_counts(u, s).boundary);
    }
    CHECK_THROWS_AS(untwist_by_flips(loop_graph(true)), std::invalid_argument);
}

TEST_CASE("arc gaps fold onto the surviving rotation") {
    RibbonGraph g = loop_graph(false);
    auto w1 = boundary_walks(g, 1);
    CHECK(walk_of_arc(g, w1, ArcPos{"v", 0}, 1) != walk_of_arc(g, w1, ArcPos{"v", 1}, 1));
    CHECK(walk_of_arc(g, w1, ArcPos{"v", 0}, 1) == walk_of_arc(g, w1, ArcPos{"v", 2}, 1));
    auto w0 = boundary_walks(g, 0);
    CHECK(walk_of_arc(g, w0, ArcPos{"v", 0}, 0) == walk_of_arc(g, w0, ArcPos{"v", 1}, 0));
    CHECK(effective_gap(g, ArcPos{"v", 2}, 1) == 0);
    CHECK_THROWS_AS(effective_gap(g, ArcPos{"v", 3}, 1), std::invalid_argument);
}

TEST_CASE("edge insertion is undone by deletion") {
    MarkedPiece p = path_piece(2);
    RibbonGraph a = insert_edge(p.graph, p.m_arc, p.n_arc, true, "t");
    REQUIRE(a.edge_count() == 3);
    CHECK(a.edges()[2].twisted);
    RibbonGraph back = delete_edge(a, "t");
    for (int v = 0; v < back.vertex_count(); ++v)
        CHECK(back.vertices()[v].rotation == p.graph.vertices()[v].rotation);
    CHECK_THROWS_AS(insert_edge(p.graph, ArcPos{"p0", 0}, ArcPos{"p0", 1}, false, "t"),
                    std::invalid_argument);
}

TEST_CASE("component count of an assembly splits over the pieces") {
    std::mt19937_64 rng(515);
    for (int trial = 0; trial < 12; ++trial) {
        TwoDecomposition d;
        d.templ = random_graph(rng, 2, 2, 0.0);
        d.pieces.emplace(d.templ.edges()[0].id,
                         std::make_pair(random_piece(rng, 3, 3, 0.3), PieceOptions{}));
        d.pieces.emplace(d.templ.edges()[1].id,
                         std::make_pair(random_piece(rng, 3, 3, 0.3), PieceOptions{}));
        RibbonGraph hat = assemble(d);
        REQUIRE(hat.edge_count() == 6);
        for (StateMask s = 0; s < (StateMask(1) << 6); ++s) {
            int sum_k = 0, same = 0, split = 0;
            StateMask templ_state = 0;
            for (const auto& [eid, pp] : d.pieces) {
                const MarkedPiece& p = pp.first;
                StateMask ps = 0;
                for (int j = 0; j < p.graph.edge_count(); ++j) {
                    EdgeId assembled_id = eid + "." + p.graph.edges()[j].id;
                    if (s >> hat.edge_index(assembled_id) & 1) ps |= StateMask(1) << j;
                }
                sum_k += state_counts(p.graph, ps).k;
                auto comp = vertex_components(p.graph, ps);
                if (comp[p.graph.vertex_index(p.u)] == comp[p.graph.vertex_index(p.w)]) {
                    ++same;
                    templ_state |= StateMask(1) << d.templ.edge_index(eid);
                } else {
                    ++split;
                }
            }
            int expect = sum_k - same - 2 * split + state_counts(d.templ, templ_state).k;
            REQUIRE(state_counts(hat, s).k == expect);
        }
    }
}

TEST_CASE("gadget expansion of an edge keeps its attachment semantics") {
    RibbonGraph gt = build_gtilde(single_edge());
    REQUIRE(gt.edge_count() == 2);
    CHECK(gt.has_edge("f_e"));
    CHECK(gt.has_edge("g_e"));
    CHECK(gt.weight_var(gt.edge_index("f_e")) == "f_e");
    StateMask both = gt.state_of({"f_e", "g_e"});
    CHECK(state_counts(gt, both).boundary == 2);
    CHECK(state_counts(gt, gt.state_of({"g_e"})).boundary == 1);
    CHECK(state_counts(gt, gt.state_of({"f_e"})).k == 2);

    RibbonGraph gc = build_gtilde(cycle_graph(3));
    REQUIRE(gc.edge_count() == 6);
    REQUIRE(gc.vertex_count() == 3);
    CHECK(state_counts(gc, gc.full_state()).k == 1);
}

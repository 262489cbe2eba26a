#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ribbonpoly/generate.hpp"
#include "ribbonpoly/statesum.hpp"

using namespace ribbonpoly;

namespace {

MultiPoly v(const std::string& name, int e = 1) { return MultiPoly::var(name, e); }

RibbonGraph loop_graph(bool twisted) {
    return RibbonGraph({{"v", {"e:1", "e:2"}}}, {{"e", {"e:1", "e:2"}, twisted, std::nullopt}});
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
        Vertex vx{"p" + std::to_string(i), {}};
        if (i > 0) vx.rotation.push_back(eid(i - 1) + ":2");
        if (i < edges) vx.rotation.push_back(eid(i) + ":1");
        vs.push_back(std::move(vx));
    }
    for (int i = 0; i < edges; ++i)
        es.push_back(Edge{eid(i), {eid(i) + ":1", eid(i) + ":2"}, false, std::nullopt});
    RibbonGraph g(std::move(vs), std::move(es));
    return MarkedPiece(g, "p0", "p" + std::to_string(edges), ArcPos{"p0", 0},
                       ArcPos{"p" + std::to_string(edges), 0});
}

MarkedPiece digon_piece() {
    RibbonGraph g = cycle_graph(2);
    return MarkedPiece(g, "v0", "v1", ArcPos{"v0", 0}, ArcPos{"v1", 0});
}

MultiPoly ac_times(const MultiPoly& p, int extra_c = 0) {
    Monomial m;
    m.exps = {{"a", 1}, {"c", 1 + extra_c}};
    if (m.exps["c"] == 0) m.exps.erase("c");
    return p.shifted(m);
}

}  // namespace

TEST_CASE("transition polynomial of the smallest graphs") {
    RibbonGraph dot({{"v", {}}}, {});
    CHECK(canonical_string(z_multivariate(dot)) == "a*c");
    CHECK(canonical_string(z_multivariate(single_edge())) == "a^2*c^2 + a*c*x_e");
    CHECK(z_multivariate(loop_graph(false)) ==
          v("a") * v("c", 2) * v("x_e") + v("a") * v("c"));
    CHECK(z_multivariate(loop_graph(true)) ==
          v("a") * v("c") * v("d") * v("x_e") + v("a") * v("c"));
    MultiPoly a = v("a"), b = v("b"), c = v("c");
    CHECK(z_single(cycle_graph(3)) ==
          a.pow(3) * c.pow(3) + MultiPoly(3) * a.pow(2) * c.pow(2) * b +
              MultiPoly(3) * a * c * b.pow(2) + a * c.pow(2) * b.pow(3));
    CHECK(z_single(cycle_graph(4)) ==
          a.pow(4) * c.pow(4) + MultiPoly(4) * a.pow(3) * c.pow(3) * b +
              MultiPoly(6) * a.pow(2) * c.pow(2) * b.pow(2) + MultiPoly(4) * a * c * b.pow(3) +
              a * c.pow(2) * b.pow(4));
    CHECK(z_multivariate(cycle_graph(2)) ==
          a.pow(2) * c.pow(2) + a * c * v("x_e0") + a * c * v("x_e1") +
              a * c.pow(2) * v("x_e0") * v("x_e1"));
}

TEST_CASE("explicit weight labels replace the default variables") {
    RibbonGraph g({{"u", {"e:1"}}, {"w", {"e:2"}}}, {{"e", {"e:1", "e:2"}, false, "b"}});
    CHECK(canonical_string(z_multivariate(g)) == "a^2*c^2 + a*b*c");
}

TEST_CASE("boundary polynomial of the smallest graphs") {
    MultiPoly al = v("α"), be = v("β"), ga = v("γ");
    CHECK(br_polynomial(single_edge()) == al);
    CHECK(br_polynomial(loop_graph(false)) == be + MultiPoly(1));
    CHECK(br_polynomial(loop_graph(true)) == be * ga + MultiPoly(1));
    CHECK(br_polynomial(cycle_graph(3)) == al.pow(2) + al + be + MultiPoly(1));
    RibbonGraph bouquet({{"v", {"e:1", "f:1", "e:2", "f:2"}}},
                        {{"e", {"e:1", "e:2"}, false, std::nullopt},
                         {"f", {"f:1", "f:2"}, false, std::nullopt}});
    CHECK(br_polynomial(bouquet) == be.pow(2) * ga.pow(2) + MultiPoly(2) * be + MultiPoly(1));
}

TEST_CASE("tutte polynomial and its specialization from the boundary polynomial") {
    CHECK(tutte(cycle_graph(3)) == v("x").pow(2) + v("x") + v("y"));
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 12; ++trial) {
        RibbonGraph g = random_graph(rng, 5, 3, 0.5);
        std::map<std::string, RationalFn> bind = {
            {"α", RationalFn(v("x"))},
            {"β", RationalFn(v("y") - MultiPoly(1))},
            {"γ", RationalFn(MultiPoly(1))},
        };
        CHECK(substitute_poly(br_polynomial(g), bind) == tutte(g));
    }
}

TEST_CASE("removing or shrinking an edge splits the state sum") {
    std::mt19937_64 rng(7127);
    for (int trial = 0; trial < 15; ++trial) {
        RibbonGraph g = random_graph(rng, 5, 3, 0.4);
        for (int ei = 0; ei < g.edge_count(); ++ei) {
            if (g.is_loop(ei)) continue;
            const EdgeId id = g.edges()[ei].id;
            MultiPoly lhs = z_multivariate(g);
            MultiPoly rhs = z_multivariate(delete_edge(g, id)) +
                            z_multivariate(contract_nonloop(g, id)).shifted(
                                Monomial(g.weight_var(ei), 1));
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("mark connectivity sums of the standard pieces") {
    auto edge_piece = phi_sums(path_piece(1));
    CHECK(edge_piece.joined == v("b"));
    CHECK(edge_piece.split == MultiPoly(1));
    auto path2 = phi_sums(path_piece(2));
    CHECK(path2.joined == v("b").pow(2));
    CHECK(path2.split == v("a") + MultiPoly(2) * v("b"));
    auto digon = phi_sums(digon_piece());
    CHECK(digon.joined == v("b").pow(2) + MultiPoly(2) * v("b"));
    CHECK(digon.split == MultiPoly(1));
}

TEST_CASE("mark walk sums of the standard pieces") {
    auto path2 = eta_sums_single(path_piece(2));
    CHECK(path2.one_walk == v("b").pow(2));
    CHECK(path2.two_walks.is_zero());
    CHECK(path2.two_components == v("a") * v("c") + MultiPoly(2) * v("b"));
    auto x = eta_sums(path_piece(2));
    CHECK(x.one_walk == v("x_a0") * v("x_a1"));
    CHECK(x.two_components == v("a") * v("c") + v("x_a0") + v("x_a1"));
    auto pqr = pqr_multivariate(path_piece(2));
    CHECK(pqr.p == ac_times(v("x_a0") * v("x_a1")));
    CHECK(pqr.q == ac_times(v("a") * v("c") + v("x_a0") + v("x_a1")));
    CHECK(pqr.r.is_zero());
}

TEST_CASE("connectivity sums solve the contraction system") {
    std::mt19937_64 rng(11);
    std::map<std::string, RationalFn> c1 = {{"c", RationalFn(MultiPoly(1))},
                                            {"d", RationalFn(MultiPoly(1))}};
    for (int trial = 0; trial < 20; ++trial) {
        MarkedPiece p = random_piece(rng, 4, 3, 0.3);
        auto phi = phi_sums(p);
        std::string id = "join";
        while (p.graph.has_edge(id)) id += "+";
        RibbonGraph ae = insert_edge(p.graph, p.m_arc, p.n_arc, false, id);
        MultiPoly zh = substitute_poly(z_single(p.graph), c1);
        MultiPoly zc = substitute_poly(z_single(contract_nonloop(ae, id)), c1);
        REQUIRE(v("a") * (phi.joined + v("a") * phi.split) == zh);
        REQUIRE(v("a") * (phi.joined + phi.split) == zc);
    }
}

TEST_CASE("walk sums solve the edge-restored system") {
    std::mt19937_64 rng(313);
    int done = 0;
    while (done < 20) {
        MarkedPiece raw = random_piece(rng, 4, 3, 0.25);
        if (!piece_is_orientable(raw)) continue;
        ++done;
        MarkedPiece p = normalize_piece(raw).piece;
        auto [pp, qq, rr] = pqr_multivariate(p);
        std::string id = "join";
        while (p.graph.has_edge(id)) id += "+";
        RibbonGraph ae = insert_edge(p.graph, p.m_arc, p.n_arc, false, id);
        MultiPoly z_contract = z_multivariate(contract_nonloop(ae, id));
        MultiPoly z_piece = z_multivariate(p.graph);
        REQUIRE(v("c") * pp + qq + rr == z_contract);
        REQUIRE(pp + v("a") * v("c") * qq + v("c") * rr == z_piece);
        auto eta = eta_sums_single(p);
        REQUIRE(ac_times(v("c") * eta.two_walks + v("a") * v("c") * eta.two_components +
                         eta.one_walk) == z_single(p.graph));
    }
}

TEST_CASE("half-twisted insertion separates the walk sums") {
    std::mt19937_64 rng(747);
    int done = 0, with_two_walks = 0;
    while (done < 25 || with_two_walks < 5) {
        MarkedPiece raw = random_piece(rng, 5, 3, 0.3);
        if (!piece_is_orientable(raw)) continue;
        ++done;
        MarkedPiece p = normalize_piece(raw).piece;
        auto eta = eta_sums_single(p);
        if (!eta.two_walks.is_zero()) ++with_two_walks;
        MultiPoly pp = ac_times(eta.one_walk), qq = ac_times(eta.two_components),
                  rr = ac_times(eta.two_walks);
        auto inv = twist_insert_invariants(p);
        REQUIRE(inv.q == qq);
        REQUIRE(inv.d_part == pp + rr);
        REQUIRE(inv.remainder == pp + v("c") * rr);
    }
}

TEST_CASE("normalizing a piece moves any leftover twist onto the template edge") {
    std::mt19937_64 rng(421);
    int tested = 0, toggled = 0;
    while (tested < 40 || toggled < 8) {
        MarkedPiece p = random_piece(rng, 4, 3, 0.45);
        if (!piece_is_orientable(p)) continue;
        RibbonGraph templ = random_graph(rng, 3, 2, 0.3);
        const Edge* target = nullptr;
        for (const auto& e : templ.edges())
            if (templ.locate(e.ends[0]).vertex != templ.locate(e.ends[1]).vertex) target = &e;
        if (!target) continue;
        ++tested;
        NormalizedPiece np = normalize_piece(p);
        for (const auto& e : np.piece.graph.edges()) REQUIRE(!e.twisted);
        if (np.template_twist) ++toggled;
        std::vector<Vertex> vs = templ.vertices();
        std::vector<Edge> es = templ.edges();
        for (auto& e : es)
            if (e.id == target->id && np.template_twist) e.twisted = !e.twisted;
        RibbonGraph adjusted(std::move(vs), std::move(es));
        REQUIRE(z_multivariate(two_sum(templ, target->id, p, {})) ==
                z_multivariate(two_sum(adjusted, target->id, np.piece, {})));
    }
    RibbonGraph bad({{"u", {"e:1", "e:2"}}, {"w", {}}}, {{"e", {"e:1", "e:2"}, true, {}}});
    MarkedPiece loop_piece(bad, "u", "w", ArcPos{"u", 0}, ArcPos{"w", 0});
    CHECK_THROWS_AS(normalize_piece(loop_piece), std::invalid_argument);
    CHECK_THROWS_AS(eta_sums(loop_piece), std::invalid_argument);
}

TEST_CASE("gadget state sum with minimal representatives") {
    MultiPoly phi = phi_gtilde(single_edge());
    MultiPoly a = v("a"), c = v("c");
    CHECK(phi == a.pow(2) * c.pow(2) + a * c * v("g_e") + a * c.pow(2) * v("f_e") * v("g_e"));
}

TEST_CASE("planar closure detection") {
    CHECK(piece_closure_planar(path_piece(2)));
    CHECK(piece_closure_planar(digon_piece()));
    RibbonGraph two_vertex({{"u", {"e:1", "f:1"}}, {"w", {"e:2", "f:2"}}},
                           {{"e", {"e:1", "e:2"}, false, std::nullopt},
                            {"f", {"f:1", "f:2"}, false, std::nullopt}});
    MarkedPiece interleaved(two_vertex, "u", "w", ArcPos{"u", 1}, ArcPos{"w", 1});
    CHECK(eta_sums(interleaved).two_walks.is_zero() == piece_closure_planar(interleaved));
}

TEST_CASE("state budget limits enumeration") {
    std::mt19937_64 rng(5);
    RibbonGraph big = random_graph(rng, 25, 6);
    CHECK_THROWS_AS(z_multivariate(big), std::invalid_argument);
    int saved = state_budget();
    state_budget() = 3;
    CHECK_THROWS_AS(z_single(cycle_graph(4)), std::invalid_argument);
    state_budget() = saved;
}

TEST_CASE("large enumerations agree with the counting identity") {
    std::mt19937_64 rng(161);
    RibbonGraph g = random_graph(rng, 16, 5, 0.3);
    MultiPoly z = z_single(g);
    std::map<std::string, Rat> ones = {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}};
    CHECK(evaluate(z, ones) == Rat(Int(1) << 16));
}

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "ribbonpoly/compose.hpp"
#include "ribbonpoly/json_io.hpp"
#include "ribbonpoly/verify.hpp"

using namespace ribbonpoly;

namespace {

const std::string kData = RIBBONPOLY_DATA_DIR;

std::string data_file(const std::string& name) { return kData + "/" + name; }

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    auto dir = std::filesystem::temp_directory_path() / "ribbonpoly_io_test";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("a graph file reproduces its programmatic twin") {
    RibbonGraph c2 = load_graph(data_file("c2.json"));
    REQUIRE(c2.vertex_count() == 2);
    REQUIRE(c2.edge_count() == 2);
    REQUIRE(z_multivariate(c2) == z_multivariate(detail::cycle_graph(2)));

    RibbonGraph b2 = load_graph(data_file("bouquet2.json"));
    REQUIRE(b2.vertex_count() == 1);
    REQUIRE(z_multivariate(b2) == z_multivariate(detail::bouquet_two_loops()));

    RibbonGraph one = load_graph(data_file("single_edge.json"));
    MultiPoly want;
    want.add_term(Monomial("a", 2) * Monomial("c", 2), 1);
    want.add_term(Monomial("a", 1) * Monomial("c", 1) * Monomial("x_e", 1), 1);
    REQUIRE(z_multivariate(one) == want);
}

TEST_CASE("piece files carry their marks") {
    MarkedPiece digon = load_piece(data_file("digon.json"));
    REQUIRE(digon.u == "u");
    REQUIRE(digon.w == "w");
    REQUIRE(digon.m_arc.gap == 0);
    REQUIRE(digon.n_arc.gap == 1);
    MarkSplit got = phi_sums(digon);
    MarkSplit want = phi_sums(detail::digon_piece());
    REQUIRE(got.joined == want.joined);
    REQUIRE(got.split == want.split);

    MarkedPiece path = load_piece(data_file("two_path.json"));
    MarkSplit got2 = phi_sums(path);
    MarkSplit want2 = phi_sums(detail::two_path_piece());
    REQUIRE(got2.joined == want2.joined);
    REQUIRE(got2.split == want2.split);
}

TEST_CASE("the bundled path decomposition composes to the frozen sum") {
    TwoDecomposition d = load_decomposition(data_file("decomp_path.json"));
    REQUIRE(d.pieces.size() == 2);
    MultiPoly composed = compose_tutte(d);
    MultiPoly frozen = detail::ab_terms({{1, 1, 4},
                                                {2, 1, 3},
                                                {2, 2, 3},
                                                {5, 2, 2},
                                                {1, 3, 2},
                                                {4, 3, 1},
                                                {1, 4, 0}});
    REQUIRE(composed == frozen);
    REQUIRE(composed == detail::z_ab(assemble(d)));
}

TEST_CASE("the bundled general decomposition matches the brute-force sum") {
    TwoDecomposition d = load_decomposition(data_file("decomp_general.json"));
    REQUIRE(compose_br_general(d) == z_single(assemble(d)));
}

TEST_CASE("ends and flip switches act like their programmatic options") {
    std::string piece_path = data_file("two_path.json");
    std::string templ_path = data_file("path2.json");
    std::string body = std::string("{\"template\":\"") + templ_path +
                       "\",\"pieces\":{" + "\"f\":{\"file\":\"" + piece_path +
                       "\",\"ends\":\"swap\",\"flip\":true}," + "\"g\":{\"file\":\"" +
                       piece_path + "\"}}}";
    auto path = write_temp("swapped.json", body);
    TwoDecomposition d = load_decomposition(path.string());
    REQUIRE(d.pieces.at("f").second.swap_ends);
    REQUIRE(d.pieces.at("f").second.flip);
    REQUIRE_FALSE(d.pieces.at("g").second.swap_ends);

    RibbonGraph by_hand = detail::two_edge_path_template();
    by_hand = two_sum(by_hand, "f", detail::two_path_piece(),
                      PieceOptions{true, true});
    by_hand = two_sum(by_hand, "g", detail::two_path_piece(), PieceOptions{});
    REQUIRE(z_single(assemble(d)) == z_single(by_hand));
}

TEST_CASE("malformed graph files raise parse errors") {
    REQUIRE_THROWS_AS(load_graph(data_file("no_such_file.json")), parse_error);
    REQUIRE_THROWS_AS(load_graph(write_temp("garbage.json", "{ not json").string()),
                      parse_error);
    REQUIRE_THROWS_AS(load_graph(write_temp("no_vertices.json", "{\"edges\":[]}").string()),
                      parse_error);
    REQUIRE_THROWS_AS(
        load_graph(write_temp("bad_ends.json",
                              "{\"vertices\":[{\"id\":\"v\",\"rotation\":[]}],"
                              "\"edges\":[{\"id\":\"e\",\"ends\":[\"e:1\"]}]}")
                       .string()),
        parse_error);
    REQUIRE_THROWS_AS(
        load_piece(write_temp("no_marks.json",
                              "{\"vertices\":[{\"id\":\"v\",\"rotation\":[]}],"
                              "\"edges\":[]}")
                       .string()),
        parse_error);
}

TEST_CASE("malformed decomposition files raise parse errors") {
    std::string templ_path = data_file("path2.json");
    std::string piece_path = data_file("digon.json");
    REQUIRE_THROWS_AS(
        load_decomposition(
            write_temp("bad_edge.json", std::string("{\"template\":\"") + templ_path +
                                            "\",\"pieces\":{\"zz\":{\"file\":\"" +
                                            piece_path + "\"}}}")
                .string()),
        parse_error);
    REQUIRE_THROWS_AS(
        load_decomposition(
            write_temp("missing_piece.json", std::string("{\"template\":\"") +
                                                 templ_path +
                                                 "\",\"pieces\":{\"f\":{\"file\":\"" +
                                                 piece_path + "\"}}}")
                .string()),
        parse_error);
    REQUIRE_THROWS_AS(
        load_decomposition(
            write_temp("bad_option.json", std::string("{\"template\":\"") + templ_path +
                                              "\",\"pieces\":{\"f\":{\"file\":\"" +
                                              piece_path +
                                              "\",\"ends\":\"sideways\"},"
                                              "\"g\":{\"file\":\"" +
                                              piece_path + "\"}}}")
                .string()),
        parse_error);
}

TEST_CASE("structural violations surface as invalid arguments") {
    std::string body =
        "{\"vertices\":[{\"id\":\"u\",\"rotation\":[\"e0:1\",\"e1:1\"]},"
        "{\"id\":\"w\",\"rotation\":[\"e0:2\",\"e1:2\"]}],"
        "\"edges\":[{\"id\":\"e0\",\"ends\":[\"e0:1\",\"e0:2\"]},"
        "{\"id\":\"e1\",\"ends\":[\"e1:1\",\"e1:2\"]}],"
        "\"u\":\"u\",\"w\":\"u\",\"m_arc\":0,\"n_arc\":0}";
    REQUIRE_THROWS_AS(load_piece(write_temp("same_mark.json", body).string()),
                      std::invalid_argument);
}

// Command-line front end: compute polynomials of a ribbon graph, compose a
// two-decomposition, run the verification suites, or evaluate knot
// invariants from a PD code.  Output is canonical and byte-deterministic;
// file-format problems exit 2, violated preconditions exit 1.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ribbonpoly/compose.hpp"
#include "ribbonpoly/json_io.hpp"
#include "ribbonpoly/knots.hpp"
#include "ribbonpoly/verify.hpp"

namespace {

using namespace ribbonpoly;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw parse_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<std::string, std::string> split_assignment(const std::string& text,
                                                     const char* flag) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw CLI::ValidationError(std::string(flag) + " expects edge=value, got " + text);
    return {text.substr(0, eq), text.substr(eq + 1)};
}

void apply_overrides(TwoDecomposition& d, const std::vector<std::string>& flips,
                     const std::vector<std::string>& ends) {
    for (const auto& f : flips) {
        auto [edge, value] = split_assignment(f, "--flip");
        if (value != "true" && value != "false")
            throw std::invalid_argument("--flip value must be true or false, got " + value);
        auto it = d.pieces.find(edge);
        if (it == d.pieces.end())
            throw std::invalid_argument("--flip names edge " + edge + " which has no piece");
        it->second.second.flip = value == "true";
    }
    for (const auto& f : ends) {
        auto [edge, value] = split_assignment(f, "--ends");
        if (value != "default" && value != "swap")
            throw std::invalid_argument("--ends value must be default or swap, got " + value);
        auto it = d.pieces.find(edge);
        if (it == d.pieces.end())
            throw std::invalid_argument("--ends names edge " + edge + " which has no piece");
        it->second.second.swap_ends = value == "swap";
    }
}

MultiPoly strip_cd(const MultiPoly& z) {
    std::map<std::string, RationalFn> bind = {{"c", RationalFn(1)}, {"d", RationalFn(1)}};
    return substitute_poly(z, bind);
}

int run(int argc, char** argv) {
    CLI::App app{"exact ribbon-graph polynomials, two-decompositions, and knot invariants"};
    app.require_subcommand(1);

    auto* compute = app.add_subcommand("compute", "polynomial of one ribbon graph");
    std::string input, poly = "z";
    compute->add_option("--input", input, "graph JSON file")->required();
    compute->add_option("--poly", poly, "z, br, or tutte")
        ->check(CLI::IsMember({"z", "br", "tutte"}));

    auto* compose = app.add_subcommand("compose", "composed polynomial of a decomposition");
    std::string decomp, method = "tutte";
    bool check = false;
    std::vector<std::string> flip_args, ends_args;
    compose->add_option("--decomp", decomp, "decomposition JSON file")->required();
    compose->add_option("--method", method, "tutte, planar, or general")
        ->check(CLI::IsMember({"tutte", "planar", "general"}));
    compose->add_flag("--check", check, "also compare against the brute-force state sum");
    compose->add_option("--flip", flip_args, "edge=true|false gluing flip override");
    compose->add_option("--ends", ends_args, "edge=default|swap end-assignment override");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    std::uint64_t seed = 20260822;
    const char* env_data = std::getenv("RIBBONPOLY_DATA_DIR");
    std::string data_dir = env_data ? env_data : "data";
    verify->add_option("--suite", suite, "frozen, small, compose, thfull, knots, or all")
        ->required()
        ->check(CLI::IsMember({"frozen", "small", "compose", "thfull", "knots", "all"}));
    verify->add_option("--seed", seed, "seed for the randomized suites");
    verify->add_option("--data", data_dir, "directory holding the PD corpus");

    auto* knot = app.add_subcommand("knot", "invariants of a PD-coded diagram");
    std::string pd;
    bool want_bracket = false, want_jones = false, want_writhe = false;
    knot->add_option("--pd", pd, "PD code file")->required();
    auto* which = knot->add_option_group("invariant", "which invariant to print");
    which->add_flag("--bracket", want_bracket, "Kauffman bracket in A");
    which->add_flag("--jones", want_jones, "Jones polynomial in q = t^{1/4}");
    which->add_flag("--writhe", want_writhe, "writhe of the oriented diagram");
    which->require_option(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*compute) {
            RibbonGraph g = load_graph(input);
            MultiPoly out;
            if (poly == "z")
                out = z_multivariate(g);
            else if (poly == "br")
                out = br_polynomial(g);
            else
                out = tutte(g);
            std::cout << canonical_string(out) << "\n";
        } else if (*compose) {
            TwoDecomposition d = load_decomposition(decomp);
            apply_overrides(d, flip_args, ends_args);
            MultiPoly out;
            if (method == "tutte")
                out = compose_tutte(d);
            else if (method == "planar")
                out = compose_br_planar(d);
            else
                out = compose_br_general(d);
            std::cout << canonical_string(out) << "\n";
            if (check) {
                MultiPoly brute = z_single(assemble(d));
                if (method == "tutte") brute = strip_cd(brute);
                if (out == brute) {
                    std::cout << "MATCH\n";
                } else {
                    std::cout << "MISMATCH against " << canonical_string(brute) << "\n";
                    return 1;
                }
            }
        } else if (*verify) {
            std::vector<std::string> names =
                suite == "all" ? suite_names() : std::vector<std::string>{suite};
            bool all_pass = true;
            for (const auto& name : names) {
                Suite results = run_suite(name, seed, data_dir);
                for (const auto& c : results) {
                    if (c.pass)
                        std::cout << "PASS " << c.name << "\n";
                    else
                        std::cout << "FAIL " << c.name << ": " << c.detail << "\n";
                    all_pass = all_pass && c.pass;
                }
            }
            if (!all_pass) return 1;
        } else if (*knot) {
            LinkDiagram d = parse_pd(slurp(pd));
            if (want_bracket)
                std::cout << canonical_string(kauffman_bracket(d)) << "\n";
            else if (want_jones)
                std::cout << canonical_string(jones(d)) << "\n";
            else
                std::cout << writhe(d) << "\n";
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }

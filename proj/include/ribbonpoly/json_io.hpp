// JSON readers for ribbon graphs, marked pieces, and decompositions.
//
// A graph file holds {"vertices":[{"id","rotation"}...],
// "edges":[{"id","ends","twisted","weight"}...]}; a piece file adds
// "u", "w", "m_arc", "n_arc"; a decomposition file names a template file and
// one piece file per template edge, with optional "ends" ("default"/"swap")
// and "flip" switches.  Relative paths inside a decomposition are resolved
// against the decomposition file's own directory.  Malformed input raises
// parse_error; structural violations surface as the library's usual
// invalid_argument errors.
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "ribbonpoly/ribbon.hpp"

namespace ribbonpoly {

namespace detail {

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw parse_error(path + ": cannot open file");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw parse_error(where + ": missing \"" + key + "\"");
    return *it;
}

inline std::string str_field(const nlohmann::json& j, const char* key,
                             const std::string& where) {
    const auto& v = field(j, key, where);
    if (!v.is_string())
        throw parse_error(where + ": \"" + std::string(key) + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace detail

inline RibbonGraph graph_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw parse_error(where + ": expected a JSON object");
    std::vector<Vertex> vs;
    const auto& jv = detail::field(j, "vertices", where);
    if (!jv.is_array()) throw parse_error(where + ": \"vertices\" must be an array");
    for (const auto& item : jv) {
        std::string ctx = where + ": vertex " + std::to_string(vs.size());
        Vertex v;
        v.id = detail::str_field(item, "id", ctx);
        const auto& rot = detail::field(item, "rotation", ctx);
        if (!rot.is_array())
            throw parse_error(ctx + ": \"rotation\" must be an array");
        for (const auto& h : rot) {
            if (!h.is_string())
                throw parse_error(ctx + ": rotation entries must be half-edge ids");
            v.rotation.push_back(h.get<std::string>());
        }
        vs.push_back(std::move(v));
    }
    std::vector<Edge> es;
    const auto& je = detail::field(j, "edges", where);
    if (!je.is_array()) throw parse_error(where + ": \"edges\" must be an array");
    for (const auto& item : je) {
        std::string ctx = where + ": edge " + std::to_string(es.size());
        Edge e;
        e.id = detail::str_field(item, "id", ctx);
        const auto& ends = detail::field(item, "ends", ctx);
        if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() ||
            !ends[1].is_string())
            throw parse_error(ctx + ": \"ends\" must be two half-edge ids");
        e.ends = {ends[0].get<std::string>(), ends[1].get<std::string>()};
        if (auto it = item.find("twisted"); it != item.end()) {
            if (!it->is_boolean())
                throw parse_error(ctx + ": \"twisted\" must be a boolean");
            e.twisted = it->get<bool>();
        }
        if (auto it = item.find("weight"); it != item.end() && !it->is_null()) {
            if (!it->is_string())
                throw parse_error(ctx + ": \"weight\" must be a string or null");
            e.weight = it->get<std::string>();
        }
        es.push_back(std::move(e));
    }
    return RibbonGraph(std::move(vs), std::move(es));
}

inline MarkedPiece piece_from_json(const nlohmann::json& j, const std::string& where) {
    RibbonGraph g = graph_from_json(j, where);
    std::string u = detail::str_field(j, "u", where);
    std::string w = detail::str_field(j, "w", where);
    auto gap = [&](const char* key) {
        const auto& v = detail::field(j, key, where);
        if (!v.is_number_integer())
            throw parse_error(where + ": \"" + std::string(key) +
                              "\" must be an integer gap index");
        return v.get<int>();
    };
    return MarkedPiece(std::move(g), u, w, ArcPos{u, gap("m_arc")},
                       ArcPos{w, gap("n_arc")});
}

inline RibbonGraph load_graph(const std::string& path) {
    return graph_from_json(detail::read_json(path), path);
}

inline MarkedPiece load_piece(const std::string& path) {
    return piece_from_json(detail::read_json(path), path);
}

inline TwoDecomposition load_decomposition(const std::string& path) {
    nlohmann::json j = detail::read_json(path);
    if (!j.is_object()) throw parse_error(path + ": expected a JSON object");
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& rel) {
        std::filesystem::path p(rel);
        return (p.is_absolute() ? p : base / p).string();
    };
    TwoDecomposition d;
    d.templ = load_graph(resolve(detail::str_field(j, "template", path)));
    const auto& jp = detail::field(j, "pieces", path);
    if (!jp.is_object())
        throw parse_error(path + ": \"pieces\" must map edge ids to piece entries");
    for (const auto& [edge_id, entry] : jp.items()) {
        std::string ctx = path + ": piece for edge " + edge_id;
        if (!d.templ.has_edge(edge_id))
            throw parse_error(ctx + ": no such edge in the template");
        MarkedPiece p = load_piece(resolve(detail::str_field(entry, "file", ctx)));
        PieceOptions opts;
        if (auto it = entry.find("ends"); it != entry.end()) {
            std::string v = it->is_string() ? it->get<std::string>() : "";
            if (v == "swap")
                opts.swap_ends = true;
            else if (v != "default")
                throw parse_error(ctx + ": \"ends\" must be \"default\" or \"swap\"");
        }
        if (auto it = entry.find("flip"); it != entry.end()) {
            if (!it->is_boolean())
                throw parse_error(ctx + ": \"flip\" must be a boolean");
            opts.flip = it->get<bool>();
        }
        d.pieces.emplace(edge_id, std::make_pair(std::move(p), opts));
    }
    for (const Edge& e : d.templ.edges())
        if (!d.pieces.count(e.id))
            throw parse_error(path + ": template edge " + e.id + " has no piece");
    return d;
}

}  // namespace ribbonpoly

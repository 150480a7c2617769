#include "ggmeval/io.hpp"

#include <fstream>
#include <json.hpp>
#include <map>
#include <stdexcept>

namespace ggm {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

Graph parse_graph(const ordered_json& j, const std::string& path, std::size_t line) {
    Graph g;
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        fail(path, line, "expected an object with fields n and edges");
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
        fail(path, line, "n must be a nonnegative integer");
    g.num_nodes = j["n"].get<int>();
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            fail(path, line, "edges entries must be [i, j] pairs");
        g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    if (j.contains("node_feats")) {
        for (const auto& f : j["node_feats"]) g.node_features.push_back(f.get<int>());
    }
    if (j.contains("edge_feats")) {
        // [[i, j, c], ...]; aligned to the edges after canonicalization below.
        std::map<std::pair<int, int>, int> feats;
        for (const auto& t : j["edge_feats"]) {
            if (!t.is_array() || t.size() != 3)
                fail(path, line, "edge_feats entries must be [i, j, c] triples");
            int a = t[0].get<int>(), b = t[1].get<int>();
            if (a > b) std::swap(a, b);
            feats[{a, b}] = t[2].get<int>();
        }
        g.canonicalize();
        if (feats.size() != g.edges.size())
            fail(path, line, "edge_feats does not cover the edge set");
        g.edge_features.reserve(g.edges.size());
        for (auto& e : g.edges) {
            auto it = feats.find(e);
            if (it == feats.end()) fail(path, line, "edge_feats does not cover the edge set");
            g.edge_features.push_back(it->second);
        }
    } else {
        g.canonicalize();
    }
    std::string err = g.validate();
    if (!err.empty()) fail(path, line, err);
    return g;
}

}  // namespace

GraphSet load_graphset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    GraphSet s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) fail(path, lineno, "malformed JSON");
        try {
            s.graphs.push_back(parse_graph(j, path, lineno));
        } catch (const ordered_json::exception& e) {
            fail(path, lineno, e.what());
        }
    }
    try {
        s.schema = derive_schema(s.graphs);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    std::string err = s.validate();
    if (!err.empty()) throw std::runtime_error(path + ": " + err);
    return s;
}

void save_graphset(const GraphSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const Graph& g : s.graphs) {
        ordered_json j;
        j["n"] = g.num_nodes;
        auto edges = ordered_json::array();
        for (auto [a, b] : g.edges) edges.push_back({a, b});
        j["edges"] = std::move(edges);
        if (g.has_node_features()) j["node_feats"] = g.node_features;
        if (g.has_edge_features()) {
            auto feats = ordered_json::array();
            for (std::size_t i = 0; i < g.edges.size(); ++i)
                feats.push_back({g.edges[i].first, g.edges[i].second, g.edge_features[i]});
            j["edge_feats"] = std::move(feats);
        }
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ggm

#include "epimit/system_io.hpp"

#include <fstream>

#include <json.hpp>

namespace epimit {

using nlohmann::json;

SystemFile load_dsir_system(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_dsir_system: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("load_dsir_system: " + path + ": " + e.what());
    }

    if (doc.value("schema_version", 0) != 1)
        throw std::runtime_error("load_dsir_system: unsupported schema_version");
    const int n = doc.at("n").get<int>();
    Graph g(n, true);
    std::vector<double> rate;
    for (const auto& row : doc.at("edges")) {
        if (!row.is_array() || row.size() != 3)
            throw std::runtime_error("load_dsir_system: edges entries must be [from, to, rate]");
        g.add_edge(row[0].get<int>(), row[1].get<int>());
        rate.push_back(row[2].get<double>());
    }
    std::vector<double> heal = doc.at("healing").get<std::vector<double>>();
    std::vector<double> x0 = doc.at("x0").get<std::vector<double>>();
    std::vector<double> r0 = doc.at("r0").get<std::vector<double>>();

    SystemFile out{make_dsir_system(std::move(g), std::move(rate), std::move(heal),
                                    std::move(x0), std::move(r0)),
                   {}};
    if (doc.contains("candidates")) {
        std::vector<EdgeId> ids = doc["candidates"].get<std::vector<EdgeId>>();
        for (EdgeId e : ids)
            if (!out.system.g.has_edge_id(e))
                throw std::runtime_error("load_dsir_system: candidate id out of range");
        out.candidates = EdgeSet(std::move(ids));
    }
    return out;
}

void save_dsir_system(const std::string& path, const DsirSystem& sys, const EdgeSet& candidates)
{
    json doc;
    doc["schema_version"] = 1;
    doc["n"] = sys.g.vertex_count();
    json edges = json::array();
    const auto all = sys.g.edges();
    const auto& ids = sys.g.edge_ids();
    for (std::size_t i = 0; i < all.size(); ++i)
        edges.push_back({all[i].u, all[i].v, sys.rate[ids[i]]});
    doc["edges"] = std::move(edges);
    doc["healing"] = sys.heal;
    doc["x0"] = sys.x0;
    doc["r0"] = sys.r0;
    if (!candidates.empty())
        doc["candidates"] = candidates.ids();

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_dsir_system: cannot open " + path);
    out << doc.dump(2) << "\n";
}

} // namespace epimit

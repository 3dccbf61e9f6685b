#include "proteograph/connectome_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "proteograph/error.hpp"
#include "proteograph/text_util.hpp"

namespace proteograph {

namespace fs = std::filesystem;

std::optional<std::size_t> RegionTable::find(std::string_view name) const {
    for (std::size_t r = 0; r < names.size(); ++r) {
        if (names[r] == name) return r;
    }
    return std::nullopt;
}

RegionTable RegionTable::from_labels(std::span<const std::string> region_labels) {
    RegionTable table;
    std::unordered_map<std::string, std::size_t> index;
    table.vertex_region.reserve(region_labels.size());
    for (std::size_t m = 0; m < region_labels.size(); ++m) {
        auto [it, inserted] = index.try_emplace(region_labels[m], table.names.size());
        if (inserted) {
            table.names.push_back(region_labels[m]);
            table.members.emplace_back();
        }
        table.vertex_region.push_back(it->second);
        table.members[it->second].push_back(m);
    }
    if (table.names.empty()) throw ArgumentError("region table needs at least one vertex");
    return table;
}

namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && text::to_lower(s.substr(0, prefix.size())) == prefix;
}

bool ends_with_ci(std::string_view s, std::string_view suffix) {
    return s.size() > suffix.size() &&
           text::to_lower(s.substr(s.size() - suffix.size())) == suffix;
}

}  // namespace

std::string region_key(std::string_view label, bool merge_hemispheres) {
    std::string_view key = text::trim(label);
    // Drop one trailing numeric token such as "_3".
    std::size_t end = key.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(key[end - 1]))) --end;
    if (end < key.size() && end > 1 &&
        (key[end - 1] == '_' || key[end - 1] == '-' || key[end - 1] == '.')) {
        key = key.substr(0, end - 1);
    }
    if (merge_hemispheres) {
        for (std::string_view prefix : {"ctx-lh-", "ctx-rh-", "lh.", "rh.", "lh_", "rh_",
                                        "left-", "right-", "left_", "right_"}) {
            if (starts_with_ci(key, prefix)) {
                key.remove_prefix(prefix.size());
                break;
            }
        }
        for (std::string_view suffix : {"_lh", "_rh", "_l", "_r", "-l", "-r"}) {
            if (ends_with_ci(key, suffix)) {
                key.remove_suffix(suffix.size());
                break;
            }
        }
    }
    return std::string(key);
}

bool matches_seed_label(std::string_view label, std::span<const std::string> seed_patterns) {
    const std::string lower = text::to_lower(label);
    return std::any_of(seed_patterns.begin(), seed_patterns.end(), [&](const std::string& p) {
        return !p.empty() && lower.find(text::to_lower(p)) != std::string::npos;
    });
}

BrainGraph assemble_graph(std::vector<Vec3> coordinates, std::vector<std::string> labels,
                          SparseWeights connectivity, const GraphLoadOptions& options,
                          std::string source) {
    BrainGraph g;
    const std::size_t n = coordinates.size();
    if (labels.size() != n || connectivity.num_vertices() != n) {
        throw ArgumentError("coordinates, labels and connectivity disagree on the vertex count");
    }
    g.coordinates = std::move(coordinates);
    g.labels = std::move(labels);
    g.connectivity = std::move(connectivity);
    g.source = std::move(source);
    g.region_label.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        g.region_label.push_back(region_key(g.labels[m], options.merge_hemispheres));
        if (matches_seed_label(g.labels[m], options.seed_labels)) g.seed_set.push_back(m);
    }
    g.proximity_cutoff = options.cutoff_radius ? *options.cutoff_radius
                                               : default_cutoff_radius(g.coordinates);
    g.proximity_decay = options.decay_scale ? *options.decay_scale : g.proximity_cutoff / 2.0;
    g.proximity = build_proximity_weights(g.coordinates, g.proximity_cutoff, g.proximity_decay);
    g.validate();
    return g;
}

// --- GraphML -----------------------------------------------------------------

namespace {

namespace pt = boost::property_tree;

struct GraphmlKeys {
    // attr.name -> key id, per domain
    std::map<std::string, std::string> node;
    std::map<std::string, std::string> edge;
};

std::optional<std::string> pick_key(const std::map<std::string, std::string>& keys,
                                    const std::vector<std::string>& candidates,
                                    std::string* chosen_name) {
    for (const auto& c : candidates) {
        auto it = keys.find(c);
        if (it != keys.end()) {
            if (chosen_name) *chosen_name = c;
            return it->second;
        }
    }
    return std::nullopt;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "|" : "") + v[i];
    return s;
}

std::map<std::string, std::string> data_values(const pt::ptree& element) {
    std::map<std::string, std::string> values;
    for (const auto& [tag, child] : element) {
        if (tag != "data") continue;
        values[child.get<std::string>("<xmlattr>.key", "")] = child.get_value<std::string>();
    }
    return values;
}

}  // namespace

BrainGraph load_graphml(const fs::path& path, const GraphLoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open GraphML file " + path.string());
    pt::ptree tree;
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& err) {
        throw ParseError("malformed GraphML in " + path.string() + ": " + err.what());
    }
    const auto root_opt = tree.get_child_optional("graphml");
    if (!root_opt) throw ParseError("missing <graphml> root element in " + path.string());
    const pt::ptree& root = *root_opt;

    GraphmlKeys keys;
    for (const auto& [tag, child] : root) {
        if (tag != "key") continue;
        const auto id = child.get<std::string>("<xmlattr>.id", "");
        const auto domain = child.get<std::string>("<xmlattr>.for", "");
        // "attr.name" contains the default path separator.
        const auto name = child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'), id);
        if (domain == "node" || domain == "all") keys.node[name] = id;
        if (domain == "edge" || domain == "all") keys.edge[name] = id;
    }
    const auto graph_opt = root.get_child_optional("graph");
    if (!graph_opt) throw ParseError("missing <graph> element in " + path.string());

    std::string label_name, x_name, y_name, z_name, weight_name;
    const auto label_key = pick_key(keys.node, options.label_attributes, &label_name);
    const auto x_key = pick_key(keys.node, options.x_attributes, &x_name);
    const auto y_key = pick_key(keys.node, options.y_attributes, &y_name);
    const auto z_key = pick_key(keys.node, options.z_attributes, &z_name);
    const auto weight_key = pick_key(keys.edge, options.weight_attributes, &weight_name);
    if (!label_key) throw ParseError("GraphML declares no node label attribute (" +
                                     join(options.label_attributes) + ")");
    if (!x_key || !y_key || !z_key) {
        throw ParseError("GraphML declares no node position attributes (" +
                         join(options.x_attributes) + ", ...)");
    }
    if (!weight_key) throw ParseError("GraphML declares no edge weight attribute (" +
                                      join(options.weight_attributes) + ")");

    std::vector<Vec3> coords;
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
    struct PendingEdge {
        std::string id, source, target;
        double weight;
    };
    std::vector<PendingEdge> edges;

    for (const auto& [tag, child] : *graph_opt) {
        if (tag == "node") {
            const auto id = child.get<std::string>("<xmlattr>.id", "");
            const auto values = data_values(child);
            auto get = [&](const std::string& key, const std::string& name) {
                auto it = values.find(key);
                if (it == values.end()) {
                    throw ParseError("node '" + id + "' is missing attribute '" + name + "'");
                }
                return it->second;
            };
            auto number = [&](const std::string& key, const std::string& name) {
                auto v = text::parse_double(get(key, name));
                if (!v || !std::isfinite(*v)) {
                    throw ParseError("node '" + id + "' has non-numeric attribute '" + name + "'");
                }
                return *v;
            };
            if (!index.emplace(id, coords.size()).second) {
                throw ParseError("duplicate node id '" + id + "'");
            }
            labels.push_back(std::string(text::trim(get(*label_key, label_name))));
            coords.push_back(Vec3{number(*x_key, x_name), number(*y_key, y_name),
                                  number(*z_key, z_name)});
        } else if (tag == "edge") {
            PendingEdge e;
            e.source = child.get<std::string>("<xmlattr>.source", "");
            e.target = child.get<std::string>("<xmlattr>.target", "");
            e.id = child.get<std::string>("<xmlattr>.id", e.source + "-" + e.target);
            const auto values = data_values(child);
            auto it = values.find(*weight_key);
            if (it == values.end()) {
                throw ParseError("edge '" + e.id + "' is missing attribute '" + weight_name + "'");
            }
            auto w = text::parse_double(it->second);
            if (!w || !std::isfinite(*w)) {
                throw ParseError("edge '" + e.id + "' has non-numeric weight '" + it->second + "'");
            }
            if (*w < 0.0) throw ParseError("edge '" + e.id + "' has a negative weight");
            e.weight = *w;
            edges.push_back(std::move(e));
        }
    }

    SparseWeights conn(coords.size());
    for (const auto& e : edges) {
        auto s = index.find(e.source);
        auto t = index.find(e.target);
        if (s == index.end() || t == index.end()) {
            throw ParseError("edge '" + e.id + "' references an unknown node");
        }
        if (s->second == t->second) continue;  // self loops do not enter the Laplacian
        conn.add(s->second, t->second, e.weight);
    }
    try {
        return assemble_graph(std::move(coords), std::move(labels), std::move(conn), options,
                              "graphml:" + path.string());
    } catch (const IsolatedVertexError& err) {
        throw IsolatedVertexError(err.vertex(), path.string() + ": " + err.what());
    }
}

// --- CSV ---------------------------------------------------------------------

namespace {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::size_t column(const std::string& name, const fs::path& path) const {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (text::to_lower(header[c]) == name) return c;
        }
        throw ParseError(path.string() + ": missing required column '" + name + "'");
    }
};

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file " + path.string());
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto fields = text::split_csv_line(line);
        if (table.header.empty()) {
            if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " fields, found " +
                             std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (table.header.empty()) throw ParseError(path.string() + ": missing header row");
    return table;
}

double csv_number(const CsvTable& t, std::size_t row, std::size_t col, const fs::path& path) {
    auto v = text::parse_double(t.rows[row][col]);
    if (!v || !std::isfinite(*v)) {
        throw ParseError(path.string() + ":" + std::to_string(t.line_numbers[row]) +
                         ": non-numeric value '" + t.rows[row][col] + "' in column '" +
                         t.header[col] + "'");
    }
    return *v;
}

}  // namespace

BrainGraph load_edge_csv(const fs::path& nodes_path, const fs::path& edges_path,
                         const GraphLoadOptions& options) {
    const CsvTable nodes = read_csv(nodes_path);
    const std::size_t c_id = nodes.column("id", nodes_path);
    const std::size_t c_label = nodes.column("label", nodes_path);
    const std::size_t c_x = nodes.column("x", nodes_path);
    const std::size_t c_y = nodes.column("y", nodes_path);
    const std::size_t c_z = nodes.column("z", nodes_path);

    std::vector<Vec3> coords;
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
        const auto& id = nodes.rows[r][c_id];
        if (!index.emplace(id, coords.size()).second) {
            throw ParseError(nodes_path.string() + ":" + std::to_string(nodes.line_numbers[r]) +
                             ": duplicate node id '" + id + "'");
        }
        labels.push_back(nodes.rows[r][c_label]);
        coords.push_back(Vec3{csv_number(nodes, r, c_x, nodes_path),
                              csv_number(nodes, r, c_y, nodes_path),
                              csv_number(nodes, r, c_z, nodes_path)});
    }

    const CsvTable edges = read_csv(edges_path);
    const std::size_t c_src = edges.column("src", edges_path);
    const std::size_t c_dst = edges.column("dst", edges_path);
    const std::size_t c_w = edges.column("weight", edges_path);
    SparseWeights conn(coords.size());
    for (std::size_t r = 0; r < edges.rows.size(); ++r) {
        const auto where = edges_path.string() + ":" + std::to_string(edges.line_numbers[r]);
        auto s = index.find(edges.rows[r][c_src]);
        auto t = index.find(edges.rows[r][c_dst]);
        if (s == index.end() || t == index.end()) {
            const auto& missing = s == index.end() ? edges.rows[r][c_src] : edges.rows[r][c_dst];
            throw ParseError(where + ": edge references unknown node '" + missing + "'");
        }
        const double w = csv_number(edges, r, c_w, edges_path);
        if (w < 0.0) throw ParseError(where + ": negative edge weight");
        if (s->second == t->second) continue;
        conn.add(s->second, t->second, w);
    }
    try {
        return assemble_graph(std::move(coords), std::move(labels), std::move(conn), options,
                              "csv:" + nodes_path.string() + "," + edges_path.string());
    } catch (const IsolatedVertexError& err) {
        throw IsolatedVertexError(err.vertex(), nodes_path.string() + ": " + err.what());
    }
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_edge_csv(const BrainGraph& graph, const fs::path& nodes_path,
                    const fs::path& edges_path) {
    std::ofstream nodes(nodes_path);
    if (!nodes) throw Error("cannot write " + nodes_path.string());
    nodes << "id,label,x,y,z\n";
    for (std::size_t m = 0; m < graph.num_vertices(); ++m) {
        const auto& c = graph.coordinates[m];
        nodes << m << ',' << csv_field(graph.labels[m]) << ',' << text::format_double(c.x) << ','
              << text::format_double(c.y) << ',' << text::format_double(c.z) << '\n';
    }
    std::ofstream edges(edges_path);
    if (!edges) throw Error("cannot write " + edges_path.string());
    edges << "src,dst,weight\n";
    for (std::size_t m = 0; m < graph.num_vertices(); ++m) {
        for (const auto& e : graph.connectivity.neighbors(m)) {
            if (e.target > m) edges << m << ',' << e.target << ',' << text::format_double(e.weight) << '\n';
        }
    }
}

void write_graphml(const BrainGraph& graph, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"d0\" for=\"node\" attr.name=\"dn_name\" attr.type=\"string\"/>\n"
           "  <key id=\"d1\" for=\"node\" attr.name=\"dn_position_x\" attr.type=\"double\"/>\n"
           "  <key id=\"d2\" for=\"node\" attr.name=\"dn_position_y\" attr.type=\"double\"/>\n"
           "  <key id=\"d3\" for=\"node\" attr.name=\"dn_position_z\" attr.type=\"double\"/>\n"
           "  <key id=\"d4\" for=\"edge\" attr.name=\"number_of_fibers\" attr.type=\"double\"/>\n"
           "  <graph edgedefault=\"undirected\">\n";
    for (std::size_t m = 0; m < graph.num_vertices(); ++m) {
        const auto& c = graph.coordinates[m];
        out << "    <node id=\"n" << m << "\">"
            << "<data key=\"d0\">" << xml_escape(graph.labels[m]) << "</data>"
            << "<data key=\"d1\">" << text::format_double(c.x) << "</data>"
            << "<data key=\"d2\">" << text::format_double(c.y) << "</data>"
            << "<data key=\"d3\">" << text::format_double(c.z) << "</data></node>\n";
    }
    std::size_t edge_id = 0;
    for (std::size_t m = 0; m < graph.num_vertices(); ++m) {
        for (const auto& e : graph.connectivity.neighbors(m)) {
            if (e.target <= m) continue;
            out << "    <edge id=\"e" << edge_id++ << "\" source=\"n" << m << "\" target=\"n"
                << e.target << "\"><data key=\"d4\">" << text::format_double(e.weight)
                << "</data></edge>\n";
        }
    }
    out << "  </graph>\n</graphml>\n";
}

// --- synthetic ---------------------------------------------------------------

namespace {

// Explicit conversions so the output does not depend on the standard
// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

const char* const kRegionNames[] = {
    "entorhinal_L",     "entorhinal_R",   "amygdala",       "hippocampus",
    "temporalpole",     "isthmuscingulate", "insula",       "parahippocampal",
    "fusiform",         "inferiortemporal", "lingual",      "precuneus",
    "lateraloccipital", "supramarginal",  "postcentral",    "precentral",
    "superiorfrontal",  "rostralmiddlefrontal", "caudalanteriorcingulate", "cuneus",
};

std::string synthetic_region_name(std::size_t r) {
    constexpr std::size_t kNamed = sizeof(kRegionNames) / sizeof(kRegionNames[0]);
    return r < kNamed ? kRegionNames[r] : "region" + std::to_string(r);
}

}  // namespace

BrainGraph generate_synthetic(std::size_t num_vertices, std::size_t num_regions,
                              std::uint64_t rng_seed, const GraphLoadOptions& options) {
    if (num_regions < 3) throw ArgumentError("synthetic graphs need at least 3 regions");
    if (num_vertices < num_regions) {
        throw ArgumentError("synthetic graphs need at least one vertex per region");
    }
    constexpr double kSphereRadius = 50.0;
    constexpr double kClusterSpread = 4.0;
    constexpr std::size_t kNearestRegions = 2;
    constexpr std::size_t kLinksPerRegionPair = 2;

    Rng rng(rng_seed);

    // Region centres on a Fibonacci sphere.
    std::vector<Vec3> centres(num_regions);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t r = 0; r < num_regions; ++r) {
        const double y = 1.0 - 2.0 * (static_cast<double>(r) + 0.5) / static_cast<double>(num_regions);
        const double radius = std::sqrt(1.0 - y * y);
        const double theta = golden * static_cast<double>(r);
        centres[r] = Vec3{kSphereRadius * radius * std::cos(theta), kSphereRadius * y,
                          kSphereRadius * radius * std::sin(theta)};
    }

    std::vector<std::vector<std::size_t>> members(num_regions);
    std::vector<Vec3> coords;
    std::vector<std::string> labels;
    coords.reserve(num_vertices);
    labels.reserve(num_vertices);
    const std::size_t base = num_vertices / num_regions;
    const std::size_t extra = num_vertices % num_regions;
    for (std::size_t r = 0; r < num_regions; ++r) {
        const std::size_t size = base + (r < extra ? 1 : 0);
        const std::string name = synthetic_region_name(r);
        for (std::size_t k = 0; k < size; ++k) {
            members[r].push_back(coords.size());
            const double dx = rng.normal(), dy = rng.normal(), dz = rng.normal();
            coords.push_back(Vec3{centres[r].x + kClusterSpread * dx,
                                  centres[r].y + kClusterSpread * dy,
                                  centres[r].z + kClusterSpread * dz});
            labels.push_back(name + "_" + std::to_string(k));
        }
    }

    SparseWeights conn(num_vertices);
    // Dense inside each region.
    for (const auto& group : members) {
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                conn.add(group[a], group[b], 0.5 + 0.5 * rng.uniform());
            }
        }
    }
    // Sparse between regions: nearest neighbours on the sphere plus a chain
    // through the region order, which keeps the whole graph connected.
    auto link_regions = [&](std::size_t r, std::size_t s) {
        for (std::size_t k = 0; k < kLinksPerRegionPair; ++k) {
            const std::size_t a = members[r][rng.index(members[r].size())];
            const std::size_t b = members[s][rng.index(members[s].size())];
            conn.add(a, b, 0.05 + 0.1 * rng.uniform());
        }
    };
    for (std::size_t r = 0; r < num_regions; ++r) {
        std::vector<std::size_t> others;
        for (std::size_t s = 0; s < num_regions; ++s) {
            if (s != r) others.push_back(s);
        }
        std::stable_sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
            return distance(centres[r], centres[a]) < distance(centres[r], centres[b]);
        });
        for (std::size_t k = 0; k < std::min(kNearestRegions, others.size()); ++k) {
            link_regions(r, others[k]);
        }
        if (r + 1 < num_regions) link_regions(r, r + 1);
    }

    GraphLoadOptions opts = options;
    opts.seed_labels = {"entorhinal"};
    std::ostringstream src;
    src << "synthetic:n=" << num_vertices << ",regions=" << num_regions << ",seed=" << rng_seed;
    return assemble_graph(std::move(coords), std::move(labels), std::move(conn), opts, src.str());
}

}  // namespace proteograph

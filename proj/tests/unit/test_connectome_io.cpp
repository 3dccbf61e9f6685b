#include <doctest.h>

#include <algorithm>

#include "proteograph/connectome_io.hpp"
#include "proteograph/error.hpp"
#include "support.hpp"

using namespace proteograph;
namespace fs = std::filesystem;

namespace {

const char* kHeader = R"(<?xml version="1.0" encoding="utf-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key id="d0" for="node" attr.name="dn_name" attr.type="string"/>
  <key id="d1" for="node" attr.name="dn_position_x" attr.type="double"/>
  <key id="d2" for="node" attr.name="dn_position_y" attr.type="double"/>
  <key id="d3" for="node" attr.name="dn_position_z" attr.type="double"/>
  <key id="d4" for="edge" attr.name="number_of_fibers" attr.type="double"/>
  <graph edgedefault="undirected">
)";

std::string node(const std::string& id, const std::string& label, double x) {
    return "    <node id=\"" + id + "\"><data key=\"d0\">" + label + "</data><data key=\"d1\">" +
           std::to_string(x) + "</data><data key=\"d2\">0</data><data key=\"d3\">0</data></node>\n";
}

std::string edge(const std::string& id, const std::string& s, const std::string& t,
                 const std::string& w) {
    return "    <edge id=\"" + id + "\" source=\"" + s + "\" target=\"" + t + "\"><data key=\"d4\">" +
           w + "</data></edge>\n";
}

fs::path graphml_fixture(const std::string& body) {
    const auto dir = support::temp_dir("graphml");
    const auto path = dir / "g.graphml";
    support::write_file(path, std::string(kHeader) + body + "  </graph>\n</graphml>\n");
    return path;
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

struct CsvPair {
    fs::path nodes, edges;
};

CsvPair csv_fixture(const std::string& nodes, const std::string& edges) {
    const auto dir = support::temp_dir("csv");
    support::write_file(dir / "nodes.csv", nodes);
    support::write_file(dir / "edges.csv", edges);
    return {dir / "nodes.csv", dir / "edges.csv"};
}

const char* kThreeNodes = "id,label,x,y,z\n1,a,0,0,0\n2,b,1,0,0\n3,c,2,0,0\n";

}  // namespace

TEST_CASE("minimal GraphML fixture") {
    const auto path = graphml_fixture(node("n0", "lh.precuneus_1", 0.0) + node("n1", "rh.precuneus_1", 1.0) +
                                      edge("e0", "n0", "n1", "12"));
    const auto g = load_graphml(path);
    CHECK(g.num_vertices() == 2);
    CHECK(g.connectivity.num_edges() == 1);
    CHECK(g.connectivity.weight(0, 1) == 12.0);
    CHECK(g.labels[0] == "lh.precuneus_1");
    CHECK(g.seed_set.empty());
}

TEST_CASE("GraphML entorhinal label enters the seed set") {
    const auto path = graphml_fixture(node("a", "precuneus", 0.0) + node("b", "entorhinal_L", 1.0) +
                                      node("c", "insula", 2.0) + edge("e0", "a", "b", "1") +
                                      edge("e1", "b", "c", "1"));
    const auto g = load_graphml(path);
    CHECK(g.seed_set == std::vector<std::size_t>{1});
}

TEST_CASE("GraphML errors") {
    SUBCASE("non-numeric weight names the edge") {
        const auto path = graphml_fixture(node("a", "x", 0.0) + node("b", "y", 1.0) +
                                          edge("bad_edge", "a", "b", "abc"));
        const auto msg = error_of([&] { load_graphml(path); });
        CHECK(msg.find("bad_edge") != std::string::npos);
        CHECK(msg.find("non-numeric") != std::string::npos);
        CHECK_THROWS_AS(load_graphml(path), ParseError);
    }
    SUBCASE("missing attribute names the attribute and node") {
        const auto path = graphml_fixture(
            node("a", "x", 0.0) +
            "    <node id=\"lonely\"><data key=\"d0\">y</data><data key=\"d1\">1</data></node>\n" +
            edge("e", "a", "lonely", "1"));
        const auto msg = error_of([&] { load_graphml(path); });
        CHECK(msg.find("lonely") != std::string::npos);
        CHECK(msg.find("dn_position_y") != std::string::npos);
    }
    SUBCASE("negative weight") {
        const auto path = graphml_fixture(node("a", "x", 0.0) + node("b", "y", 1.0) + edge("e", "a", "b", "-1"));
        CHECK_THROWS_AS(load_graphml(path), ParseError);
    }
    SUBCASE("unknown endpoint") {
        const auto path = graphml_fixture(node("a", "x", 0.0) + node("b", "y", 1.0) + edge("e", "a", "zz", "1"));
        CHECK(error_of([&] { load_graphml(path); }).find("unknown node") != std::string::npos);
    }
    SUBCASE("isolated vertex propagates") {
        const auto path = graphml_fixture(node("a", "x", 0.0) + node("b", "y", 1.0) + node("c", "z", 2.0) +
                                          edge("e", "a", "b", "1"));
        CHECK_THROWS_AS(load_graphml(path), IsolatedVertexError);
    }
    SUBCASE("malformed XML") {
        const auto dir = support::temp_dir("bad");
        support::write_file(dir / "x.graphml", "<graphml><graph>");
        CHECK_THROWS_AS(load_graphml(dir / "x.graphml"), ParseError);
    }
}

TEST_CASE("edge CSV path graph") {
    const auto p = csv_fixture(kThreeNodes, "src,dst,weight\n1,2,0.5\n2,3,2\n");
    const auto g = load_edge_csv(p.nodes, p.edges);
    CHECK(g.num_vertices() == 3);
    CHECK(g.connectivity.weight(0, 1) == 0.5);
    CHECK(g.connectivity.weight(1, 2) == 2.0);
    CHECK(g.connectivity.weight(0, 2) == 0.0);
}

TEST_CASE("edge CSV columns in any order, quoted labels, byte-order mark") {
    const auto p = csv_fixture("\xEF\xBB\xBFz,label,id,y,x\n0,\"ctx, a\",1,0,0\n0,b,2,0,1\n",
                               "weight,dst,src\n3,2,1\n");
    const auto g = load_edge_csv(p.nodes, p.edges);
    CHECK(g.labels[0] == "ctx, a");
    CHECK(g.coordinates[1].x == 1.0);
    CHECK(g.connectivity.weight(0, 1) == 3.0);
}

TEST_CASE("duplicate CSV edges are summed") {
    const auto p = csv_fixture(kThreeNodes, "src,dst,weight\n1,2,0.5\n1,2,0.5\n2,3,1\n");
    CHECK(load_edge_csv(p.nodes, p.edges).connectivity.weight(0, 1) == 1.0);
}

TEST_CASE("CSV errors") {
    SUBCASE("dangling endpoint reports the row") {
        const auto p = csv_fixture(kThreeNodes, "src,dst,weight\n1,2,1\n2,99,1\n");
        const auto msg = error_of([&] { load_edge_csv(p.nodes, p.edges); });
        CHECK(msg.find("edges.csv:3") != std::string::npos);
        CHECK(msg.find("99") != std::string::npos);
    }
    SUBCASE("negative weight") {
        const auto p = csv_fixture(kThreeNodes, "src,dst,weight\n1,2,-1\n2,3,1\n");
        CHECK_THROWS_AS(load_edge_csv(p.nodes, p.edges), ParseError);
    }
    SUBCASE("missing column") {
        const auto p = csv_fixture("id,label,x,y\n1,a,0,0\n", "src,dst,weight\n");
        CHECK(error_of([&] { load_edge_csv(p.nodes, p.edges); }).find("'z'") != std::string::npos);
    }
    SUBCASE("non-numeric weight") {
        const auto p = csv_fixture(kThreeNodes, "src,dst,weight\n1,2,abc\n2,3,1\n");
        CHECK_THROWS_AS(load_edge_csv(p.nodes, p.edges), ParseError);
    }
}

TEST_CASE("region keys") {
    CHECK(region_key("precuneus_3") == "precuneus");
    CHECK(region_key("lh.precuneus_3") == "lh.precuneus");
    CHECK(region_key("lh.precuneus_3", true) == "precuneus");
    CHECK(region_key("entorhinal_L_2") == "entorhinal_L");
    CHECK(region_key("entorhinal_L_2", true) == "entorhinal");
    CHECK(region_key("ctx-rh-insula", true) == "insula");
    CHECK(region_key("Left-Hippocampus", true) == "Hippocampus");
    CHECK(region_key("amygdala") == "amygdala");
    const std::vector<std::string> seeds{"entorhinal"};
    CHECK(matches_seed_label("ctx-lh-Entorhinal", seeds));
    CHECK_FALSE(matches_seed_label("parahippocampal", seeds));
}

TEST_CASE("region table") {
    const std::vector<std::string> labels{"b", "a", "b", "c"};
    const auto t = RegionTable::from_labels(labels);
    CHECK(t.names == std::vector<std::string>{"b", "a", "c"});
    CHECK(t.vertex_region == std::vector<std::size_t>{0, 1, 0, 2});
    CHECK(t.members[0] == std::vector<std::size_t>{0, 2});
    CHECK(t.find("c") == 2u);
    CHECK_FALSE(t.find("d").has_value());
}

TEST_CASE("synthetic generator") {
    SUBCASE("deterministic for a fixed seed") {
        const auto a = generate_synthetic(100, 10, 7);
        const auto b = generate_synthetic(100, 10, 7);
        CHECK(a.coordinates == b.coordinates);
        CHECK(a.connectivity == b.connectivity);
        CHECK(a.proximity == b.proximity);
        CHECK(a.labels == b.labels);
        const auto da = support::temp_dir("syn"), db = support::temp_dir("syn");
        write_edge_csv(a, da / "n.csv", da / "e.csv");
        write_edge_csv(b, db / "n.csv", db / "e.csv");
        CHECK(support::read_file(da / "n.csv") == support::read_file(db / "n.csv"));
        CHECK(support::read_file(da / "e.csv") == support::read_file(db / "e.csv"));
        CHECK_FALSE(generate_synthetic(100, 10, 8).coordinates == a.coordinates);
    }
    SUBCASE("seed set and supports") {
        const auto g = generate_synthetic(100, 10, 7);
        CHECK_FALSE(g.seed_set.empty());
        for (auto s : g.seed_set) CHECK(g.labels[s].find("entorhinal") == 0);
        for (double p : weighted_degrees(g.connectivity)) CHECK(p > 0.0);
        for (double p : weighted_degrees(g.proximity)) CHECK(p > 0.0);
        CHECK(RegionTable::from_graph(g).num_regions() == 10);
    }
    SUBCASE("minimal size is a triangle of singleton regions") {
        const auto g = generate_synthetic(3, 3, 123);
        const auto t = RegionTable::from_graph(g);
        CHECK(t.num_regions() == 3);
        for (const auto& m : t.members) CHECK(m.size() == 1);
        CHECK(g.connectivity.num_edges() == 3);
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(generate_synthetic(10, 2, 1), ArgumentError);
        CHECK_THROWS_AS(generate_synthetic(4, 5, 1), ArgumentError);
    }
}

TEST_CASE("writers round-trip") {
    const auto g = generate_synthetic(40, 5, 3);
    const auto dir = support::temp_dir("rt");
    write_graphml(g, dir / "g.graphml");
    write_edge_csv(g, dir / "nodes.csv", dir / "edges.csv");
    for (const auto& back : {load_graphml(dir / "g.graphml"), load_edge_csv(dir / "nodes.csv", dir / "edges.csv")}) {
        CHECK(back.coordinates == g.coordinates);
        CHECK(back.labels == g.labels);
        CHECK(back.connectivity == g.connectivity);
        CHECK(back.seed_set == g.seed_set);
    }
}

#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "proteograph/error.hpp"
#include "proteograph/scenarios.hpp"
#include "support.hpp"

using namespace proteograph;

TEST_CASE("case presets") {
    const auto c = preset("C");
    CHECK(c.aggregation.alpha == 10.0);
    CHECK(c.aggregation.c_tau == 10.0);
    CHECK(c.aggregation.c_seed == 0.05);
    CHECK(c.aggregation.gamma == 4.0);
    CHECK(c.aggregation.epsilon == 0.1);
    CHECK(c.aggregation.lambda_seed == 10.0);
    CHECK(c.aggregation.u_bar == 0.001);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(c.aggregation.diffusivity[i] == doctest::Approx(1.0 / static_cast<double>(i + 1)));
        CHECK(c.aggregation.clearance[i] == doctest::Approx(1.0 / static_cast<double>(i + 1)));
    }
    const auto& d = c.deterioration;
    CHECK(d.c_peer == 0.1);
    CHECK(d.c_abeta == 0.01);
    CHECK(d.c_tau == 0.01);
    CHECK(d.u_bar_abeta == 0.001);
    CHECK(d.u_bar_tau == 0.001);
    CHECK(d.c_source == 10.0);
    CHECK(d.mu0 == 0.01);

    const auto a = preset("A");
    CHECK(a.aggregation.c_seed == 0.0);
    CHECK(a.aggregation.c_tau == 0.0);
    CHECK(a.aggregation.alpha == 10.0);
    const auto b = preset("B");
    CHECK(b.aggregation.c_tau == 0.0);
    CHECK(b.aggregation.c_seed == 0.05);
    const auto dd = preset("D");
    CHECK(dd.aggregation.c_tau == 10.0);
    CHECK(dd.aggregation.c_seed == 0.0);
    const auto e = preset("E");
    CHECK(e.aggregation.alpha == 0.0);
    CHECK(e.aggregation.c_seed == 0.05);
    CHECK(case_names() == std::vector<std::string>{"A", "B", "C", "D", "E"});
}

TEST_CASE("unknown case lists the valid ones") {
    try {
        preset("Z");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unknown case 'Z'") != std::string::npos);
        CHECK(msg.find("A, B, C, D, E") != std::string::npos);
    }
}

TEST_CASE("initial state") {
    const auto cfg = preset("C");
    const auto g = generate_synthetic(20, 4, 1);
    const auto s = initial_state(cfg, g);
    const HealthGrid grid(cfg.grid_cells);
    CHECK(s.t == 0.0);
    for (std::size_t m = 0; m < 20; ++m) {
        CHECK(s.fields.abeta.vertex(m) == Compartments{0.01, 0, 0, 0, 0});
        CHECK(s.fields.tau.vertex(m) == Compartments{});
        CHECK(std::abs(density_mass(s.fields.health.at(m), grid) - 1.0) <= 1e-12);
    }
    auto zero = cfg;
    zero.initial_monomer = 0.0;
    const auto empty = initial_state(zero, g);
    for (double x : empty.fields.abeta.data()) CHECK(x == 0.0);
    for (std::size_t m : {32u, 64u, 256u}) {
        auto c = cfg;
        c.grid_cells = m;
        const auto st = initial_state(c, g);
        CHECK(std::abs(density_mass(st.fields.health.at(3), HealthGrid(m)) - 1.0) <= 1e-12);
    }
}

TEST_CASE("validation and warnings") {
    auto cfg = preset("C");
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.warnings().empty());
    cfg.initial_monomer = 0.2;
    CHECK(cfg.warnings().size() == 1);
    cfg.initial_monomer = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset("C");
    cfg.grid_cells = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config text") {
    SUBCASE("missing keys keep the preset of the named case") {
        const auto cfg = parse_config("[scenario]\ncase = \"E\"\n[integrator]\nt_end = 20\n");
        CHECK(cfg.case_name == "E");
        CHECK(cfg.aggregation.alpha == 0.0);
        CHECK(cfg.integrator.t_end == 20.0);
    }
    SUBCASE("round trip") {
        auto cfg = preset("B");
        cfg.integrator.mode = StepMode::fixed;
        cfg.integrator.dt_init = 0.005;
        cfg.grid_cells = 128;
        cfg.graph.kind = GraphSourceKind::csv;
        cfg.graph.path = "data/nodes.csv";
        cfg.graph.cutoff_radius = 12.5;
        cfg.graph.seed_labels = {"entorhinal", "perirhinal"};
        cfg.graph.merge_hemispheres = true;
        cfg.deterioration.mu0 = 0.1 / 3.0;
        const auto text = serialize_config(cfg);
        CHECK(parse_config(text) == cfg);
        CHECK(text.find("# C_F") != std::string::npos);
        CHECK(text.find("# mu_0") != std::string::npos);
        const auto dir = support::temp_dir("cfg");
        save_config_file(cfg, dir / "s.toml");
        CHECK(load_config_file(dir / "s.toml") == cfg);
    }
    SUBCASE("comments and blank lines") {
        const auto cfg = parse_config("# top\n\n[aggregation]  # section\nalpha = 3  # inline\n");
        CHECK(cfg.aggregation.alpha == 3.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_config("[aggregation]\nalfa = 3\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("[aggregation]\nalpha = three\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("[aggregation\nalpha = 3\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("[scenario]\ncase = \"Q\"\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("[aggregation]\ndiffusivity = [1, 2]\n"), ConfigError);
        CHECK_THROWS_AS(load_config_file("/nonexistent/file.toml"), ConfigError);
    }
}

TEST_CASE("data directory lookup") {
    const auto dir = support::temp_dir("data");
    support::write_file(dir / "g.graphml", "x");
    ::setenv("PROTEOGRAPH_DATA", dir.c_str(), 1);
    CHECK(resolve_data_path("g.graphml") == dir / "g.graphml");
    CHECK(resolve_data_path("missing.graphml") == std::filesystem::path("missing.graphml"));
    ::unsetenv("PROTEOGRAPH_DATA");
    CHECK(resolve_data_path("g.graphml") == std::filesystem::path("g.graphml"));
}

TEST_CASE("graph loading from a source descriptor") {
    GraphSource src;
    src.synthetic_vertices = 30;
    src.synthetic_regions = 5;
    const auto g = load_graph(src);
    CHECK(g->num_vertices() == 30);
    const auto dir = support::temp_dir("src");
    write_edge_csv(*g, dir / "nodes.csv", dir / "edges.csv");
    GraphSource csv;
    csv.kind = GraphSourceKind::csv;
    csv.path = dir.string();
    CHECK(load_graph(csv)->connectivity == g->connectivity);
}

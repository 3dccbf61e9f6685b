#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proteograph/error.hpp"
#include "proteograph/run.hpp"
#include "proteograph/text_util.hpp"

namespace fs = std::filesystem;
using namespace proteograph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
    using Error::Error;
};

struct CommonFlags {
    std::string graph;
    std::string edges;
    std::optional<std::size_t> synthetic;
    std::optional<std::size_t> regions;
    std::optional<std::uint64_t> seed;
    std::string case_name;
    std::string config;
    std::optional<double> t_end;
    std::optional<double> dt;
    std::optional<std::size_t> grid_m;
    std::string out = "proteograph_out";
    std::size_t workers = 1;
    bool log_y = false;
    bool fixed_step = false;
};

void add_graph_flags(CLI::App* cmd, CommonFlags& f) {
    auto* graph = cmd->add_option("--graph", f.graph,
                                  "GraphML file, nodes CSV, or directory holding nodes.csv and "
                                  "edges.csv (relative paths also searched in $PROTEOGRAPH_DATA)");
    cmd->add_option("--edges", f.edges, "Edges CSV when --graph names a nodes CSV")->needs(graph);
    auto* synth = cmd->add_option("--synthetic", f.synthetic, "Generate a synthetic graph with N vertices")
                      ->check(CLI::PositiveNumber);
    graph->excludes(synth);
    cmd->add_option("--regions", f.regions, "Regions of the synthetic graph")->check(CLI::Range(3, 1000000));
    cmd->add_option("--seed", f.seed, "Seed of the synthetic graph generator");
}

void add_model_flags(CLI::App* cmd, CommonFlags& f, bool with_case) {
    CLI::Option* case_opt = nullptr;
    if (with_case) case_opt = cmd->add_option("--case", f.case_name, "Scenario A, B, C, D or E");
    auto* config = cmd->add_option("--config", f.config, "Scenario config file");
    if (case_opt) case_opt->excludes(config);
    cmd->add_option("--t-end", f.t_end, "Final time")->check(CLI::PositiveNumber);
    cmd->add_option("--dt", f.dt, "Initial (or fixed) time step")->check(CLI::PositiveNumber);
    cmd->add_option("--grid-m", f.grid_m, "Cells on the malfunction axis")->check(CLI::Range(2, 100000));
    cmd->add_flag("--fixed-step", f.fixed_step, "Fail instead of halving dt when a step is rejected");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--workers", f.workers, "Worker threads")->check(CLI::Range(1, 1024));
    cmd->add_flag("--log-y", f.log_y, "Logarithmic concentration axes");
}

bool is_known_case(const std::string& name) {
    const auto& names = case_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string known_cases() {
    std::string out;
    for (const auto& n : case_names()) out += (out.empty() ? "" : ", ") + n;
    return out;
}

ScenarioConfig preset_or_usage(const std::string& name) {
    if (!is_known_case(name)) {
        throw UsageError("unknown case '" + name + "' (valid cases: " + known_cases() + ")");
    }
    return preset(name);
}

// File values first, then flags on top.
ScenarioConfig build_config(const CommonFlags& f, const std::string& case_name) {
    ScenarioConfig cfg;
    if (!f.config.empty()) {
        try {
            cfg = load_config_file(resolve_data_path(f.config));
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        } catch (const ParseError& e) {
            throw UsageError(e.what());
        }
    } else {
        cfg = preset_or_usage(case_name.empty() ? "C" : case_name);
    }
    auto& g = cfg.graph;
    if (!f.graph.empty()) {
        const fs::path p = resolve_data_path(f.graph);
        const std::string ext = text::to_lower(p.extension().string());
        g.path = f.graph;
        g.edges_path = f.edges;
        g.kind = (fs::is_directory(p) || ext == ".csv") ? GraphSourceKind::csv : GraphSourceKind::graphml;
    } else if (f.synthetic) {
        g.kind = GraphSourceKind::synthetic;
        g.synthetic_vertices = *f.synthetic;
    } else if (f.config.empty()) {
        // Default graph directory from the environment, else the synthetic graph.
        if (const char* dir = std::getenv("PROTEOGRAPH_DATA"); dir && *dir) {
            const fs::path base(dir);
            if (fs::exists(base / "connectome.graphml")) {
                g.kind = GraphSourceKind::graphml;
                g.path = (base / "connectome.graphml").string();
            } else if (fs::exists(base / "nodes.csv")) {
                g.kind = GraphSourceKind::csv;
                g.path = base.string();
            }
        }
    }
    if (f.regions) g.synthetic_regions = *f.regions;
    if (f.seed) g.seed = *f.seed;
    if (f.t_end) cfg.integrator.t_end = *f.t_end;
    if (f.dt) cfg.integrator.dt_init = *f.dt;
    if (f.grid_m) cfg.grid_cells = *f.grid_m;
    if (f.fixed_step) cfg.integrator.mode = StepMode::fixed;
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << "\n";
    return cfg;
}

// Removes what a failed command wrote; the directory itself only if we made it.
class OutputGuard {
  public:
    explicit OutputGuard(fs::path dir) : dir_(std::move(dir)), existed_(fs::exists(dir_)) {}
    ~OutputGuard() {
        if (committed_) return;
        std::error_code ec;
        if (!existed_) {
            fs::remove_all(dir_, ec);
        } else {
            for (const auto& p : created_) fs::remove_all(p, ec);
        }
    }
    void track(const fs::path& p) { created_.push_back(p); }
    void commit() { committed_ = true; }

  private:
    fs::path dir_;
    bool existed_;
    bool committed_ = false;
    std::vector<fs::path> created_;
};

void print_summary(const RunResult& r, const BrainGraph& graph) {
    std::printf("case %s: N=%zu t_end=%g steps=%llu rejected=%llu clamps=%llu A(T)=%.6g wall=%.2fs\n",
                r.config.case_name.c_str(), graph.num_vertices(), r.final_state.t,
                static_cast<unsigned long long>(r.final_state.steps),
                static_cast<unsigned long long>(r.final_state.rejected_steps),
                static_cast<unsigned long long>(r.final_state.clamps.total()),
                r.record.disease.empty() ? 0.0 : r.record.disease.back(), r.wall_seconds);
}

int cmd_run(const CommonFlags& f) {
    const ScenarioConfig cfg = build_config(f, f.case_name);
    const auto graph = load_graph(cfg.graph);
    OutputGuard guard(f.out);
    const RunResult result = run_scenario(cfg, graph, f.workers);
    write_run_outputs(result, *graph, f.out, f.log_y);
    guard.commit();
    print_summary(result, *graph);
    std::printf("outputs written to %s\n", f.out.c_str());
    return kExitOk;
}

double seed_region_disease(const RunResult& r, const BrainGraph& graph) {
    const RegionTable regions = RegionTable::from_graph(graph);
    const auto seeds = seed_regions(graph, regions);
    if (seeds.empty() || r.record.disease_region.empty()) return 0.0;
    double acc = 0.0;
    for (auto s : seeds) acc += r.record.disease_region.back()[s];
    return acc / static_cast<double>(seeds.size());
}

int cmd_sweep(const CommonFlags& f, const std::vector<std::string>& cases) {
    if (cases.empty()) throw UsageError("sweep needs at least one case");
    std::vector<ScenarioConfig> configs;
    for (const auto& c : cases) {
        preset_or_usage(c);
        CommonFlags per_case = f;
        per_case.config.clear();
        configs.push_back(build_config(per_case, c));
    }
    const auto graph = load_graph(configs.front().graph);

    struct Outcome {
        std::optional<RunResult> result;
        std::string error;
    };
    std::vector<Outcome> outcomes(configs.size());
    // Cases run concurrently; each one uses a single-threaded model so the
    // results do not depend on how many workers were asked for.
    {
        const std::size_t parallel = std::max<std::size_t>(1, std::min(f.workers, configs.size()));
        std::size_t next = 0;
        while (next < configs.size()) {
            std::vector<std::future<void>> batch;
            for (std::size_t k = 0; k < parallel && next < configs.size(); ++k, ++next) {
                const std::size_t idx = next;
                batch.push_back(std::async(std::launch::async, [&, idx] {
                    try {
                        outcomes[idx].result = run_scenario(configs[idx], graph, 1);
                    } catch (const std::exception& e) {
                        outcomes[idx].error = e.what();
                    }
                }));
            }
            for (auto& fut : batch) fut.get();
        }
    }

    OutputGuard guard(f.out);
    fs::create_directories(f.out);
    bool failed = false;
    std::vector<std::pair<std::string, const TimeSeriesRecord*>> overlay;
    struct Row {
        std::string name;
        double a_final;
        double a_seed;
    };
    std::vector<Row> rows;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto& name = configs[k].case_name;
        if (!outcomes[k].result) {
            failed = true;
            std::fprintf(stderr, "case %s: FAILED: %s\n", name.c_str(), outcomes[k].error.c_str());
            continue;
        }
        const auto& r = *outcomes[k].result;
        const fs::path dir = fs::path(f.out) / ("case_" + name);
        guard.track(dir);
        write_run_outputs(r, *graph, dir, f.log_y);
        overlay.emplace_back(name, &r.record);
        rows.push_back({name, r.record.disease.back(), seed_region_disease(r, *graph)});
        std::printf("case %s: ok\n", name.c_str());
    }
    if (failed) return kExitRuntime;

    const fs::path overlay_path = fs::path(f.out) / "disease_overlay.svg";
    guard.track(overlay_path);
    svg::write(disease_overlay_figure(overlay), overlay_path);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.a_final > b.a_final; });
    const fs::path ranking_path = fs::path(f.out) / "ranking.csv";
    guard.track(ranking_path);
    std::ofstream ranking(ranking_path);
    if (!ranking) throw Error("cannot write " + ranking_path.string());
    ranking << "rank,case,A_final,A_seed_region_final\n";
    std::printf("%-5s %-5s %-14s %-14s\n", "rank", "case", "A(T)", "A_seed(T)");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        ranking << k + 1 << ',' << rows[k].name << ',' << text::format_double(rows[k].a_final) << ','
                << text::format_double(rows[k].a_seed) << '\n';
        std::printf("%-5zu %-5s %-14.8g %-14.8g\n", k + 1, rows[k].name.c_str(), rows[k].a_final,
                    rows[k].a_seed);
    }
    ranking.close();
    guard.commit();
    return kExitOk;
}

int cmd_generate(std::size_t n, std::size_t regions, std::uint64_t seed, const std::string& out,
                 const std::string& format) {
    const BrainGraph g = generate_synthetic(n, regions, seed);
    const fs::path target(out);
    if (format == "graphml") {
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        write_graphml(g, target);
        std::printf("wrote %s (%zu vertices, %zu edges)\n", out.c_str(), g.num_vertices(),
                    g.connectivity.num_edges());
    } else {
        fs::create_directories(target);
        write_edge_csv(g, target / "nodes.csv", target / "edges.csv");
        std::printf("wrote %s/nodes.csv and edges.csv (%zu vertices, %zu edges)\n", out.c_str(),
                    g.num_vertices(), g.connectivity.num_edges());
    }
    return kExitOk;
}

int cmd_validate(const CommonFlags& f) {
    const ScenarioConfig cfg = build_config(f, f.case_name);
    const auto graph = load_graph(cfg.graph);
    const RegionTable regions = RegionTable::from_graph(*graph);
    std::printf("graph: %s\n", graph->source.c_str());
    std::printf("vertices: %zu  connectivity edges: %zu  proximity edges: %zu\n",
                graph->num_vertices(), graph->connectivity.num_edges(), graph->proximity.num_edges());
    std::printf("regions: %zu  seed vertices: %zu  proximity cutoff: %g  decay: %g\n",
                regions.num_regions(), graph->seed_set.size(), graph->proximity_cutoff,
                graph->proximity_decay);
    if (graph->seed_set.empty()) std::printf("warning: no vertex matches the seed labels\n");
    std::printf("config: case %s, t_end %g, grid %zu cells: ok\n", cfg.case_name.c_str(),
                cfg.integrator.t_end, cfg.grid_cells);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abeta and tau proteopathy on brain graphs"};
    app.set_version_flag("--version", PROTEOGRAPH_VERSION);
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "Simulate one scenario and write CSV, metadata and SVG plots");
    add_graph_flags(run, run_flags);
    add_model_flags(run, run_flags, true);

    CommonFlags sweep_flags;
    std::vector<std::string> sweep_cases;
    auto* sweep = app.add_subcommand("sweep", "Run several cases on the same graph and rank them");
    sweep->add_option("cases", sweep_cases, "Cases to run, e.g. A B C D E");
    add_graph_flags(sweep, sweep_flags);
    add_model_flags(sweep, sweep_flags, false);

    std::size_t gen_n = 100, gen_regions = 10;
    std::uint64_t gen_seed = 7;
    std::string gen_out, gen_format = "csv";
    auto* generate = app.add_subcommand("generate", "Write a synthetic graph as CSV or GraphML");
    generate->add_option("--synthetic,-n", gen_n, "Vertices")->check(CLI::PositiveNumber);
    generate->add_option("--regions", gen_regions, "Regions")->check(CLI::Range(3, 1000000));
    generate->add_option("--seed", gen_seed, "Generator seed");
    generate->add_option("--out", gen_out, "Output directory (csv) or file (graphml)")->required();
    generate->add_option("--format", gen_format, "csv or graphml")
        ->check(CLI::IsMember({"csv", "graphml"}));

    CommonFlags validate_flags;
    auto* validate = app.add_subcommand("validate", "Check a graph and a config without running");
    add_graph_flags(validate, validate_flags);
    add_model_flags(validate, validate_flags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_cases);
        if (generate->parsed()) return cmd_generate(gen_n, gen_regions, gen_seed, gen_out, gen_format);
        if (validate->parsed()) return cmd_validate(validate_flags);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

#include "proteograph/run.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "proteograph/error.hpp"
#include "proteograph/text_util.hpp"

namespace proteograph {

namespace fs = std::filesystem;

RunResult run_scenario(const ScenarioConfig& config, std::shared_ptr<const BrainGraph> graph,
                       std::size_t workers, const StateCallback& on_step) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const HealthGrid grid(config.grid_cells);
    const RegionTable regions = RegionTable::from_graph(*graph);
    RunResult result;
    result.config = config;
    result.workers = std::max<std::size_t>(workers, 1);
    SimState state = initial_state(config, *graph);
    const Model model(graph, config.model_params(), grid, result.workers);
    advance(model, state, config.integrator,
            [&](const SimState& s) { result.record.append(s, grid, regions); }, on_step);
    result.final_state = std::move(state);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string run_metadata(const RunResult& r, const BrainGraph& graph) {
    using nlohmann::json;
    const auto& c = r.config;
    const auto& a = c.aggregation;
    const auto& d = c.deterioration;
    const auto& in = c.integrator;
    json doc;
    doc["artifact"] = {{"name", "proteograph"}, {"version", PROTEOGRAPH_VERSION}};
    doc["case"] = c.case_name;
    doc["graph"] = {{"source", graph.source},
                    {"num_vertices", graph.num_vertices()},
                    {"connectivity_edges", graph.connectivity.num_edges()},
                    {"proximity_edges", graph.proximity.num_edges()},
                    {"proximity_cutoff", graph.proximity_cutoff},
                    {"proximity_decay", graph.proximity_decay},
                    {"seed_vertices", graph.seed_set.size()},
                    {"num_regions", RegionTable::from_graph(graph).num_regions()}};
    doc["aggregation"] = {{"alpha", a.alpha},          {"gamma", a.gamma},
                          {"diffusivity", a.diffusivity}, {"clearance", a.clearance},
                          {"epsilon", a.epsilon},      {"c_seed", a.c_seed},
                          {"lambda_seed", a.lambda_seed}, {"c_tau", a.c_tau},
                          {"u_bar", a.u_bar}};
    doc["deterioration"] = {{"c_peer", d.c_peer},           {"c_abeta", d.c_abeta},
                            {"c_tau", d.c_tau},             {"u_bar_abeta", d.u_bar_abeta},
                            {"u_bar_tau", d.u_bar_tau},     {"c_source", d.c_source},
                            {"mu0", d.mu0}};
    doc["initial"] = {{"monomer", c.initial_monomer},
                      {"health_mean", c.health_mean},
                      {"health_sigma", c.health_sigma},
                      {"grid_cells", c.grid_cells}};
    doc["integrator"] = {{"scheme", "rk4"},
                         {"mode", in.mode == StepMode::fixed ? "fixed" : "halving"},
                         {"t_end", in.t_end},
                         {"dt_init", in.dt_init},
                         {"dt_min", in.dt_min},
                         {"dt_max", in.dt_max},
                         {"cfl_max", in.cfl_max},
                         {"snapshot_interval", in.snapshot_interval}};
    doc["run"] = {{"wall_seconds", r.wall_seconds},
                  {"workers", r.workers},
                  {"steps", r.final_state.steps},
                  {"rejected_steps", r.final_state.rejected_steps},
                  {"snapshots", r.record.size()},
                  {"clamps",
                   {{"abeta", r.final_state.clamps.abeta},
                    {"tau", r.final_state.clamps.tau},
                    {"health", r.final_state.clamps.health}}}};
    if (!r.record.disease.empty()) doc["run"]["final_disease_index"] = r.record.disease.back();
    return doc.dump(2) + "\n";
}

std::vector<std::size_t> seed_regions(const BrainGraph& graph, const RegionTable& regions) {
    std::vector<bool> seeded(graph.num_vertices(), false);
    for (auto s : graph.seed_set) seeded[s] = true;
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < regions.num_regions(); ++r) {
        const auto& members = regions.members[r];
        if (!members.empty() &&
            std::all_of(members.begin(), members.end(), [&](std::size_t m) { return seeded[m]; })) {
            out.push_back(r);
        }
    }
    return out;
}

namespace {

const char* const kCompartmentNames[] = {"monomers", "dimers", "short oligomers",
                                         "long oligomers", "plaques/tangles"};

// Right hemisphere blue, left red, as in the usual region plots.
const char* highlight_color(const std::string& name) {
    const std::string lower = text::to_lower(name);
    const bool right = lower.find("_r") != std::string::npos || lower.find("rh") == 0 ||
                       lower.find("right") != std::string::npos;
    return right ? "#1f4fd6" : "#d62728";
}

svg::Series region_series(const TimeSeriesRecord& rec, std::size_t r, std::vector<double> y,
                          bool highlighted) {
    svg::Series s;
    s.name = rec.region_names[r];
    s.x = rec.times;
    s.y = std::move(y);
    s.dashed = highlighted;
    s.color = highlighted ? highlight_color(s.name) : "#9a9a9a";
    s.width = highlighted ? 2.0 : 1.0;
    s.in_legend = highlighted;
    return s;
}

std::vector<double> sum_columns(const std::vector<std::vector<double>>& cols) {
    std::vector<double> out(cols.front().size(), 0.0);
    for (const auto& c : cols) {
        for (std::size_t i = 0; i < c.size(); ++i) out[i] += c[i];
    }
    return out;
}

}  // namespace

svg::Figure global_burden_figure(const TimeSeriesRecord& rec, bool log_y) {
    svg::Figure fig;
    fig.title = "Global burden of Abeta and tau polymers";
    fig.columns = 2;
    for (int protein = 0; protein < 2; ++protein) {
        svg::Panel panel;
        panel.title = protein == 0 ? "Abeta" : "tau";
        panel.y_label = "mean concentration";
        panel.log_y = log_y;
        for (std::size_t i = 0; i < kCompartments; ++i) {
            svg::Series s;
            s.name = "i=" + std::to_string(i + 1) + " " + kCompartmentNames[i];
            s.x = rec.times;
            s.y = protein == 0 ? rec.abeta_series(i) : rec.tau_series(i);
            s.color = svg::palette(i);
            panel.series.push_back(std::move(s));
        }
        fig.panels.push_back(std::move(panel));
    }
    return fig;
}

svg::Figure regional_burden_figure(const TimeSeriesRecord& rec,
                                   const std::vector<bool>& highlighted, bool log_y) {
    svg::Figure fig;
    fig.title = "Regional burden (dashed: seed regions)";
    fig.columns = 3;
    fig.panel_width = 380.0;
    const char* group_names[] = {"monomers", "oligomers (i=2..4)", "plaques/tangles"};
    for (int protein = 0; protein < 2; ++protein) {
        for (int group = 0; group < 3; ++group) {
            svg::Panel panel;
            panel.title = std::string(protein == 0 ? "Abeta " : "tau ") + group_names[group];
            panel.y_label = "regional mean";
            panel.log_y = log_y;
            // Highlighted regions last so they are drawn on top.
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t r = 0; r < rec.region_names.size(); ++r) {
                    const bool hl = r < highlighted.size() && highlighted[r];
                    if (hl != (pass == 1)) continue;
                    auto series = [&](std::size_t i) {
                        return protein == 0 ? rec.abeta_region_series(r, i)
                                            : rec.tau_region_series(r, i);
                    };
                    std::vector<double> y;
                    if (group == 0) y = series(0);
                    else if (group == 1) y = sum_columns({series(1), series(2), series(3)});
                    else y = series(4);
                    panel.series.push_back(region_series(rec, r, std::move(y), hl));
                }
            }
            fig.panels.push_back(std::move(panel));
        }
    }
    return fig;
}

svg::Figure disease_figure(const TimeSeriesRecord& rec, const std::vector<bool>& highlighted,
                           const std::string& case_name) {
    svg::Figure fig;
    fig.title = "Disease index, case " + case_name;
    fig.columns = 2;
    svg::Panel regional;
    regional.title = "A_R(t) per region";
    regional.y_label = "mean malfunction";
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < rec.region_names.size(); ++r) {
            const bool hl = r < highlighted.size() && highlighted[r];
            if (hl != (pass == 1)) continue;
            regional.series.push_back(region_series(rec, r, rec.disease_region_series(r), hl));
        }
    }
    svg::Series global;
    global.name = "A(t) whole brain";
    global.x = rec.times;
    global.y = rec.disease;
    global.color = "#000000";
    global.width = 2.5;
    regional.series.push_back(global);
    fig.panels.push_back(std::move(regional));

    svg::Panel whole;
    whole.title = "A(t) whole brain";
    whole.y_label = "mean malfunction";
    whole.series.push_back(std::move(global));
    fig.panels.push_back(std::move(whole));
    return fig;
}

svg::Figure disease_overlay_figure(
    const std::vector<std::pair<std::string, const TimeSeriesRecord*>>& runs) {
    svg::Figure fig;
    fig.title = "Disease index in the whole brain";
    fig.panel_width = 560.0;
    fig.panel_height = 360.0;
    svg::Panel panel;
    panel.title = "A(t) per case";
    panel.y_label = "mean malfunction";
    for (std::size_t k = 0; k < runs.size(); ++k) {
        svg::Series s;
        s.name = "case " + runs[k].first;
        s.x = runs[k].second->times;
        s.y = runs[k].second->disease;
        s.color = svg::palette(k);
        s.width = 2.0;
        panel.series.push_back(std::move(s));
    }
    fig.panels.push_back(std::move(panel));
    return fig;
}

std::vector<fs::path> write_run_outputs(const RunResult& result, const BrainGraph& graph,
                                        const fs::path& dir, bool log_y) {
    fs::create_directories(dir);
    const RegionTable regions = RegionTable::from_graph(graph);
    std::vector<bool> highlighted(regions.num_regions(), false);
    for (auto r : seed_regions(graph, regions)) highlighted[r] = true;

    std::vector<fs::path> written;
    try {
        const auto meta = dir / kMetadataFile;
        written.push_back(meta);
        std::ofstream out(meta);
        if (!out) throw Error("cannot write " + meta.string());
        out << run_metadata(result, graph);
        out.close();

        written.push_back(dir / kObservablesFile);
        write_csv(result.record, written.back());
        written.push_back(dir / kGlobalFigureFile);
        svg::write(global_burden_figure(result.record, log_y), written.back());
        written.push_back(dir / kRegionalFigureFile);
        svg::write(regional_burden_figure(result.record, highlighted, log_y), written.back());
        written.push_back(dir / kDiseaseFigureFile);
        svg::write(disease_figure(result.record, highlighted, result.config.case_name),
                   written.back());
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
    return written;
}

}  // namespace proteograph

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proteograph/connectome_io.hpp"
#include "proteograph/engine.hpp"

namespace proteograph {

enum class GraphSourceKind { synthetic, graphml, csv };

struct GraphSource {
    GraphSourceKind kind = GraphSourceKind::synthetic;
    // GraphML file, or the nodes CSV for kind == csv.
    std::string path;
    std::string edges_path;
    std::size_t synthetic_vertices = 100;
    std::size_t synthetic_regions = 10;
    std::uint64_t seed = 7;
    std::optional<double> cutoff_radius;
    std::optional<double> decay_scale;
    std::vector<std::string> seed_labels{"entorhinal"};
    bool merge_hemispheres = false;

    bool operator==(const GraphSource&) const = default;
};

struct ScenarioConfig {
    std::string case_name = "C";
    AggregationParams aggregation;
    DeteriorationParams deterioration;
    IntegratorConfig integrator;
    // Uniform initial Abeta monomer level; must stay well below 1.
    double initial_monomer = 0.01;
    // Initial malfunction density: Gaussian truncated to [0, 1].
    double health_mean = 0.01;
    double health_sigma = 0.005;
    std::size_t grid_cells = 64;
    GraphSource graph;

    ModelParams model_params() const { return {aggregation, deterioration}; }
    void validate() const;
    // Non-fatal remarks, e.g. an initial monomer level that is not small.
    std::vector<std::string> warnings() const;

    bool operator==(const ScenarioConfig&) const = default;
};

inline constexpr double kInitialMonomerWarning = 0.1;

// Names of the built-in cases, "A" through "E".
const std::vector<std::string>& case_names();

// Fixed constants plus the (alpha, C_tau, c) triple of the named case.
// Throws ConfigError listing the valid names for anything else.
ScenarioConfig preset(std::string_view case_name);

// u_1 = initial_monomer everywhere, every other compartment zero, f = f0.
SimState initial_state(const ScenarioConfig& config, const BrainGraph& graph);

// Flat "[section]" / "key = value" text. Keys absent from the text keep the
// values of the preset named by scenario.case (default "C").
ScenarioConfig parse_config(std::string_view text);
std::string serialize_config(const ScenarioConfig& config);
ScenarioConfig load_config_file(const std::filesystem::path& path);
void save_config_file(const ScenarioConfig& config, const std::filesystem::path& path);

// Relative paths that do not exist are looked up below $PROTEOGRAPH_DATA.
std::filesystem::path resolve_data_path(const std::filesystem::path& path);

GraphLoadOptions load_options(const GraphSource& source);
std::shared_ptr<const BrainGraph> load_graph(const GraphSource& source);

}  // namespace proteograph

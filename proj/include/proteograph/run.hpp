#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "proteograph/observables.hpp"
#include "proteograph/scenarios.hpp"
#include "proteograph/svg_plot.hpp"

namespace proteograph {

struct RunResult {
    ScenarioConfig config;
    TimeSeriesRecord record;
    SimState final_state;
    double wall_seconds = 0.0;
    std::size_t workers = 1;
};

// Builds the initial state, integrates to t_end and samples the observables
// at every snapshot.
RunResult run_scenario(const ScenarioConfig& config, std::shared_ptr<const BrainGraph> graph,
                       std::size_t workers = 1, const StateCallback& on_step = {});

// JSON document: graph source and size, every parameter, integrator
// settings, wall time, clamp counts, version.
std::string run_metadata(const RunResult& result, const BrainGraph& graph);

// Regions whose vertices all belong to the seed set.
std::vector<std::size_t> seed_regions(const BrainGraph& graph, const RegionTable& regions);

svg::Figure global_burden_figure(const TimeSeriesRecord& record, bool log_y = false);
svg::Figure regional_burden_figure(const TimeSeriesRecord& record,
                                   const std::vector<bool>& highlighted, bool log_y = false);
svg::Figure disease_figure(const TimeSeriesRecord& record, const std::vector<bool>& highlighted,
                           const std::string& case_name);
svg::Figure disease_overlay_figure(
    const std::vector<std::pair<std::string, const TimeSeriesRecord*>>& runs);

inline constexpr const char* kMetadataFile = "metadata.json";
inline constexpr const char* kObservablesFile = "observables.csv";
inline constexpr const char* kGlobalFigureFile = "global_burden.svg";
inline constexpr const char* kRegionalFigureFile = "regional_burden.svg";
inline constexpr const char* kDiseaseFigureFile = "disease_index.svg";

// Writes metadata, observables CSV and the three figures into `dir`
// (created if needed); returns the paths written.
std::vector<std::filesystem::path> write_run_outputs(const RunResult& result,
                                                     const BrainGraph& graph,
                                                     const std::filesystem::path& dir,
                                                     bool log_y = false);

}  // namespace proteograph

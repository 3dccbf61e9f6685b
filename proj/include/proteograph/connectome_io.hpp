#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proteograph/graph.hpp"

namespace proteograph {

// Partition of the vertex set into named anatomical regions.
struct RegionTable {
    // Region names in order of first appearance along the vertex index.
    std::vector<std::string> names;
    std::vector<std::size_t> vertex_region;
    std::vector<std::vector<std::size_t>> members;

    std::size_t num_regions() const noexcept { return names.size(); }
    std::size_t num_vertices() const noexcept { return vertex_region.size(); }
    std::optional<std::size_t> find(std::string_view name) const;

    static RegionTable from_labels(std::span<const std::string> region_labels);
    static RegionTable from_graph(const BrainGraph& graph) { return from_labels(graph.region_label); }
};

// Region key of a parcel label: a trailing "_<digits>" (or "-", ".") token is
// dropped; with merge_hemispheres the hemisphere markers (lh./rh./ctx-lh-/
// Left-/Right-, _L/_R/_lh/_rh) are dropped as well.
std::string region_key(std::string_view label, bool merge_hemispheres = false);

// Case-insensitive substring match against any of the seed patterns.
bool matches_seed_label(std::string_view label, std::span<const std::string> seed_patterns);

struct GraphLoadOptions {
    std::vector<std::string> seed_labels{"entorhinal"};
    bool merge_hemispheres = false;
    // Proximity kernel overrides; defaults are the 10th distance percentile
    // and half of the cutoff.
    std::optional<double> cutoff_radius;
    std::optional<double> decay_scale;
    // GraphML attr.name candidates, first present wins.
    std::vector<std::string> label_attributes{"dn_name", "label", "name"};
    std::vector<std::string> x_attributes{"dn_position_x", "x"};
    std::vector<std::string> y_attributes{"dn_position_y", "y"};
    std::vector<std::string> z_attributes{"dn_position_z", "z"};
    std::vector<std::string> weight_attributes{"number_of_fibers", "weight", "strength"};
};

// Builds region keys, the seed set and the proximity graph for a vertex set
// whose coordinates, labels and connectivity are already known.
BrainGraph assemble_graph(std::vector<Vec3> coordinates, std::vector<std::string> labels,
                          SparseWeights connectivity, const GraphLoadOptions& options,
                          std::string source);

BrainGraph load_graphml(const std::filesystem::path& path, const GraphLoadOptions& options = {});

// nodes: id,label,x,y,z   edges: src,dst,weight (header rows required,
// column order free). Duplicate undirected edges are summed.
BrainGraph load_edge_csv(const std::filesystem::path& nodes_path,
                         const std::filesystem::path& edges_path,
                         const GraphLoadOptions& options = {});

void write_edge_csv(const BrainGraph& graph, const std::filesystem::path& nodes_path,
                    const std::filesystem::path& edges_path);

void write_graphml(const BrainGraph& graph, const std::filesystem::path& path);

// Gaussian clusters, one per region, around points spread on a sphere.
// Regions 0 and 1 are entorhinal_L / entorhinal_R and form the seed set.
// Deterministic for a fixed seed.
BrainGraph generate_synthetic(std::size_t num_vertices, std::size_t num_regions,
                              std::uint64_t rng_seed, const GraphLoadOptions& options = {});

}  // namespace proteograph

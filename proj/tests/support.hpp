#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "proteograph/graph.hpp"

namespace support {

using EdgeList = std::vector<std::tuple<std::size_t, std::size_t, double>>;

inline proteograph::SparseWeights weights_from(std::size_t n, const EdgeList& edges) {
    proteograph::SparseWeights w(n);
    for (const auto& [i, j, x] : edges) w.add(i, j, x);
    return w;
}

// Hand-built graph on a line; vertex k gets label "r<k>" unless labels are given.
inline proteograph::BrainGraph line_graph(std::size_t n, const EdgeList& conn, const EdgeList& prox,
                                          std::vector<std::size_t> seeds = {},
                                          std::vector<std::string> labels = {}) {
    proteograph::BrainGraph g;
    for (std::size_t k = 0; k < n; ++k) {
        g.coordinates.push_back({static_cast<double>(k), 0.0, 0.0});
        if (labels.size() < n) labels.push_back("r" + std::to_string(k));
    }
    g.labels = labels;
    g.region_label = labels;
    g.connectivity = weights_from(n, conn);
    g.proximity = weights_from(n, prox);
    g.seed_set = std::move(seeds);
    g.source = "test";
    g.validate();
    return g;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    auto dir = std::filesystem::temp_directory_path() /
               ("proteograph_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace support

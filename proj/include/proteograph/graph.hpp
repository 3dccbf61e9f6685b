#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace proteograph {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Vec3&) const = default;
};

double distance(const Vec3& a, const Vec3& b);

struct WeightedEdge {
    std::size_t target = 0;
    double weight = 0.0;

    bool operator==(const WeightedEdge&) const = default;
};

// Symmetric nonnegative weight matrix with zero diagonal, stored as one
// target-sorted edge list per vertex.
class SparseWeights {
  public:
    SparseWeights() = default;
    explicit SparseWeights(std::size_t num_vertices);

    std::size_t num_vertices() const noexcept { return rows_.size(); }
    // Number of undirected edges.
    std::size_t num_edges() const noexcept { return num_entries_ / 2; }

    // Adds w to both (i, j) and (j, i); repeated calls accumulate.
    void add(std::size_t i, std::size_t j, double w);

    double weight(std::size_t i, std::size_t j) const;
    std::span<const WeightedEdge> neighbors(std::size_t i) const { return rows_.at(i); }

    bool operator==(const SparseWeights&) const = default;

  private:
    std::vector<std::vector<WeightedEdge>> rows_;
    std::size_t num_entries_ = 0;
};

// Row sums pi_m = sum_j w_mj. Throws IsolatedVertexError on the first zero row.
std::vector<double> weighted_degrees(const SparseWeights& weights);

// Default proximity cutoff: the 10th percentile of pairwise distances, raised
// to the largest nearest-neighbour distance so no vertex is left isolated.
double default_cutoff_radius(std::span<const Vec3> coordinates);

// Gaussian kernel exp(-|xi - xj|^2 / decay^2) for 0 < |xi - xj| <= cutoff.
// Throws IsolatedVertexError naming the first vertex left without neighbours.
SparseWeights build_proximity_weights(std::span<const Vec3> coordinates, double cutoff_radius,
                                      double decay_scale);

enum class WeightFamily { connectivity, proximity };

const char* to_string(WeightFamily family);

struct BrainGraph {
    std::vector<Vec3> coordinates;
    // Raw per-vertex parcel labels as read from the source.
    std::vector<std::string> labels;
    // Region key per vertex (see RegionTable in connectome_io.hpp).
    std::vector<std::string> region_label;
    SparseWeights connectivity;
    SparseWeights proximity;
    // Sorted vertex indices of the tau seeding region.
    std::vector<std::size_t> seed_set;
    // Free-form description of where the graph came from.
    std::string source;
    double proximity_cutoff = 0.0;
    double proximity_decay = 0.0;

    std::size_t num_vertices() const noexcept { return coordinates.size(); }
    const SparseWeights& weights(WeightFamily family) const;

    // Checks sizes, symmetry, sign and positive degrees of both families.
    void validate() const;
};

// Normalized graph Laplacian
//   (Lap g)(m) = (1/pi_m) sum_j (g(m) - g(j)) w_mj,
// positive semidefinite; callers carry the minus sign of the diffusion term.
// Immutable after construction; safe to share between threads.
class LaplacianOperator {
  public:
    explicit LaplacianOperator(const SparseWeights& weights);
    LaplacianOperator(const BrainGraph& graph, WeightFamily family);

    std::size_t num_vertices() const noexcept { return degrees_.size(); }
    std::span<const double> degrees() const noexcept { return degrees_; }

    // Value at one vertex; `g(j)` returns the function value at vertex j.
    template <class Values>
    double at(std::size_t m, const Values& g) const {
        const double gm = g(m);
        double acc = 0.0;
        for (std::size_t e = offsets_[m]; e < offsets_[m + 1]; ++e) {
            acc += (gm - g(targets_[e])) * weights_[e];
        }
        return acc / degrees_[m];
    }

    void apply(std::span<const double> g, std::span<double> out) const;

  private:
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> targets_;
    std::vector<double> weights_;
    std::vector<double> degrees_;
};

std::vector<double> apply_laplacian(const LaplacianOperator& op, std::span<const double> g);

}  // namespace proteograph

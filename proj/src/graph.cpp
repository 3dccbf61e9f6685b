#include "proteograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "proteograph/error.hpp"

namespace proteograph {

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

SparseWeights::SparseWeights(std::size_t num_vertices) : rows_(num_vertices) {}

namespace {

// Returns true if a new entry was inserted.
bool accumulate(std::vector<WeightedEdge>& row, std::size_t target, double w) {
    auto it = std::lower_bound(row.begin(), row.end(), target,
                               [](const WeightedEdge& e, std::size_t t) { return e.target < t; });
    if (it != row.end() && it->target == target) {
        it->weight += w;
        return false;
    }
    row.insert(it, WeightedEdge{target, w});
    return true;
}

}  // namespace

void SparseWeights::add(std::size_t i, std::size_t j, double w) {
    if (i >= rows_.size() || j >= rows_.size()) {
        throw ArgumentError("edge endpoint out of range");
    }
    if (i == j) {
        throw ArgumentError("self loops are not allowed (vertex " + std::to_string(i) + ")");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ArgumentError("edge weights must be finite and nonnegative");
    }
    if (accumulate(rows_[i], j, w)) ++num_entries_;
    if (accumulate(rows_[j], i, w)) ++num_entries_;
}

double SparseWeights::weight(std::size_t i, std::size_t j) const {
    const auto& row = rows_.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const WeightedEdge& e, std::size_t t) { return e.target < t; });
    return (it != row.end() && it->target == j) ? it->weight : 0.0;
}

std::vector<double> weighted_degrees(const SparseWeights& weights) {
    std::vector<double> degrees(weights.num_vertices(), 0.0);
    for (std::size_t m = 0; m < degrees.size(); ++m) {
        for (const auto& e : weights.neighbors(m)) degrees[m] += e.weight;
        if (!(degrees[m] > 0.0)) {
            throw IsolatedVertexError(m, "vertex " + std::to_string(m) +
                                             " has zero weighted degree (isolated vertex)");
        }
    }
    return degrees;
}

double default_cutoff_radius(std::span<const Vec3> coordinates) {
    const std::size_t n = coordinates.size();
    if (n < 2) throw ArgumentError("need at least two vertices to derive a cutoff radius");
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d.push_back(distance(coordinates[i], coordinates[j]));
    }
    // Nearest-rank percentile.
    const auto rank = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(d.size())));
    const std::size_t k = rank == 0 ? 0 : rank - 1;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    double cutoff = d[k];
    // Raise it until every vertex reaches its nearest neighbour.
    for (std::size_t i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) nearest = std::min(nearest, distance(coordinates[i], coordinates[j]));
        }
        cutoff = std::max(cutoff, nearest);
    }
    return cutoff;
}

SparseWeights build_proximity_weights(std::span<const Vec3> coordinates, double cutoff_radius,
                                      double decay_scale) {
    if (!(cutoff_radius > 0.0) || !std::isfinite(cutoff_radius)) {
        throw ArgumentError("cutoff_radius must be positive");
    }
    if (!(decay_scale > 0.0) || !std::isfinite(decay_scale)) {
        throw ArgumentError("decay_scale must be positive");
    }
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
        const auto& c = coordinates[i];
        if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(c.z)) {
            throw ArgumentError("non-finite coordinate at vertex " + std::to_string(i));
        }
    }
    const std::size_t n = coordinates.size();
    SparseWeights w(n);
    const double inv_scale2 = 1.0 / (decay_scale * decay_scale);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = distance(coordinates[i], coordinates[j]);
            if (dist > 0.0 && dist <= cutoff_radius) {
                w.add(i, j, std::exp(-dist * dist * inv_scale2));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (const auto& e : w.neighbors(i)) degree += e.weight;
        if (!(degree > 0.0)) {
            std::ostringstream os;
            os << "proximity graph leaves vertex " << i << " isolated at cutoff radius "
               << cutoff_radius << "; use a larger cutoff radius";
            throw IsolatedVertexError(i, os.str());
        }
    }
    return w;
}

const char* to_string(WeightFamily family) {
    return family == WeightFamily::connectivity ? "connectivity" : "proximity";
}

const SparseWeights& BrainGraph::weights(WeightFamily family) const {
    return family == WeightFamily::connectivity ? connectivity : proximity;
}

void BrainGraph::validate() const {
    const std::size_t n = num_vertices();
    if (n == 0) throw ArgumentError("graph has no vertices");
    if (labels.size() != n || region_label.size() != n) {
        throw ArgumentError("label arrays do not match the vertex count");
    }
    for (auto family : {WeightFamily::connectivity, WeightFamily::proximity}) {
        const auto& w = weights(family);
        if (w.num_vertices() != n) {
            throw ArgumentError(std::string(to_string(family)) + " weights have the wrong size");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& e : w.neighbors(i)) {
                if (e.target == i) throw ArgumentError("nonzero diagonal weight");
                if (!(e.weight >= 0.0)) throw ArgumentError("negative weight");
                if (w.weight(e.target, i) != e.weight) throw ArgumentError("asymmetric weights");
            }
        }
        try {
            weighted_degrees(w);
        } catch (const IsolatedVertexError& err) {
            throw IsolatedVertexError(err.vertex(), std::string(to_string(family)) +
                                                        " graph: " + err.what());
        }
    }
    for (auto s : seed_set) {
        if (s >= n) throw ArgumentError("seed vertex out of range");
    }
}

LaplacianOperator::LaplacianOperator(const SparseWeights& weights)
    : degrees_(weighted_degrees(weights)) {
    const std::size_t n = weights.num_vertices();
    offsets_.assign(n + 1, 0);
    for (std::size_t m = 0; m < n; ++m) offsets_[m + 1] = offsets_[m] + weights.neighbors(m).size();
    targets_.reserve(offsets_[n]);
    weights_.reserve(offsets_[n]);
    for (std::size_t m = 0; m < n; ++m) {
        for (const auto& e : weights.neighbors(m)) {
            targets_.push_back(e.target);
            weights_.push_back(e.weight);
        }
    }
}

LaplacianOperator::LaplacianOperator(const BrainGraph& graph, WeightFamily family)
    : LaplacianOperator(graph.weights(family)) {}

void LaplacianOperator::apply(std::span<const double> g, std::span<double> out) const {
    if (g.size() != num_vertices() || out.size() != num_vertices()) {
        throw ArgumentError("Laplacian input length does not match the vertex count");
    }
    auto value = [g](std::size_t j) { return g[j]; };
    for (std::size_t m = 0; m < num_vertices(); ++m) out[m] = at(m, value);
}

std::vector<double> apply_laplacian(const LaplacianOperator& op, std::span<const double> g) {
    std::vector<double> out(g.size());
    op.apply(g, out);
    return out;
}

}  // namespace proteograph

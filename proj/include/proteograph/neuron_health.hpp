#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "proteograph/aggregation.hpp"

namespace proteograph {

// Uniform cell grid on the malfunction axis a in [0, 1].
class HealthGrid {
  public:
    explicit HealthGrid(std::size_t cells = 64);

    std::size_t cells() const noexcept { return cells_; }
    double width() const noexcept { return width_; }
    double center(std::size_t k) const noexcept { return (static_cast<double>(k) + 0.5) * width_; }
    // Face k sits at a = k * width, k = 0..cells.
    double face(std::size_t k) const noexcept { return static_cast<double>(k) * width_; }

    bool operator==(const HealthGrid&) const = default;

  private:
    std::size_t cells_;
    double width_;
};

// Cell averages of the malfunction density, one row of `cells` per vertex.
class HealthDensity {
  public:
    HealthDensity() = default;
    HealthDensity(std::size_t num_vertices, std::size_t cells)
        : cells_(cells), values_(num_vertices * cells, 0.0) {}

    std::size_t num_vertices() const noexcept { return cells_ ? values_.size() / cells_ : 0; }
    std::size_t cells() const noexcept { return cells_; }

    std::span<double> at(std::size_t m) { return {values_.data() + m * cells_, cells_}; }
    std::span<const double> at(std::size_t m) const { return {values_.data() + m * cells_, cells_}; }

    std::span<double> data() noexcept { return values_; }
    std::span<const double> data() const noexcept { return values_; }

    bool operator==(const HealthDensity&) const = default;

  private:
    std::size_t cells_ = 0;
    std::vector<double> values_;
};

struct DeteriorationParams {
    double c_peer = 0.1;        // C_G, influence of sicker neighbours
    double c_abeta = 0.01;      // C_S, Abeta oligomer toxicity
    double c_tau = 0.01;        // C_T, tau toxicity
    double u_bar_abeta = 0.001; // toxicity threshold for Abeta oligomers
    double u_bar_tau = 0.001;   // toxicity threshold for tau
    double c_source = 10.0;     // C_F, Abeta monomer production
    double mu0 = 0.01;          // baseline production of healthy neurons

    void validate() const;
    bool operator==(const DeteriorationParams&) const = default;
};

// v(a) = C_G int_0^1 (b - a)^+ f(b) db
//        + C_S (1 - a) (sum_{i=2}^{4} u_i - Ubar_Abeta)^+
//        + C_T (1 - a) (sum_{i=1}^{5} tau_i - Ubar_tau)^+
// at arbitrary positions, integral by midpoint quadrature on the cell grid.
std::vector<double> deterioration_rate(std::span<const double> f_m,
                                       std::span<const double, kCompartments> u_m,
                                       std::span<const double, kCompartments> tau_m,
                                       std::span<const double> positions, const HealthGrid& grid,
                                       const DeteriorationParams& params);

// Same velocity at the cells + 1 grid faces, in O(cells) via suffix sums.
void face_velocities(std::span<const double> f_m, std::span<const double, kCompartments> u_m,
                     std::span<const double, kCompartments> tau_m, const HealthGrid& grid,
                     const DeteriorationParams& params, std::span<double> out);

// C_F int_0^1 (mu0 + a)(1 - a) f(a) da.
double amyloid_source(std::span<const double> f_m, const HealthGrid& grid,
                      const DeteriorationParams& params);

// int_0^1 a f(a) da.
double malfunction_mean(std::span<const double> f_m, const HealthGrid& grid);

// int_0^1 f(a) da.
double density_mass(std::span<const double> f_m, const HealthGrid& grid);

// Semi-discrete upwind divergence -d/da (v f) with zero flux through a = 0 and a = 1.
void transport_divergence(std::span<const double> f_m, std::span<const double> face_v,
                          const HealthGrid& grid, std::span<double> out);

// One forward-Euler upwind step for every vertex; `face_v` holds cells + 1
// face velocities per vertex. Throws StepSizeError when dt max(v) / da > cfl_max.
HealthDensity transport_step(const HealthDensity& f, std::span<const double> face_v, double dt,
                             const HealthGrid& grid, double cfl_max = 0.9);

// Cell averages of a Gaussian (mean, sigma) truncated to [0, 1], renormalized
// to unit mass on the grid.
std::vector<double> initial_density(const HealthGrid& grid, double mean, double sigma);

}  // namespace proteograph

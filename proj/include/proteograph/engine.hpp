#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "proteograph/aggregation.hpp"
#include "proteograph/graph.hpp"
#include "proteograph/neuron_health.hpp"
#include "proteograph/parallel.hpp"

namespace proteograph {

struct ModelParams {
    AggregationParams aggregation;
    DeteriorationParams deterioration;

    bool operator==(const ModelParams&) const = default;
};

// The coupled unknowns, also used for their time derivative.
struct FieldSet {
    ProteinField abeta;
    ProteinField tau;
    HealthDensity health;

    FieldSet() = default;
    FieldSet(std::size_t num_vertices, std::size_t cells)
        : abeta(num_vertices), tau(num_vertices), health(num_vertices, cells) {}

    bool operator==(const FieldSet&) const = default;
};

struct ClampLog {
    std::uint64_t abeta = 0;
    std::uint64_t tau = 0;
    std::uint64_t health = 0;

    std::uint64_t total() const noexcept { return abeta + tau + health; }
};

struct SimState {
    double t = 0.0;
    FieldSet fields;
    std::uint64_t steps = 0;
    std::uint64_t rejected_steps = 0;
    ClampLog clamps;
};

enum class StepMode {
    fixed,    // constant dt; CFL breach or negativity is a hard error
    halving,  // dt limited by CFL, halved on rejection down to dt_min
};

struct IntegratorConfig {
    double t_end = 50.0;
    double dt_init = 0.01;
    double dt_min = 1e-8;
    double dt_max = 1.0;
    double cfl_max = 0.9;
    double snapshot_interval = 0.25;
    StepMode mode = StepMode::halving;

    void validate() const;
    bool operator==(const IntegratorConfig&) const = default;
};

// Values in [-kNegativeTolerance, 0) are clamped; anything lower rejects a step.
inline constexpr double kNegativeTolerance = 1e-12;

// Graph, parameters and grid bound together with the two Laplacians.
class Model {
  public:
    Model(std::shared_ptr<const BrainGraph> graph, ModelParams params, HealthGrid grid,
          std::size_t workers = 1);
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;
    Model(Model&&) = default;

    const BrainGraph& graph() const noexcept { return *graph_; }
    const ModelParams& params() const noexcept { return params_; }
    const HealthGrid& grid() const noexcept { return grid_; }
    const LaplacianOperator& proximity() const noexcept { return proximity_; }
    const LaplacianOperator& connectivity() const noexcept { return connectivity_; }
    std::span<const std::uint8_t> seed_mask() const noexcept { return seed_mask_; }
    std::size_t workers() const noexcept { return pool_->size(); }

    // Writes d/dt of `state` at time t into `out` and returns the largest
    // interior face velocity. Per vertex: source, Abeta, tau (reading the
    // current Abeta), velocity, transport divergence.
    double rhs(double t, const FieldSet& state, FieldSet& out) const;

    double max_face_velocity(const FieldSet& state) const;

  private:
    std::shared_ptr<const BrainGraph> graph_;
    ModelParams params_;
    HealthGrid grid_;
    LaplacianOperator proximity_;
    LaplacianOperator connectivity_;
    std::vector<std::uint8_t> seed_mask_;
    std::unique_ptr<WorkerPool> pool_;
};

FieldSet coupled_rhs(const Model& model, const SimState& state);

using StateCallback = std::function<void(const SimState&)>;

// Classic RK4 from state.t to config.t_end. `on_snapshot` sees the initial
// state, every multiple of snapshot_interval and t_end; `on_step` sees every
// accepted step.
void advance(const Model& model, SimState& state, const IntegratorConfig& config,
             const StateCallback& on_snapshot, const StateCallback& on_step = {});

struct AdvanceResult {
    SimState final_state;
    std::vector<SimState> snapshots;
};

AdvanceResult advance(const Model& model, SimState state, const IntegratorConfig& config);

}  // namespace proteograph

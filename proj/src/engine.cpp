#include "proteograph/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proteograph/error.hpp"

namespace proteograph {

void IntegratorConfig::validate() const {
    if (!(t_end > 0.0)) throw ArgumentError("t_end must be positive");
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) {
        throw ArgumentError("step sizes must satisfy 0 < dt_min <= dt_init <= dt_max");
    }
    if (!(cfl_max > 0.0)) throw ArgumentError("cfl_max must be positive");
    if (!(snapshot_interval > 0.0)) throw ArgumentError("snapshot_interval must be positive");
}

Model::Model(std::shared_ptr<const BrainGraph> graph, ModelParams params, HealthGrid grid,
             std::size_t workers)
    : graph_(std::move(graph)),
      params_(params),
      grid_(grid),
      proximity_(*graph_, WeightFamily::proximity),
      connectivity_(*graph_, WeightFamily::connectivity),
      seed_mask_(graph_->num_vertices(), 0),
      pool_(std::make_unique<WorkerPool>(std::max<std::size_t>(workers, 1))) {
    params_.aggregation.validate();
    params_.deterioration.validate();
    for (auto s : graph_->seed_set) seed_mask_.at(s) = 1;
}

double Model::rhs(double t, const FieldSet& state, FieldSet& out) const {
    const std::size_t n = graph_->num_vertices();
    const std::size_t cells = grid_.cells();
    if (state.abeta.num_vertices() != n || state.tau.num_vertices() != n ||
        state.health.num_vertices() != n || state.health.cells() != cells) {
        throw ArgumentError("state does not match the model dimensions");
    }
    if (out.abeta.num_vertices() != n || out.health.cells() != cells ||
        out.health.num_vertices() != n) {
        out = FieldSet(n, cells);
    }
    const auto& agg = params_.aggregation;
    const auto& det = params_.deterioration;
    std::vector<double> vertex_vmax(n, 0.0);

    pool_->parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> faces(cells + 1);
        for (std::size_t m = begin; m < end; ++m) {
            const auto f_m = state.health.at(m);
            for (std::size_t k = 0; k < cells; ++k) {
                if (!std::isfinite(f_m[k])) {
                    std::ostringstream os;
                    os << "health: non-finite density at vertex " << m << ", cell " << k;
                    throw StateCorruptionError(os.str());
                }
            }
            const double source = amyloid_source(f_m, grid_, det);
            const auto du = abeta_rhs_at(m, state.abeta, source, agg, proximity_);
            const auto dtau =
                tau_rhs_at(m, state.tau, state.abeta, t, seed_mask_[m] != 0, agg, connectivity_);
            auto out_u = out.abeta.at(m);
            auto out_tau = out.tau.at(m);
            for (std::size_t i = 0; i < kCompartments; ++i) {
                out_u[i] = du[i];
                out_tau[i] = dtau[i];
            }
            face_velocities(f_m, state.abeta.at(m), state.tau.at(m), grid_, det, faces);
            double vmax = 0.0;
            for (std::size_t k = 1; k < cells; ++k) vmax = std::max(vmax, faces[k]);
            vertex_vmax[m] = vmax;
            transport_divergence(f_m, faces, grid_, out.health.at(m));
        }
    });
    return *std::max_element(vertex_vmax.begin(), vertex_vmax.end());
}

double Model::max_face_velocity(const FieldSet& state) const {
    const std::size_t cells = grid_.cells();
    std::vector<double> faces(cells + 1);
    double vmax = 0.0;
    for (std::size_t m = 0; m < graph_->num_vertices(); ++m) {
        face_velocities(state.health.at(m), state.abeta.at(m), state.tau.at(m), grid_,
                        params_.deterioration, faces);
        for (std::size_t k = 1; k < cells; ++k) vmax = std::max(vmax, faces[k]);
    }
    return vmax;
}

FieldSet coupled_rhs(const Model& model, const SimState& state) {
    FieldSet out(model.graph().num_vertices(), model.grid().cells());
    model.rhs(state.t, state.fields, out);
    return out;
}

namespace {

// out = y + a * k, component-wise over the three fields.
void axpy(FieldSet& out, const FieldSet& y, double a, const FieldSet& k) {
    auto apply = [a](std::span<double> o, std::span<const double> yv, std::span<const double> kv) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = yv[i] + a * kv[i];
    };
    apply(out.abeta.data(), y.abeta.data(), k.abeta.data());
    apply(out.tau.data(), y.tau.data(), k.tau.data());
    apply(out.health.data(), y.health.data(), k.health.data());
}

void rk4_combine(FieldSet& out, const FieldSet& y, double dt, const FieldSet& k1,
                 const FieldSet& k2, const FieldSet& k3, const FieldSet& k4) {
    const double w = dt / 6.0;
    auto apply = [w](std::span<double> o, std::span<const double> yv, std::span<const double> a,
                     std::span<const double> b, std::span<const double> c,
                     std::span<const double> d) {
        for (std::size_t i = 0; i < o.size(); ++i) {
            o[i] = yv[i] + w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
        }
    };
    apply(out.abeta.data(), y.abeta.data(), k1.abeta.data(), k2.abeta.data(), k3.abeta.data(),
          k4.abeta.data());
    apply(out.tau.data(), y.tau.data(), k1.tau.data(), k2.tau.data(), k3.tau.data(),
          k4.tau.data());
    apply(out.health.data(), y.health.data(), k1.health.data(), k2.health.data(),
          k3.health.data(), k4.health.data());
}

double min_entry(const FieldSet& s) {
    double lo = 0.0;
    for (auto span : {s.abeta.data(), s.tau.data(), s.health.data()}) {
        for (double v : span) lo = std::min(lo, v);
    }
    return lo;
}

std::uint64_t clamp_small_negatives(std::span<double> values) {
    std::uint64_t count = 0;
    for (auto& v : values) {
        if (v < 0.0) {
            v = 0.0;
            ++count;
        }
    }
    return count;
}

}  // namespace

void advance(const Model& model, SimState& state, const IntegratorConfig& config,
             const StateCallback& on_snapshot, const StateCallback& on_step) {
    config.validate();
    const std::size_t n = model.graph().num_vertices();
    const std::size_t cells = model.grid().cells();
    const double da = model.grid().width();
    FieldSet k1(n, cells), k2(n, cells), k3(n, cells), k4(n, cells);
    FieldSet stage(n, cells), candidate(n, cells);

    const double t0 = state.t;
    if (on_snapshot) on_snapshot(state);
    if (t0 >= config.t_end) return;

    std::uint64_t next_index = 1;
    auto snapshot_time = [&](std::uint64_t k) {
        return std::min(config.t_end, t0 + static_cast<double>(k) * config.snapshot_interval);
    };

    while (state.t < config.t_end) {
        const double target = snapshot_time(next_index);
        const double vmax_now = model.rhs(state.t, state.fields, k1);
        double dt = config.mode == StepMode::fixed ? config.dt_init
                                                   : std::min(config.dt_init, config.dt_max);
        const double cfl_dt = vmax_now > 0.0 ? config.cfl_max * da / vmax_now
                                             : std::numeric_limits<double>::infinity();
        if (dt > cfl_dt) {
            if (config.mode == StepMode::fixed) {
                std::ostringstream os;
                os << "fixed step dt = " << dt << " violates the transport CFL bound "
                   << cfl_dt << " at t = " << state.t;
                throw StepSizeError(os.str());
            }
            dt = cfl_dt;
            if (dt < config.dt_min) {
                std::ostringstream os;
                os << "transport CFL bound " << cfl_dt << " at t = " << state.t
                   << " is below dt_min = " << config.dt_min;
                throw StepSizeError(os.str());
            }
        }
        for (;;) {
            const double remaining = target - state.t;
            const bool lands = dt >= remaining * (1.0 - 1e-9);
            const double h = lands ? remaining : dt;

            axpy(stage, state.fields, 0.5 * h, k1);
            double vmax = model.rhs(state.t + 0.5 * h, stage, k2);
            axpy(stage, state.fields, 0.5 * h, k2);
            vmax = std::max(vmax, model.rhs(state.t + 0.5 * h, stage, k3));
            axpy(stage, state.fields, h, k3);
            vmax = std::max(vmax, model.rhs(state.t + h, stage, k4));
            vmax = std::max(vmax, vmax_now);
            rk4_combine(candidate, state.fields, h, k1, k2, k3, k4);

            const bool cfl_ok = h * vmax / da <= config.cfl_max;
            const bool positive_ok = min_entry(candidate) >= -kNegativeTolerance;
            if (cfl_ok && positive_ok) {
                std::swap(state.fields, candidate);
                state.clamps.abeta += clamp_small_negatives(state.fields.abeta.data());
                state.clamps.tau += clamp_small_negatives(state.fields.tau.data());
                state.clamps.health += clamp_small_negatives(state.fields.health.data());
                state.t = lands ? target : state.t + h;
                ++state.steps;
                if (on_step) on_step(state);
                if (lands) {
                    if (on_snapshot) on_snapshot(state);
                    ++next_index;
                }
                break;
            }
            std::ostringstream why;
            why << (cfl_ok ? "negative concentration " : "CFL breach ") << "at t = " << state.t
                << " with dt = " << h;
            if (config.mode == StepMode::fixed) {
                throw StepSizeError("fixed-step RK4 rejected a step: " + why.str());
            }
            ++state.rejected_steps;
            dt = 0.5 * h;
            if (dt < config.dt_min) {
                throw StepSizeError("step size fell below dt_min (" + why.str() +
                                    "); the problem is too stiff for the explicit integrator, "
                                    "increase epsilon or lower dt_min");
            }
        }
    }
}

AdvanceResult advance(const Model& model, SimState state, const IntegratorConfig& config) {
    AdvanceResult result;
    advance(model, state, config, [&](const SimState& s) { result.snapshots.push_back(s); });
    result.final_state = std::move(state);
    return result;
}

}  // namespace proteograph

#include "proteograph/neuron_health.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proteograph/error.hpp"

namespace proteograph {

HealthGrid::HealthGrid(std::size_t cells) : cells_(cells), width_(0.0) {
    if (cells < 2) throw ArgumentError("the malfunction grid needs at least 2 cells");
    width_ = 1.0 / static_cast<double>(cells);
}

void DeteriorationParams::validate() const {
    for (double v : {c_peer, c_abeta, c_tau, u_bar_abeta, u_bar_tau, c_source, mu0}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ArgumentError("deterioration parameters must be finite and nonnegative");
        }
    }
}

namespace {

double toxic_load(std::span<const double, kCompartments> u_m,
                  std::span<const double, kCompartments> tau_m, const DeteriorationParams& p) {
    const double tau_total = tau_m[0] + tau_m[1] + tau_m[2] + tau_m[3] + tau_m[4];
    return p.c_abeta * positive_part(oligomer_burden(u_m) - p.u_bar_abeta) +
           p.c_tau * positive_part(tau_total - p.u_bar_tau);
}

}  // namespace

std::vector<double> deterioration_rate(std::span<const double> f_m,
                                       std::span<const double, kCompartments> u_m,
                                       std::span<const double, kCompartments> tau_m,
                                       std::span<const double> positions, const HealthGrid& grid,
                                       const DeteriorationParams& p) {
    if (f_m.size() != grid.cells()) throw ArgumentError("density does not match the grid");
    const double toxic = toxic_load(u_m, tau_m, p);
    const double da = grid.width();
    std::vector<double> v(positions.size());
    for (std::size_t q = 0; q < positions.size(); ++q) {
        const double a = positions[q];
        double peer = 0.0;
        for (std::size_t k = 0; k < grid.cells(); ++k) {
            peer += positive_part(grid.center(k) - a) * f_m[k];
        }
        v[q] = p.c_peer * peer * da + (1.0 - a) * toxic;
    }
    return v;
}

void face_velocities(std::span<const double> f_m, std::span<const double, kCompartments> u_m,
                     std::span<const double, kCompartments> tau_m, const HealthGrid& grid,
                     const DeteriorationParams& p, std::span<double> out) {
    const std::size_t cells = grid.cells();
    if (f_m.size() != cells || out.size() != cells + 1) {
        throw ArgumentError("face_velocities: size mismatch");
    }
    const double toxic = toxic_load(u_m, tau_m, p);
    const double da = grid.width();
    // Cells with centre above face j are exactly k >= j.
    double mass_above = 0.0;
    double moment_above = 0.0;
    out[cells] = 0.0;
    for (std::size_t j = cells; j-- > 0;) {
        mass_above += f_m[j];
        moment_above += grid.center(j) * f_m[j];
        const double a = grid.face(j);
        const double peer = std::max(0.0, (moment_above - a * mass_above) * da);
        out[j] = p.c_peer * peer + (1.0 - a) * toxic;
    }
}

double amyloid_source(std::span<const double> f_m, const HealthGrid& grid,
                      const DeteriorationParams& p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        const double a = grid.center(k);
        acc += (p.mu0 + a) * (1.0 - a) * f_m[k];
    }
    return p.c_source * acc * grid.width();
}

double malfunction_mean(std::span<const double> f_m, const HealthGrid& grid) {
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.cells(); ++k) acc += grid.center(k) * f_m[k];
    return acc * grid.width();
}

double density_mass(std::span<const double> f_m, const HealthGrid& grid) {
    double acc = 0.0;
    for (double v : f_m) acc += v;
    return acc * grid.width();
}

void transport_divergence(std::span<const double> f_m, std::span<const double> face_v,
                          const HealthGrid& grid, std::span<double> out) {
    const std::size_t cells = grid.cells();
    const double inv_da = 1.0 / grid.width();
    // Flux through face k (k = 1..cells-1) is v_k f_{k-1}; boundary fluxes vanish.
    double flux_in = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
        const double flux_out = (k + 1 < cells) ? face_v[k + 1] * f_m[k] : 0.0;
        out[k] = (flux_in - flux_out) * inv_da;
        flux_in = flux_out;
    }
}

HealthDensity transport_step(const HealthDensity& f, std::span<const double> face_v, double dt,
                             const HealthGrid& grid, double cfl_max) {
    const std::size_t cells = grid.cells();
    if (f.cells() != cells || face_v.size() != f.num_vertices() * (cells + 1)) {
        throw ArgumentError("transport_step: size mismatch");
    }
    if (!(dt >= 0.0)) throw ArgumentError("transport_step: negative dt");
    double vmax = 0.0;
    for (std::size_t m = 0; m < f.num_vertices(); ++m) {
        for (std::size_t k = 1; k < cells; ++k) {
            const double v = face_v[m * (cells + 1) + k];
            if (v < 0.0) throw ArgumentError("transport_step: negative face velocity");
            vmax = std::max(vmax, v);
        }
    }
    const double cfl = dt * vmax / grid.width();
    if (cfl > cfl_max) {
        std::ostringstream os;
        os << "transport CFL number " << cfl << " exceeds " << cfl_max << " (dt = " << dt << ")";
        throw StepSizeError(os.str());
    }
    HealthDensity next = f;
    std::vector<double> div(cells);
    for (std::size_t m = 0; m < f.num_vertices(); ++m) {
        transport_divergence(f.at(m), face_v.subspan(m * (cells + 1), cells + 1), grid, div);
        auto row = next.at(m);
        for (std::size_t k = 0; k < cells; ++k) row[k] += dt * div[k];
    }
    return next;
}

std::vector<double> initial_density(const HealthGrid& grid, double mean, double sigma) {
    if (!(sigma > 0.0)) throw ArgumentError("initial density width must be positive");
    if (!(mean >= 0.0 && mean <= 1.0)) throw ArgumentError("initial density mean must lie in [0, 1]");
    auto cdf = [&](double a) { return 0.5 * std::erfc(-(a - mean) / (sigma * std::sqrt(2.0))); };
    std::vector<double> f(grid.cells());
    double total = 0.0;
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        f[k] = cdf(grid.face(k + 1)) - cdf(grid.face(k));
        total += f[k];
    }
    if (!(total > 0.0)) throw ArgumentError("initial density has no mass on the grid");
    for (auto& v : f) v /= total * grid.width();
    return f;
}

}  // namespace proteograph

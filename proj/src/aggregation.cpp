#include "proteograph/aggregation.hpp"

#include <cmath>
#include <sstream>

#include "proteograph/error.hpp"

namespace proteograph {

void AggregationParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ArgumentError(std::string(name) + " must be finite and nonnegative");
        }
    };
    nonneg(alpha, "alpha");
    nonneg(gamma, "gamma");
    for (double d : diffusivity) nonneg(d, "diffusivity");
    for (double s : clearance) nonneg(s, "clearance");
    nonneg(c_seed, "c_seed");
    nonneg(c_tau, "c_tau");
    nonneg(u_bar, "u_bar");
    if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
    if (!(lambda_seed > 0.0)) throw ArgumentError("lambda_seed must be positive");
}

double seed_profile(double t, double lambda) {
    if (t < 0.0) throw ArgumentError("seed_profile: negative time");
    if (!(lambda > 0.0)) throw ArgumentError("seed_profile: lambda must be positive");
    const double s = t / lambda;
    return s * std::exp(-s);
}

CoalescenceTerms coalescence_terms(std::span<const double, kCompartments> c, double rate) {
    CoalescenceTerms out;
    const double total = c[0] + c[1] + c[2] + c[3] + c[4];
    const double half = 0.5 * rate;
    // Ordered sums written out; index i here is the zero-based compartment.
    out.gain[1] = half * (c[0] * c[0]);
    out.gain[2] = half * (2.0 * c[0] * c[1]);
    out.gain[3] = half * (2.0 * c[0] * c[2] + c[1] * c[1]);
    // Pairs of sizes (j, k), j, k < 5, j + k >= 5:
    // (1,4)(4,1) (2,3)(3,2) (2,4)(4,2) (3,3) (3,4)(4,3) (4,4)
    out.gain[4] = half * (2.0 * c[0] * c[3] + 2.0 * c[1] * c[2] + 2.0 * c[1] * c[3] +
                          c[2] * c[2] + 2.0 * c[2] * c[3] + c[3] * c[3]);
    for (std::size_t i = 0; i < 4; ++i) out.loss[i] = rate * c[i] * total;
    return out;
}

namespace {

[[noreturn]] void corrupt(const char* name, std::size_t m, std::size_t i) {
    std::ostringstream os;
    os << name << ": non-finite concentration at vertex " << m << ", compartment " << i + 1;
    throw StateCorruptionError(os.str());
}

}  // namespace

Compartments abeta_rhs_at(std::size_t m, const ProteinField& u, double f_source,
                          const AggregationParams& p, const LaplacianOperator& proximity) {
    const auto um = u.at(m);
    for (std::size_t i = 0; i < kCompartments; ++i) {
        if (!std::isfinite(um[i])) corrupt("abeta", m, i);
    }
    if (!std::isfinite(f_source)) {
        throw StateCorruptionError("abeta: non-finite source at vertex " + std::to_string(m));
    }
    const auto coal = coalescence_terms(um, p.alpha);
    Compartments rhs{};
    for (std::size_t i = 0; i < 4; ++i) {
        const double lap = proximity.at(m, [&u, i](std::size_t j) { return u(j, i); });
        rhs[i] = -p.diffusivity[i] * lap + coal.gain[i] - coal.loss[i] - p.clearance[i] * um[i];
    }
    rhs[kMonomer] += f_source;
    rhs[kTopCompartment] = coal.gain[kTopCompartment];
    const double inv_eps = 1.0 / p.epsilon;
    for (auto& r : rhs) r *= inv_eps;
    return rhs;
}

Compartments tau_rhs_at(std::size_t m, const ProteinField& tau, const ProteinField& u, double t,
                        bool seeded, const AggregationParams& p,
                        const LaplacianOperator& connectivity) {
    const auto tm = tau.at(m);
    for (std::size_t i = 0; i < kCompartments; ++i) {
        if (!std::isfinite(tm[i])) corrupt("tau", m, i);
    }
    const auto coal = coalescence_terms(tm, p.gamma);
    Compartments rhs{};
    for (std::size_t i = 0; i < 4; ++i) {
        const double lap = connectivity.at(m, [&tau, i](std::size_t j) { return tau(j, i); });
        rhs[i] = -p.diffusivity[i] * lap + coal.gain[i] - coal.loss[i];
    }
    if (seeded && p.c_seed != 0.0) rhs[kMonomer] += p.c_seed * seed_profile(t, p.lambda_seed);
    if (p.c_tau != 0.0) rhs[kMonomer] += p.c_tau * positive_part(oligomer_burden(u.at(m)) - p.u_bar);
    rhs[kTopCompartment] = coal.gain[kTopCompartment];
    return rhs;
}

ProteinField abeta_rhs(const ProteinField& u, std::span<const double> f_source,
                       const AggregationParams& params, const LaplacianOperator& proximity) {
    const std::size_t n = u.num_vertices();
    if (f_source.size() != n || proximity.num_vertices() != n) {
        throw ArgumentError("abeta_rhs: size mismatch");
    }
    ProteinField out(n);
    for (std::size_t m = 0; m < n; ++m) {
        const auto r = abeta_rhs_at(m, u, f_source[m], params, proximity);
        for (std::size_t i = 0; i < kCompartments; ++i) out(m, i) = r[i];
    }
    return out;
}

ProteinField tau_rhs(const ProteinField& tau, const ProteinField& u, double t,
                     const AggregationParams& params, const LaplacianOperator& connectivity,
                     std::span<const std::uint8_t> seed_mask) {
    const std::size_t n = tau.num_vertices();
    if (u.num_vertices() != n || seed_mask.size() != n || connectivity.num_vertices() != n) {
        throw ArgumentError("tau_rhs: size mismatch");
    }
    if (t < 0.0) throw ArgumentError("tau_rhs: negative time");
    ProteinField out(n);
    for (std::size_t m = 0; m < n; ++m) {
        const auto r = tau_rhs_at(m, tau, u, t, seed_mask[m] != 0, params, connectivity);
        for (std::size_t i = 0; i < kCompartments; ++i) out(m, i) = r[i];
    }
    return out;
}

void check_finite(const ProteinField& field, const char* name) {
    for (std::size_t m = 0; m < field.num_vertices(); ++m) {
        for (std::size_t i = 0; i < kCompartments; ++i) {
            if (!std::isfinite(field(m, i))) corrupt(name, m, i);
        }
    }
}

}  // namespace proteograph

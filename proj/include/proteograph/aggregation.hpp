#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "proteograph/graph.hpp"

namespace proteograph {

// Compartments, zero-based: monomer, dimer, short oligomer, long oligomer,
// plaque (Abeta) or tangle (tau).
inline constexpr std::size_t kCompartments = 5;
inline constexpr std::size_t kMonomer = 0;
inline constexpr std::size_t kTopCompartment = 4;
using Compartments = std::array<double, kCompartments>;

// Per-vertex concentrations, vertex-major.
class ProteinField {
  public:
    ProteinField() = default;
    explicit ProteinField(std::size_t num_vertices) : values_(num_vertices * kCompartments, 0.0) {}

    std::size_t num_vertices() const noexcept { return values_.size() / kCompartments; }

    double& operator()(std::size_t m, std::size_t i) { return values_[m * kCompartments + i]; }
    double operator()(std::size_t m, std::size_t i) const { return values_[m * kCompartments + i]; }

    std::span<double, kCompartments> at(std::size_t m) {
        return std::span<double, kCompartments>(values_.data() + m * kCompartments, kCompartments);
    }
    std::span<const double, kCompartments> at(std::size_t m) const {
        return std::span<const double, kCompartments>(values_.data() + m * kCompartments,
                                                      kCompartments);
    }
    Compartments vertex(std::size_t m) const {
        Compartments c;
        for (std::size_t i = 0; i < kCompartments; ++i) c[i] = (*this)(m, i);
        return c;
    }

    std::span<double> data() noexcept { return values_; }
    std::span<const double> data() const noexcept { return values_; }

    bool operator==(const ProteinField&) const = default;

  private:
    std::vector<double> values_;
};

// Defaults are the fixed model constants together with the free constants of
// the scenario where every tau source is active (alpha = 10, C_tau = 10,
// c = 0.05).
struct AggregationParams {
    double alpha = 10.0;   // Abeta coalescence
    double gamma = 4.0;    // tau coalescence
    // d_i = 1/i for the four diffusing compartments, shared by both proteins.
    std::array<double, 4> diffusivity{1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0};
    // sigma_i = 1/i, Abeta only.
    std::array<double, 4> clearance{1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0};
    double epsilon = 0.1;      // Abeta time scale
    double c_seed = 0.05;      // tau seeding amplitude c
    double lambda_seed = 10.0; // seeding time scale
    double c_tau = 10.0;       // Abeta oligomer -> tau monomer coupling
    double u_bar = 0.001;      // coupling threshold

    void validate() const;
    bool operator==(const AggregationParams&) const = default;
};

// s(t) = (t / lambda) exp(-t / lambda); vertex masking is the caller's job.
double seed_profile(double t, double lambda);

struct CoalescenceTerms {
    Compartments gain{};
    Compartments loss{};
};

// gain_i = (rate/2) sum_{j=1}^{i-1} c_j c_{i-j} for 1 < i < 5,
// gain_5 = (rate/2) sum over ordered pairs j, k in 1..4 with j + k >= 5,
// loss_i = rate c_i sum_{j=1}^{5} c_j for i = 1..4, loss_5 = gain_1 = 0.
CoalescenceTerms coalescence_terms(std::span<const double, kCompartments> conc, double rate);

// Sum of the Abeta oligomer compartments 2..4 (zero-based 1..3).
inline double oligomer_burden(std::span<const double, kCompartments> c) { return c[1] + c[2] + c[3]; }

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Time derivative of the Abeta field at one vertex (compartment-wise,
// already divided by epsilon).
Compartments abeta_rhs_at(std::size_t m, const ProteinField& u, double f_source,
                          const AggregationParams& params, const LaplacianOperator& proximity);

// Time derivative of the tau field at one vertex. `seeded` marks membership
// in the seed set.
Compartments tau_rhs_at(std::size_t m, const ProteinField& tau, const ProteinField& u, double t,
                        bool seeded, const AggregationParams& params,
                        const LaplacianOperator& connectivity);

ProteinField abeta_rhs(const ProteinField& u, std::span<const double> f_source,
                       const AggregationParams& params, const LaplacianOperator& proximity);

ProteinField tau_rhs(const ProteinField& tau, const ProteinField& u, double t,
                     const AggregationParams& params, const LaplacianOperator& connectivity,
                     std::span<const std::uint8_t> seed_mask);

// Throws StateCorruptionError naming the first non-finite entry.
void check_finite(const ProteinField& field, const char* name);

}  // namespace proteograph

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "proteograph/aggregation.hpp"
#include "proteograph/connectome_io.hpp"
#include "proteograph/engine.hpp"
#include "proteograph/neuron_health.hpp"

namespace proteograph {

// Vertex means per compartment; all parcels are taken to have equal volume.
Compartments global_burden(const ProteinField& field);

// Per-region vertex means. Throws ConfigError on an empty region.
std::vector<Compartments> regional_burden(const ProteinField& field, const RegionTable& regions);

struct DiseaseIndices {
    std::vector<double> per_vertex;
    std::vector<double> per_region;
    double global = 0.0;
};

DiseaseIndices disease_indices(const HealthDensity& f, const HealthGrid& grid,
                               const RegionTable& regions);

// Sampled observables of one run, indexed [sample] or [sample][region].
struct TimeSeriesRecord {
    std::vector<std::string> region_names;
    std::vector<double> times;
    std::vector<Compartments> abeta;
    std::vector<Compartments> tau;
    std::vector<double> disease;
    std::vector<std::vector<Compartments>> abeta_region;
    std::vector<std::vector<Compartments>> tau_region;
    std::vector<std::vector<double>> disease_region;

    std::size_t size() const noexcept { return times.size(); }

    // Appends one sample; throws ArgumentError unless t is strictly increasing.
    void append(const SimState& state, const HealthGrid& grid, const RegionTable& regions);

    // Column views.
    std::vector<double> abeta_series(std::size_t compartment) const;
    std::vector<double> tau_series(std::size_t compartment) const;
    std::vector<double> abeta_region_series(std::size_t region, std::size_t compartment) const;
    std::vector<double> tau_region_series(std::size_t region, std::size_t compartment) const;
    std::vector<double> disease_region_series(std::size_t region) const;

    bool operator==(const TimeSeriesRecord&) const = default;
};

// Header: time,u1..u5,tau1..tau5,A, then for each region
// <region>/u1..u5, <region>/tau1..tau5, <region>/A.
std::vector<std::string> csv_header(const std::vector<std::string>& region_names);
std::string to_csv(const TimeSeriesRecord& record);
void write_csv(const TimeSeriesRecord& record, const std::filesystem::path& path);
TimeSeriesRecord read_csv_record(const std::filesystem::path& path);

// A series peaks when its maximum sits strictly inside (t_first, t_last) and
// its final value is at most 90% of that maximum.
inline constexpr double kPeakDeclineRatio = 0.9;
bool has_interior_peak(const std::vector<double>& times, const std::vector<double>& values);
std::size_t argmax(const std::vector<double>& values);

}  // namespace proteograph

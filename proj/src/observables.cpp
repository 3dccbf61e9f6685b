#include "proteograph/observables.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "proteograph/error.hpp"
#include "proteograph/text_util.hpp"

namespace proteograph {

Compartments global_burden(const ProteinField& field) {
    Compartments mean{};
    const std::size_t n = field.num_vertices();
    if (n == 0) return mean;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < kCompartments; ++i) mean[i] += field(m, i);
    }
    for (auto& v : mean) v /= static_cast<double>(n);
    return mean;
}

std::vector<Compartments> regional_burden(const ProteinField& field, const RegionTable& regions) {
    if (regions.num_vertices() != field.num_vertices()) {
        throw ConfigError("region table does not cover the field's vertices");
    }
    std::vector<Compartments> out(regions.num_regions(), Compartments{});
    for (std::size_t r = 0; r < regions.num_regions(); ++r) {
        const auto& members = regions.members[r];
        if (members.empty()) throw ConfigError("region '" + regions.names[r] + "' is empty");
        for (auto m : members) {
            for (std::size_t i = 0; i < kCompartments; ++i) out[r][i] += field(m, i);
        }
        for (auto& v : out[r]) v /= static_cast<double>(members.size());
    }
    return out;
}

DiseaseIndices disease_indices(const HealthDensity& f, const HealthGrid& grid,
                               const RegionTable& regions) {
    if (regions.num_vertices() != f.num_vertices()) {
        throw ConfigError("region table does not cover the density's vertices");
    }
    DiseaseIndices out;
    out.per_vertex.resize(f.num_vertices());
    double total = 0.0;
    for (std::size_t m = 0; m < f.num_vertices(); ++m) {
        out.per_vertex[m] = malfunction_mean(f.at(m), grid);
        total += out.per_vertex[m];
    }
    out.global = f.num_vertices() ? total / static_cast<double>(f.num_vertices()) : 0.0;
    out.per_region.assign(regions.num_regions(), 0.0);
    for (std::size_t r = 0; r < regions.num_regions(); ++r) {
        const auto& members = regions.members[r];
        if (members.empty()) throw ConfigError("region '" + regions.names[r] + "' is empty");
        for (auto m : members) out.per_region[r] += out.per_vertex[m];
        out.per_region[r] /= static_cast<double>(members.size());
    }
    return out;
}

void TimeSeriesRecord::append(const SimState& state, const HealthGrid& grid,
                              const RegionTable& regions) {
    if (!times.empty() && !(state.t > times.back())) {
        throw ArgumentError("time stamps must be strictly increasing");
    }
    if (region_names.empty()) region_names = regions.names;
    times.push_back(state.t);
    abeta.push_back(global_burden(state.fields.abeta));
    tau.push_back(global_burden(state.fields.tau));
    abeta_region.push_back(regional_burden(state.fields.abeta, regions));
    tau_region.push_back(regional_burden(state.fields.tau, regions));
    auto indices = disease_indices(state.fields.health, grid, regions);
    disease.push_back(indices.global);
    disease_region.push_back(std::move(indices.per_region));
}

std::vector<double> TimeSeriesRecord::abeta_series(std::size_t i) const {
    std::vector<double> out;
    for (const auto& c : abeta) out.push_back(c[i]);
    return out;
}

std::vector<double> TimeSeriesRecord::tau_series(std::size_t i) const {
    std::vector<double> out;
    for (const auto& c : tau) out.push_back(c[i]);
    return out;
}

std::vector<double> TimeSeriesRecord::abeta_region_series(std::size_t r, std::size_t i) const {
    std::vector<double> out;
    for (const auto& row : abeta_region) out.push_back(row.at(r)[i]);
    return out;
}

std::vector<double> TimeSeriesRecord::tau_region_series(std::size_t r, std::size_t i) const {
    std::vector<double> out;
    for (const auto& row : tau_region) out.push_back(row.at(r)[i]);
    return out;
}

std::vector<double> TimeSeriesRecord::disease_region_series(std::size_t r) const {
    std::vector<double> out;
    for (const auto& row : disease_region) out.push_back(row.at(r));
    return out;
}

namespace {

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const char* const kQuantities[] = {"u1",   "u2",   "u3",   "u4",   "u5",  "tau1",
                                   "tau2", "tau3", "tau4", "tau5", "A"};
constexpr std::size_t kQuantitiesPerBlock = 11;

}  // namespace

std::vector<std::string> csv_header(const std::vector<std::string>& region_names) {
    std::vector<std::string> h{"time"};
    for (auto q : kQuantities) h.emplace_back(q);
    for (const auto& r : region_names) {
        for (auto q : kQuantities) h.push_back(r + "/" + q);
    }
    return h;
}

std::string to_csv(const TimeSeriesRecord& rec) {
    std::ostringstream os;
    const auto header = csv_header(rec.region_names);
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << quoted(header[c]);
    os << '\n';
    auto num = [](double v) { return text::format_double(v); };
    for (std::size_t s = 0; s < rec.size(); ++s) {
        os << num(rec.times[s]);
        for (double v : rec.abeta[s]) os << ',' << num(v);
        for (double v : rec.tau[s]) os << ',' << num(v);
        os << ',' << num(rec.disease[s]);
        for (std::size_t r = 0; r < rec.region_names.size(); ++r) {
            for (double v : rec.abeta_region[s][r]) os << ',' << num(v);
            for (double v : rec.tau_region[s][r]) os << ',' << num(v);
            os << ',' << num(rec.disease_region[s][r]);
        }
        os << '\n';
    }
    return os.str();
}

void write_csv(const TimeSeriesRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_csv(record);
    if (!out) throw Error("failed writing " + path.string());
}

TimeSeriesRecord read_csv_record(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    const auto header = text::split_csv_line(line);
    if (header.size() < 1 + kQuantitiesPerBlock ||
        (header.size() - 1) % kQuantitiesPerBlock != 0 || header[0] != "time") {
        throw ParseError(path.string() + ": unexpected observables header");
    }
    TimeSeriesRecord rec;
    const std::size_t regions = (header.size() - 1) / kQuantitiesPerBlock - 1;
    for (std::size_t r = 0; r < regions; ++r) {
        const auto& col = header[1 + (r + 1) * kQuantitiesPerBlock];
        rec.region_names.push_back(col.substr(0, col.rfind('/')));
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": wrong field count");
        }
        std::vector<double> v(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            auto x = text::parse_double(fields[c]);
            if (!x) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad number");
            v[c] = *x;
        }
        rec.times.push_back(v[0]);
        auto block = [&](std::size_t offset, Compartments& u, Compartments& tau, double& a) {
            for (std::size_t i = 0; i < kCompartments; ++i) {
                u[i] = v[offset + i];
                tau[i] = v[offset + kCompartments + i];
            }
            a = v[offset + 2 * kCompartments];
        };
        Compartments u{}, tau{};
        double a = 0.0;
        block(1, u, tau, a);
        rec.abeta.push_back(u);
        rec.tau.push_back(tau);
        rec.disease.push_back(a);
        std::vector<Compartments> ur(regions), tr(regions);
        std::vector<double> ar(regions);
        for (std::size_t r = 0; r < regions; ++r) block(1 + (r + 1) * kQuantitiesPerBlock, ur[r], tr[r], ar[r]);
        rec.abeta_region.push_back(std::move(ur));
        rec.tau_region.push_back(std::move(tr));
        rec.disease_region.push_back(std::move(ar));
    }
    return rec;
}

std::size_t argmax(const std::vector<double>& values) {
    if (values.empty()) throw ArgumentError("argmax of an empty series");
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

bool has_interior_peak(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || values.size() < 3) return false;
    const std::size_t k = argmax(values);
    if (k == 0 || k + 1 == values.size()) return false;
    if (!(times[k] > times.front() && times[k] < times.back())) return false;
    return values.back() <= kPeakDeclineRatio * values[k];
}

}  // namespace proteograph

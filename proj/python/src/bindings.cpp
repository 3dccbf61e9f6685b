#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "proteograph/connectome_io.hpp"
#include "proteograph/error.hpp"
#include "proteograph/neuron_health.hpp"
#include "proteograph/run.hpp"
#include "proteograph/scenarios.hpp"

namespace py = pybind11;
using namespace proteograph;

namespace {

using Graph = std::shared_ptr<BrainGraph>;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GraphLoadOptions options_from(const std::vector<std::string>& seed_labels, bool merge_hemispheres,
                              std::optional<double> cutoff_radius, std::optional<double> decay_scale) {
    GraphLoadOptions o;
    o.seed_labels = seed_labels;
    o.merge_hemispheres = merge_hemispheres;
    o.cutoff_radius = cutoff_radius;
    o.decay_scale = decay_scale;
    return o;
}

Array dense_weights(const SparseWeights& w) {
    const auto n = static_cast<py::ssize_t>(w.num_vertices());
    Array out({n, n});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t j = 0; j < n; ++j) view(i, j) = 0.0;
    for (py::ssize_t i = 0; i < n; ++i)
        for (const auto& e : w.neighbors(static_cast<std::size_t>(i))) view(i, static_cast<py::ssize_t>(e.target)) = e.weight;
    return out;
}

Array compartments_array(const std::vector<Compartments>& rows) {
    Array out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(kCompartments)});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (std::size_t i = 0; i < kCompartments; ++i) view(s, i) = rows[s][i];
    return out;
}

Array regional_array(const std::vector<std::vector<Compartments>>& rows, std::size_t regions) {
    Array out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(regions),
               static_cast<py::ssize_t>(kCompartments)});
    auto view = out.mutable_unchecked<3>();
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (std::size_t k = 0; k < regions; ++k)
            for (std::size_t i = 0; i < kCompartments; ++i) view(s, k, i) = rows[s][k][i];
    return out;
}

Array field_array(const ProteinField& f) {
    Array out({static_cast<py::ssize_t>(f.num_vertices()), static_cast<py::ssize_t>(kCompartments)});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

py::dict result_dict(const RunResult& r, const BrainGraph& graph) {
    const auto& rec = r.record;
    const std::size_t regions = rec.region_names.size();
    Array disease_region({static_cast<py::ssize_t>(rec.size()), static_cast<py::ssize_t>(regions)});
    auto dv = disease_region.mutable_unchecked<2>();
    for (std::size_t s = 0; s < rec.size(); ++s)
        for (std::size_t k = 0; k < regions; ++k) dv(s, k) = rec.disease_region[s][k];
    const auto& health = r.final_state.fields.health;
    Array f({static_cast<py::ssize_t>(health.num_vertices()), static_cast<py::ssize_t>(health.cells())});
    std::copy(health.data().begin(), health.data().end(), f.mutable_data());

    py::dict d;
    d["case"] = r.config.case_name;
    d["times"] = Array(static_cast<py::ssize_t>(rec.size()), rec.times.data());
    d["abeta"] = compartments_array(rec.abeta);
    d["tau"] = compartments_array(rec.tau);
    d["disease"] = Array(static_cast<py::ssize_t>(rec.size()), rec.disease.data());
    d["regions"] = rec.region_names;
    d["abeta_region"] = regional_array(rec.abeta_region, regions);
    d["tau_region"] = regional_array(rec.tau_region, regions);
    d["disease_region"] = disease_region;
    d["final_abeta"] = field_array(r.final_state.fields.abeta);
    d["final_tau"] = field_array(r.final_state.fields.tau);
    d["final_health"] = f;
    d["steps"] = r.final_state.steps;
    d["rejected_steps"] = r.final_state.rejected_steps;
    d["csv"] = to_csv(rec);
    d["metadata"] = run_metadata(r, graph);
    return d;
}

std::span<const double> span_of(const Array& a) {
    return {a.data(), static_cast<std::size_t>(a.size())};
}

}  // namespace

PYBIND11_MODULE(_proteograph, m) {
    m.doc() = "Coupled amyloid-beta / tau spreading and neuron health on brain graphs.";
    m.attr("__version__") = PROTEOGRAPH_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<IsolatedVertexError>(m, "IsolatedVertexError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<StepSizeError>(m, "StepSizeError", base.ptr());
    py::register_exception<StateCorruptionError>(m, "StateCorruptionError", base.ptr());

    py::class_<BrainGraph, Graph>(m, "Graph")
        .def_property_readonly("num_vertices", &BrainGraph::num_vertices)
        .def_readonly("labels", &BrainGraph::labels)
        .def_readonly("region_labels", &BrainGraph::region_label)
        .def_readonly("seed_set", &BrainGraph::seed_set)
        .def_readonly("source", &BrainGraph::source)
        .def_readonly("proximity_cutoff", &BrainGraph::proximity_cutoff)
        .def_readonly("proximity_decay", &BrainGraph::proximity_decay)
        .def_property_readonly("coordinates", [](const BrainGraph& g) {
            Array out({static_cast<py::ssize_t>(g.num_vertices()), py::ssize_t{3}});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < g.num_vertices(); ++i) {
                v(i, 0) = g.coordinates[i].x;
                v(i, 1) = g.coordinates[i].y;
                v(i, 2) = g.coordinates[i].z;
            }
            return out;
        })
        .def("connectivity_matrix", [](const BrainGraph& g) { return dense_weights(g.connectivity); })
        .def("proximity_matrix", [](const BrainGraph& g) { return dense_weights(g.proximity); })
        .def("regions", [](const BrainGraph& g) { return RegionTable::from_graph(g).names; })
        .def("write_graphml", [](const BrainGraph& g, const std::filesystem::path& p) { write_graphml(g, p); })
        .def("write_csv", [](const BrainGraph& g, const std::filesystem::path& nodes,
                             const std::filesystem::path& edges) { write_edge_csv(g, nodes, edges); })
        .def("__repr__", [](const BrainGraph& g) {
            return "<Graph " + g.source + ", " + std::to_string(g.num_vertices()) + " vertices>";
        });

    m.def("generate_synthetic",
          [](std::size_t n, std::size_t regions, std::uint64_t seed) {
              return Graph(std::make_shared<BrainGraph>(generate_synthetic(n, regions, seed)));
          },
          py::arg("num_vertices") = 100, py::arg("num_regions") = 10, py::arg("seed") = 7);
    m.def("load_graphml",
          [](const std::filesystem::path& path, std::vector<std::string> seed_labels, bool merge,
             std::optional<double> cutoff, std::optional<double> decay) {
              return Graph(std::make_shared<BrainGraph>(
                  load_graphml(path, options_from(seed_labels, merge, cutoff, decay))));
          },
          py::arg("path"), py::arg("seed_labels") = std::vector<std::string>{"entorhinal"},
          py::arg("merge_hemispheres") = false, py::arg("cutoff_radius") = py::none(),
          py::arg("decay_scale") = py::none());
    m.def("load_edge_csv",
          [](const std::filesystem::path& nodes, const std::filesystem::path& edges,
             std::vector<std::string> seed_labels, bool merge, std::optional<double> cutoff,
             std::optional<double> decay) {
              return Graph(std::make_shared<BrainGraph>(
                  load_edge_csv(nodes, edges, options_from(seed_labels, merge, cutoff, decay))));
          },
          py::arg("nodes_path"), py::arg("edges_path"),
          py::arg("seed_labels") = std::vector<std::string>{"entorhinal"},
          py::arg("merge_hemispheres") = false, py::arg("cutoff_radius") = py::none(),
          py::arg("decay_scale") = py::none());

    m.def("case_names", &case_names);
    m.def("preset_config", [](const std::string& name) { return serialize_config(preset(name)); },
          py::arg("case_name"), "Configuration text of a built-in case.");

    m.def("simulate",
          [](const std::string& case_name, Graph graph, std::optional<std::string> config_text,
             std::optional<double> t_end, std::optional<double> dt, std::optional<std::size_t> grid_cells,
             bool fixed_step, double snapshot_interval, std::size_t workers) {
              ScenarioConfig cfg = config_text ? parse_config(*config_text) : preset(case_name);
              if (t_end) cfg.integrator.t_end = *t_end;
              if (dt) cfg.integrator.dt_init = *dt;
              if (grid_cells) cfg.grid_cells = *grid_cells;
              if (fixed_step) cfg.integrator.mode = StepMode::fixed;
              cfg.integrator.snapshot_interval = snapshot_interval;
              if (!graph) graph = std::const_pointer_cast<BrainGraph>(load_graph(cfg.graph));
              RunResult r;
              {
                  py::gil_scoped_release release;
                  r = run_scenario(cfg, graph, workers);
              }
              return result_dict(r, *graph);
          },
          py::arg("case_name") = "C", py::arg("graph") = nullptr, py::arg("config") = py::none(),
          py::arg("t_end") = py::none(), py::arg("dt") = py::none(), py::arg("grid_cells") = py::none(),
          py::arg("fixed_step") = false, py::arg("snapshot_interval") = 0.25, py::arg("workers") = 1);

    m.def("apply_laplacian",
          [](const Graph& graph, const Array& values, const std::string& family) {
              if (family != "proximity" && family != "connectivity")
                  throw ArgumentError("family must be 'proximity' or 'connectivity'");
              const LaplacianOperator lap(*graph, family == "proximity" ? WeightFamily::proximity
                                                                         : WeightFamily::connectivity);
              if (static_cast<std::size_t>(values.size()) != lap.num_vertices())
                  throw ArgumentError("expected one value per vertex");
              Array out(values.size());
              lap.apply(span_of(values), {out.mutable_data(), static_cast<std::size_t>(out.size())});
              return out;
          },
          py::arg("graph"), py::arg("values"), py::arg("family") = "proximity");

    m.def("coalescence_terms",
          [](const std::array<double, kCompartments>& conc, double rate) {
              const auto t = coalescence_terms(conc, rate);
              return py::make_tuple(t.gain, t.loss);
          },
          py::arg("conc"), py::arg("rate"), "Returns (gain, loss) for the five compartments.");
    m.def("seed_profile", &seed_profile, py::arg("t"), py::arg("lam") = 10.0);

    m.def("amyloid_source",
          [](const Array& f, double c_source, double mu0) {
              DeteriorationParams p;
              p.c_source = c_source;
              p.mu0 = mu0;
              return amyloid_source(span_of(f), HealthGrid(static_cast<std::size_t>(f.size())), p);
          },
          py::arg("f"), py::arg("c_source") = 10.0, py::arg("mu0") = 0.01);
    m.def("malfunction_mean",
          [](const Array& f) {
              return malfunction_mean(span_of(f), HealthGrid(static_cast<std::size_t>(f.size())));
          },
          py::arg("f"));
    m.def("initial_density",
          [](std::size_t cells, double mean, double sigma) {
              const auto v = initial_density(HealthGrid(cells), mean, sigma);
              return Array(static_cast<py::ssize_t>(v.size()), v.data());
          },
          py::arg("cells") = 64, py::arg("mean") = 0.01, py::arg("sigma") = 0.005);
}

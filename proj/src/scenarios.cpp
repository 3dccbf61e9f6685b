#include "proteograph/scenarios.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "proteograph/error.hpp"
#include "proteograph/text_util.hpp"

namespace proteograph {

namespace fs = std::filesystem;

const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names{"A", "B", "C", "D", "E"};
    return names;
}

ScenarioConfig preset(std::string_view case_name) {
    struct Row {
        const char* name;
        double alpha, c_tau, c_seed;
    };
    static constexpr Row rows[] = {
        {"A", 10.0, 0.0, 0.0},
        {"B", 10.0, 0.0, 0.05},
        {"C", 10.0, 10.0, 0.05},
        {"D", 10.0, 10.0, 0.0},
        {"E", 0.0, 10.0, 0.05},
    };
    for (const auto& row : rows) {
        if (case_name == row.name) {
            ScenarioConfig cfg;
            cfg.case_name = row.name;
            cfg.aggregation.alpha = row.alpha;
            cfg.aggregation.c_tau = row.c_tau;
            cfg.aggregation.c_seed = row.c_seed;
            return cfg;
        }
    }
    throw ConfigError("unknown case '" + std::string(case_name) + "' (valid cases: A, B, C, D, E)");
}

void ScenarioConfig::validate() const {
    aggregation.validate();
    deterioration.validate();
    integrator.validate();
    if (!(initial_monomer >= 0.0) || !std::isfinite(initial_monomer)) {
        throw ConfigError("initial monomer level must be nonnegative");
    }
    if (grid_cells < 2) throw ConfigError("grid_cells must be at least 2");
    if (!(health_sigma > 0.0)) throw ConfigError("health_sigma must be positive");
    if (!(health_mean >= 0.0 && health_mean <= 1.0)) {
        throw ConfigError("health_mean must lie in [0, 1]");
    }
}

std::vector<std::string> ScenarioConfig::warnings() const {
    std::vector<std::string> w;
    if (initial_monomer >= kInitialMonomerWarning) {
        w.push_back("initial monomer level " + text::format_double(initial_monomer) +
                    " is not small compared to 1");
    }
    return w;
}

SimState initial_state(const ScenarioConfig& config, const BrainGraph& graph) {
    config.validate();
    const std::size_t n = graph.num_vertices();
    const HealthGrid grid(config.grid_cells);
    SimState state;
    state.t = 0.0;
    state.fields = FieldSet(n, grid.cells());
    for (std::size_t m = 0; m < n; ++m) state.fields.abeta(m, kMonomer) = config.initial_monomer;
    const auto f0 = initial_density(grid, config.health_mean, config.health_sigma);
    for (std::size_t m = 0; m < n; ++m) {
        auto row = state.fields.health.at(m);
        std::copy(f0.begin(), f0.end(), row.begin());
    }
    return state;
}

// --- config text ---------------------------------------------------------------

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string unquote(std::string_view v, const std::string& key) {
    v = text::trim(v);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
        throw ConfigError("value of '" + key + "' must be a quoted string");
    }
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] == '\\' && i + 2 < v.size()) ++i;
        out += v[i];
    }
    return out;
}

std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

std::vector<std::string> split_array(std::string_view v, const std::string& key) {
    v = text::trim(v);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
        throw ConfigError("value of '" + key + "' must be an array [..]");
    }
    v = v.substr(1, v.size() - 2);
    std::vector<std::string> items;
    if (text::trim(v).empty()) return items;
    for (auto& item : text::split_csv_line(v)) items.push_back(item);
    return items;
}

double as_number(std::string_view v, const std::string& key) {
    auto x = text::parse_double(v);
    if (!x || !std::isfinite(*x)) throw ConfigError("value of '" + key + "' is not a number");
    return *x;
}

std::size_t as_count(std::string_view v, const std::string& key) {
    auto x = text::parse_int(v);
    if (!x || *x < 0) throw ConfigError("value of '" + key + "' is not a nonnegative integer");
    return static_cast<std::size_t>(*x);
}

bool as_bool(std::string_view v, const std::string& key) {
    v = text::trim(v);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("value of '" + key + "' must be true or false");
}

template <std::size_t N>
std::array<double, N> as_numbers(std::string_view v, const std::string& key) {
    const auto items = split_array(v, key);
    if (items.size() != N) {
        throw ConfigError("'" + key + "' needs exactly " + std::to_string(N) + " entries");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = as_number(items[i], key);
    return out;
}

const char* kind_name(GraphSourceKind k) {
    switch (k) {
        case GraphSourceKind::graphml: return "graphml";
        case GraphSourceKind::csv: return "csv";
        default: return "synthetic";
    }
}

void apply_key(ScenarioConfig& c, const std::string& key, std::string_view v) {
    auto& a = c.aggregation;
    auto& d = c.deterioration;
    auto& in = c.integrator;
    auto& g = c.graph;
    if (key == "scenario.case") c.case_name = unquote(v, key);
    else if (key == "aggregation.alpha") a.alpha = as_number(v, key);
    else if (key == "aggregation.gamma") a.gamma = as_number(v, key);
    else if (key == "aggregation.diffusivity") a.diffusivity = as_numbers<4>(v, key);
    else if (key == "aggregation.clearance") a.clearance = as_numbers<4>(v, key);
    else if (key == "aggregation.epsilon") a.epsilon = as_number(v, key);
    else if (key == "aggregation.c_seed") a.c_seed = as_number(v, key);
    else if (key == "aggregation.lambda_seed") a.lambda_seed = as_number(v, key);
    else if (key == "aggregation.c_tau") a.c_tau = as_number(v, key);
    else if (key == "aggregation.u_bar") a.u_bar = as_number(v, key);
    else if (key == "deterioration.c_peer") d.c_peer = as_number(v, key);
    else if (key == "deterioration.c_abeta") d.c_abeta = as_number(v, key);
    else if (key == "deterioration.c_tau") d.c_tau = as_number(v, key);
    else if (key == "deterioration.u_bar_abeta") d.u_bar_abeta = as_number(v, key);
    else if (key == "deterioration.u_bar_tau") d.u_bar_tau = as_number(v, key);
    else if (key == "deterioration.c_source") d.c_source = as_number(v, key);
    else if (key == "deterioration.mu0") d.mu0 = as_number(v, key);
    else if (key == "integrator.t_end") in.t_end = as_number(v, key);
    else if (key == "integrator.dt_init") in.dt_init = as_number(v, key);
    else if (key == "integrator.dt_min") in.dt_min = as_number(v, key);
    else if (key == "integrator.dt_max") in.dt_max = as_number(v, key);
    else if (key == "integrator.cfl_max") in.cfl_max = as_number(v, key);
    else if (key == "integrator.snapshot_interval") in.snapshot_interval = as_number(v, key);
    else if (key == "integrator.mode") {
        const auto mode = unquote(v, key);
        if (mode == "fixed") in.mode = StepMode::fixed;
        else if (mode == "halving") in.mode = StepMode::halving;
        else throw ConfigError("integrator.mode must be \"fixed\" or \"halving\"");
    }
    else if (key == "initial.monomer") c.initial_monomer = as_number(v, key);
    else if (key == "initial.health_mean") c.health_mean = as_number(v, key);
    else if (key == "initial.health_sigma") c.health_sigma = as_number(v, key);
    else if (key == "health.grid_cells") c.grid_cells = as_count(v, key);
    else if (key == "graph.kind") {
        const auto kind = unquote(v, key);
        if (kind == "synthetic") g.kind = GraphSourceKind::synthetic;
        else if (kind == "graphml") g.kind = GraphSourceKind::graphml;
        else if (kind == "csv") g.kind = GraphSourceKind::csv;
        else throw ConfigError("graph.kind must be synthetic, graphml or csv");
    }
    else if (key == "graph.path") g.path = unquote(v, key);
    else if (key == "graph.edges_path") g.edges_path = unquote(v, key);
    else if (key == "graph.vertices") g.synthetic_vertices = as_count(v, key);
    else if (key == "graph.regions") g.synthetic_regions = as_count(v, key);
    else if (key == "graph.seed") g.seed = as_count(v, key);
    else if (key == "graph.cutoff_radius") g.cutoff_radius = as_number(v, key);
    else if (key == "graph.decay_scale") g.decay_scale = as_number(v, key);
    else if (key == "graph.seed_labels") {
        g.seed_labels.clear();
        for (const auto& item : split_array(v, key)) g.seed_labels.push_back(item);
    }
    else if (key == "graph.merge_hemispheres") g.merge_hemispheres = as_bool(v, key);
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    std::string case_name = "C";
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = text::trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            }
            section = std::string(text::trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = (section.empty() ? "" : section + ".") +
                                std::string(text::trim(line.substr(0, eq)));
        std::string value(text::trim(line.substr(eq + 1)));
        if (key == "scenario.case") case_name = unquote(value, key);
        entries.emplace_back(key, std::move(value));
    }
    ScenarioConfig cfg = preset(case_name);
    for (const auto& [key, value] : entries) apply_key(cfg, key, value);
    return cfg;
}

std::string serialize_config(const ScenarioConfig& c) {
    auto num = [](double v) { return text::format_double(v); };
    auto arr = [&](const std::array<double, 4>& a) {
        std::string s = "[";
        for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + num(a[i]);
        return s + "]";
    };
    const auto& a = c.aggregation;
    const auto& d = c.deterioration;
    const auto& in = c.integrator;
    const auto& g = c.graph;
    std::ostringstream os;
    os << "# proteograph scenario\n"
       << "[scenario]\n"
       << "case = " << quote(c.case_name) << "\n\n"
       << "[aggregation]\n"
       << "alpha = " << num(a.alpha) << "  # alpha, Abeta coalescence\n"
       << "gamma = " << num(a.gamma) << "  # gamma, tau coalescence\n"
       << "diffusivity = " << arr(a.diffusivity) << "  # d_i\n"
       << "clearance = " << arr(a.clearance) << "  # sigma_i\n"
       << "epsilon = " << num(a.epsilon) << "  # epsilon\n"
       << "c_seed = " << num(a.c_seed) << "  # c, tau seeding amplitude\n"
       << "lambda_seed = " << num(a.lambda_seed) << "  # lambda\n"
       << "c_tau = " << num(a.c_tau) << "  # C_tau\n"
       << "u_bar = " << num(a.u_bar) << "  # Ubar\n\n"
       << "[deterioration]\n"
       << "c_peer = " << num(d.c_peer) << "  # C_G\n"
       << "c_abeta = " << num(d.c_abeta) << "  # C_S\n"
       << "c_tau = " << num(d.c_tau) << "  # C_T\n"
       << "u_bar_abeta = " << num(d.u_bar_abeta) << "  # Ubar_Abeta\n"
       << "u_bar_tau = " << num(d.u_bar_tau) << "  # Ubar_tau\n"
       << "c_source = " << num(d.c_source) << "  # C_F\n"
       << "mu0 = " << num(d.mu0) << "  # mu_0\n\n"
       << "[integrator]\n"
       << "t_end = " << num(in.t_end) << "\n"
       << "dt_init = " << num(in.dt_init) << "\n"
       << "dt_min = " << num(in.dt_min) << "\n"
       << "dt_max = " << num(in.dt_max) << "\n"
       << "cfl_max = " << num(in.cfl_max) << "\n"
       << "snapshot_interval = " << num(in.snapshot_interval) << "\n"
       << "mode = " << quote(in.mode == StepMode::fixed ? "fixed" : "halving") << "\n\n"
       << "[initial]\n"
       << "monomer = " << num(c.initial_monomer) << "  # u_{0,1}\n"
       << "health_mean = " << num(c.health_mean) << "  # a_0\n"
       << "health_sigma = " << num(c.health_sigma) << "\n\n"
       << "[health]\n"
       << "grid_cells = " << c.grid_cells << "  # M\n\n"
       << "[graph]\n"
       << "kind = " << quote(kind_name(g.kind)) << "\n"
       << "path = " << quote(g.path) << "\n"
       << "edges_path = " << quote(g.edges_path) << "\n"
       << "vertices = " << g.synthetic_vertices << "\n"
       << "regions = " << g.synthetic_regions << "\n"
       << "seed = " << g.seed << "\n";
    if (g.cutoff_radius) os << "cutoff_radius = " << num(*g.cutoff_radius) << "\n";
    if (g.decay_scale) os << "decay_scale = " << num(*g.decay_scale) << "\n";
    os << "seed_labels = [";
    for (std::size_t i = 0; i < g.seed_labels.size(); ++i) {
        os << (i ? ", " : "") << '"' << g.seed_labels[i] << '"';
    }
    os << "]\n"
       << "merge_hemispheres = " << (g.merge_hemispheres ? "true" : "false") << "\n";
    return os.str();
}

ScenarioConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& err) {
        throw ConfigError(path.string() + ": " + err.what());
    }
}

void save_config_file(const ScenarioConfig& config, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << serialize_config(config);
}

fs::path resolve_data_path(const fs::path& path) {
    if (path.empty() || path.is_absolute() || fs::exists(path)) return path;
    if (const char* dir = std::getenv("PROTEOGRAPH_DATA"); dir && *dir) {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate;
    }
    return path;
}

GraphLoadOptions load_options(const GraphSource& source) {
    GraphLoadOptions opts;
    opts.seed_labels = source.seed_labels;
    opts.merge_hemispheres = source.merge_hemispheres;
    opts.cutoff_radius = source.cutoff_radius;
    opts.decay_scale = source.decay_scale;
    return opts;
}

std::shared_ptr<const BrainGraph> load_graph(const GraphSource& source) {
    const auto opts = load_options(source);
    switch (source.kind) {
        case GraphSourceKind::graphml:
            return std::make_shared<const BrainGraph>(load_graphml(resolve_data_path(source.path), opts));
        case GraphSourceKind::csv: {
            fs::path nodes = resolve_data_path(source.path);
            fs::path edges = source.edges_path.empty() ? fs::path{}
                                                       : resolve_data_path(source.edges_path);
            if (fs::is_directory(nodes)) {
                if (edges.empty()) edges = nodes / "edges.csv";
                nodes = nodes / "nodes.csv";
            }
            if (edges.empty()) edges = nodes.parent_path() / "edges.csv";
            return std::make_shared<const BrainGraph>(load_edge_csv(nodes, edges, opts));
        }
        default:
            return std::make_shared<const BrainGraph>(generate_synthetic(
                source.synthetic_vertices, source.synthetic_regions, source.seed, opts));
    }
}

}  // namespace proteograph

#pragma once

// Dense, loop-by-loop evaluation of the coupled right-hand side. Shares no
// code with the library beyond the parameter structs.

#include <array>
#include <cmath>
#include <vector>

#include "proteograph/engine.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;
using Poly = std::array<double, 5>;

struct DenseGraph {
    Matrix connectivity;
    Matrix proximity;
    std::vector<bool> seeded;
};

struct State {
    std::vector<Poly> u;
    std::vector<Poly> tau;
    std::vector<std::vector<double>> f;
};

inline DenseGraph dense(const proteograph::BrainGraph& g) {
    const std::size_t n = g.num_vertices();
    DenseGraph d{Matrix(n, std::vector<double>(n, 0.0)), Matrix(n, std::vector<double>(n, 0.0)),
                 std::vector<bool>(n, false)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            d.connectivity[i][j] = g.connectivity.weight(i, j);
            d.proximity[i][j] = g.proximity.weight(i, j);
        }
    }
    for (auto s : g.seed_set) d.seeded[s] = true;
    return d;
}

inline State from_fields(const proteograph::FieldSet& fs) {
    const std::size_t n = fs.abeta.num_vertices();
    State s;
    s.u.resize(n);
    s.tau.resize(n);
    s.f.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < 5; ++i) {
            s.u[m][i] = fs.abeta(m, i);
            s.tau[m][i] = fs.tau(m, i);
        }
        const auto row = fs.health.at(m);
        s.f[m].assign(row.begin(), row.end());
    }
    return s;
}

inline double laplacian(const Matrix& w, const std::vector<double>& g, std::size_t m) {
    double deg = 0.0, acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        deg += w[m][j];
        acc += w[m][j] * (g[m] - g[j]);
    }
    return acc / deg;
}

inline std::vector<double> column(const std::vector<Poly>& p, std::size_t i) {
    std::vector<double> out;
    for (const auto& x : p) out.push_back(x[i]);
    return out;
}

// Gain and loss of compartment i (0-based) from the brute-force sums.
inline double smoluchowski(const Poly& c, double rate, std::size_t i) {
    const std::size_t top = 4;
    double gain = 0.0;
    if (i == top) {
        for (std::size_t j = 1; j <= 4; ++j)
            for (std::size_t k = 1; k <= 4; ++k)
                if (j + k >= 5) gain += c[j - 1] * c[k - 1];
        return 0.5 * rate * gain;
    }
    const std::size_t size = i + 1;
    for (std::size_t j = 1; j + 1 <= size; ++j) gain += c[j - 1] * c[size - j - 1];
    double total = 0.0;
    for (std::size_t j = 0; j < 5; ++j) total += c[j];
    return 0.5 * rate * gain - rate * c[i] * total;
}

inline State rhs(const DenseGraph& g, const proteograph::ModelParams& p, std::size_t cells, double t,
                 const State& s) {
    const auto& a = p.aggregation;
    const auto& d = p.deterioration;
    const std::size_t n = s.u.size();
    const double da = 1.0 / static_cast<double>(cells);
    State out = s;
    for (std::size_t m = 0; m < n; ++m) {
        const auto& f = s.f[m];
        double source = 0.0;
        for (std::size_t k = 0; k < cells; ++k) {
            const double x = (k + 0.5) * da;
            source += (d.mu0 + x) * (1.0 - x) * f[k] * da;
        }
        source *= d.c_source;

        for (std::size_t i = 0; i < 5; ++i) {
            double du = smoluchowski(s.u[m], a.alpha, i);
            double dtau = smoluchowski(s.tau[m], a.gamma, i);
            if (i < 4) {
                du -= a.diffusivity[i] * laplacian(g.proximity, column(s.u, i), m);
                du -= a.clearance[i] * s.u[m][i];
                dtau -= a.diffusivity[i] * laplacian(g.connectivity, column(s.tau, i), m);
            }
            if (i == 0) {
                du += source;
                const double olig = s.u[m][1] + s.u[m][2] + s.u[m][3] - a.u_bar;
                dtau += a.c_tau * (olig > 0.0 ? olig : 0.0);
                if (g.seeded[m]) {
                    dtau += a.c_seed * (t / a.lambda_seed) * std::exp(-t / a.lambda_seed);
                }
            }
            out.u[m][i] = du / a.epsilon;
            out.tau[m][i] = dtau;
        }

        const double olig = s.u[m][1] + s.u[m][2] + s.u[m][3] - d.u_bar_abeta;
        double tau_total = 0.0;
        for (double x : s.tau[m]) tau_total += x;
        tau_total -= d.u_bar_tau;
        std::vector<double> v(cells + 1, 0.0);
        for (std::size_t k = 1; k < cells; ++k) {
            const double face = k * da;
            double peer = 0.0;
            for (std::size_t c = 0; c < cells; ++c) {
                const double b = (c + 0.5) * da;
                if (b > face) peer += (b - face) * f[c] * da;
            }
            v[k] = d.c_peer * peer + (1.0 - face) * (d.c_abeta * (olig > 0.0 ? olig : 0.0) +
                                                     d.c_tau * (tau_total > 0.0 ? tau_total : 0.0));
        }
        for (std::size_t c = 0; c < cells; ++c) {
            const double in = c == 0 ? 0.0 : v[c] * f[c - 1];
            const double outflow = c + 1 == cells ? 0.0 : v[c + 1] * f[c];
            out.f[m][c] = (in - outflow) / da;
        }
    }
    return out;
}

}  // namespace oracle

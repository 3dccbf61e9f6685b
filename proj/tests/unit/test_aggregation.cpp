#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracle/naive_model.hpp"
#include "proteograph/aggregation.hpp"
#include "proteograph/error.hpp"
#include "support.hpp"

using namespace proteograph;

namespace {

CoalescenceTerms terms(Compartments c, double rate) {
    return coalescence_terms(std::span<const double, kCompartments>(c), rate);
}

// Three vertices on a weighted path in both families; vertex 0 is seeded.
BrainGraph path3() {
    return support::line_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}}, {{0, 1, 0.5}, {1, 2, 1.5}}, {0});
}

}  // namespace

TEST_CASE("seed profile") {
    CHECK(seed_profile(0.0, 10.0) == 0.0);
    CHECK(seed_profile(10.0, 10.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(seed_profile(1000.0, 10.0) < 1e-40);
    CHECK_THROWS_AS(seed_profile(-1.0, 10.0), ArgumentError);
    double best_t = 0.0, best = -1.0;
    for (int k = 0; k <= 4000; ++k) {
        const double t = 0.01 * k;
        if (seed_profile(t, 10.0) > best) best = seed_profile(t, 10.0), best_t = t;
    }
    CHECK(best_t == doctest::Approx(10.0));
}

TEST_CASE("coalescence examples") {
    SUBCASE("zero") {
        const auto r = terms({0, 0, 0, 0, 0}, 3.0);
        CHECK(r.gain == Compartments{});
        CHECK(r.loss == Compartments{});
    }
    SUBCASE("monomers only") {
        const auto r = terms({1, 0, 0, 0, 0}, 2.0);
        CHECK(r.loss == Compartments{2, 0, 0, 0, 0});
        CHECK(r.gain == Compartments{0, 1, 0, 0, 0});
    }
    SUBCASE("four unit compartments") {
        const auto r = terms({1, 1, 1, 1, 0}, 2.0);
        CHECK(r.loss == Compartments{8, 8, 8, 8, 0});
        CHECK(r.gain == Compartments{0, 1, 2, 3, 10});
    }
}

TEST_CASE("coalescence matches the ordered double sum") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Compartments c;
        for (auto& x : c) x = u(rng);
        const double rate = u(rng) * 5.0;
        const auto r = terms(c, rate);
        for (std::size_t i = 0; i < kCompartments; ++i) {
            const double net = oracle::smoluchowski(c, rate, i);
            CHECK(r.gain[i] - r.loss[i] == doctest::Approx(net).epsilon(1e-13));
            CHECK(r.gain[i] >= 0.0);
            CHECK(r.loss[i] >= 0.0);
        }
        CHECK(r.gain[0] == 0.0);
        CHECK(r.loss[4] == 0.0);
    }
}

TEST_CASE("coalescence keeps the polymer length of the small compartments") {
    // Every merge removes two clusters of lengths j and k. A short polymer
    // either lands in compartment j + k or, when j + k >= 5, in the top one,
    // so the length lost from 1..4 equals the length gained in 1..4 plus the
    // length carried into the top compartment.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Compartments c{u(rng), u(rng), u(rng), u(rng), 0.0};
        const auto r = terms(c, 1.0);
        double small = 0.0;
        for (std::size_t i = 0; i < 4; ++i) small += static_cast<double>(i + 1) * (r.gain[i] - r.loss[i]);
        double carried = 0.0;
        for (std::size_t j = 1; j <= 4; ++j)
            for (std::size_t k = 1; k <= 4; ++k)
                if (j + k >= 5) carried += 0.5 * static_cast<double>(j + k) * c[j - 1] * c[k - 1];
        CHECK(small + carried == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("Abeta right-hand side") {
    const auto g = path3();
    const LaplacianOperator prox(g, WeightFamily::proximity);
    AggregationParams p;

    SUBCASE("zero state without source is at rest") {
        const ProteinField u(3);
        const auto du = abeta_rhs(u, std::vector<double>(3, 0.0), p, prox);
        for (double x : du.data()) CHECK(x == 0.0);
    }
    SUBCASE("only the source survives on a zero state") {
        const ProteinField u(3);
        const auto du = abeta_rhs(u, std::vector<double>(3, 0.7), p, prox);
        for (std::size_t m = 0; m < 3; ++m) {
            CHECK(du(m, 0) == doctest::Approx(0.7 / p.epsilon));
            for (std::size_t i = 1; i < kCompartments; ++i) CHECK(du(m, i) == 0.0);
        }
    }
    SUBCASE("uniform field reduces to the scalar kinetics") {
        ProteinField u(3);
        const Compartments c{0.3, 0.1, 0.05, 0.02, 0.4};
        for (std::size_t m = 0; m < 3; ++m)
            for (std::size_t i = 0; i < kCompartments; ++i) u(m, i) = c[i];
        const double phi = 0.25;
        const auto du = abeta_rhs(u, std::vector<double>(3, phi), p, prox);
        for (std::size_t i = 0; i < kCompartments; ++i) {
            double expected = oracle::smoluchowski(c, p.alpha, i);
            if (i < 4) expected -= p.clearance[i] * c[i];
            if (i == 0) expected += phi;
            expected /= p.epsilon;
            for (std::size_t m = 0; m < 3; ++m) CHECK(du(m, i) == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    SUBCASE("non-finite input names vertex and compartment") {
        ProteinField u(3);
        u(1, 2) = std::numeric_limits<double>::quiet_NaN();
        try {
            abeta_rhs(u, std::vector<double>(3, 0.0), p, prox);
            FAIL("expected corruption error");
        } catch (const StateCorruptionError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("vertex 1") != std::string::npos);
            CHECK(msg.find("compartment 3") != std::string::npos);
        }
    }
}

TEST_CASE("tau right-hand side") {
    const auto g = path3();
    const LaplacianOperator conn(g, WeightFamily::connectivity);
    const std::vector<std::uint8_t> mask{1, 0, 0};
    AggregationParams p;

    SUBCASE("no sources, zero state") {
        p.c_seed = 0.0;
        const auto d = tau_rhs(ProteinField(3), ProteinField(3), 3.0, p, conn, mask);
        for (double x : d.data()) CHECK(x == 0.0);
    }
    SUBCASE("oligomer coupling at one vertex") {
        p.c_seed = 0.0;
        p.c_tau = 10.0;
        p.u_bar = 0.001;
        ProteinField u(3);
        u(2, 1) = 0.05;
        u(2, 2) = 0.03;
        u(2, 3) = 0.021;
        const auto d = tau_rhs(ProteinField(3), u, 0.0, p, conn, mask);
        CHECK(d(2, 0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(d(0, 0) == 0.0);
        CHECK(d(1, 0) == 0.0);
    }
    SUBCASE("below threshold coupling is off") {
        ProteinField u(3);
        u(1, 1) = 0.0009;
        p.c_seed = 0.0;
        const auto d = tau_rhs(ProteinField(3), u, 0.0, p, conn, mask);
        CHECK(d(1, 0) == 0.0);
    }
    SUBCASE("seeding at t = lambda") {
        p.c_tau = 10.0;
        p.c_seed = 0.05;
        const auto d = tau_rhs(ProteinField(3), ProteinField(3), 10.0, p, conn, mask);
        CHECK(d(0, 0) == doctest::Approx(0.05 * std::exp(-1.0)).epsilon(1e-15));
        CHECK(d(0, 0) == doctest::Approx(0.018394).epsilon(1e-5));
        CHECK(d(1, 0) == 0.0);
        CHECK(d(2, 0) == 0.0);
    }
    SUBCASE("diffusion uses the connectivity graph") {
        p.c_seed = 0.0;
        ProteinField tau(3);
        tau(1, 3) = 1.0;
        const auto d = tau_rhs(tau, ProteinField(3), 0.0, p, conn, mask);
        // -d_4 (Lap tau_4): vertex 1 loses at rate d_4, neighbours gain d_4 weighted
        CHECK(d(0, 3) == doctest::Approx(p.diffusivity[3] * 1.0));
        CHECK(d(2, 3) == doctest::Approx(p.diffusivity[3] * 1.0));
        CHECK(d(1, 3) == doctest::Approx(-p.diffusivity[3] - p.gamma * 1.0));
    }
}

TEST_CASE("parameter validation") {
    AggregationParams p;
    CHECK_NOTHROW(p.validate());
    p.epsilon = 0.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.alpha = -1.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.lambda_seed = 0.0;
    CHECK_THROWS(p.validate());
}

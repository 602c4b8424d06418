#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sktk/errors.hpp"
#include "sktk/master.hpp"
#include "sktk/meanfield.hpp"
#include "sktk/particles.hpp"
#include "sktk/rng.hpp"

using namespace sktk;

namespace {

Matrix random_rows(int n, int M, CounterRng& rng) {
    Matrix u(n, std::vector<double>(M));
    for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (int k = 0; k < M; ++k) {
            u[i][k] = 0.05 + rng.next_double();
            total += u[i][k];
        }
        for (int k = 0; k < M; ++k) {
            u[i][k] /= total;
        }
    }
    return u;
}

MicroParams reference_micro() {
    return MicroParams({0.5, 0.1}, {{2.0, 1.0}, {1.0, 2.0}}, {1.0 / 3.0, 2.0 / 3.0});
}

} // namespace

TEST_CASE("mf_rhs vanishes at the uniform state and conserves probability") {
    Grid g(8);
    const MicroParams micro = reference_micro();
    Matrix uniform(2, std::vector<double>(8, 1.0 / 8.0));
    const Matrix r = mf_rhs(MeanFieldState(g, uniform), micro);
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 8; ++k) {
            CHECK(r[i][k] == doctest::Approx(0.0));
        }
    }

    CounterRng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const int M = 4 + static_cast<int>(rng.next_below(12));
        Grid grid(M);
        const Matrix u = random_rows(2, M, rng);
        const Matrix rr = mf_rhs(MeanFieldState(grid, u), micro);
        for (int i = 0; i < 2; ++i) {
            double sum = 0.0;
            for (int k = 0; k < M; ++k) {
                sum += rr[i][k];
            }
            CHECK(std::abs(sum) <= 1e-13);
        }
    }
}

TEST_CASE("mf_rhs single-species linear reduction") {
    Grid g(6);
    MicroParams micro({0.7}, {{0.0}}, {1.0});
    CounterRng rng(5);
    const Matrix u = random_rows(1, 6, rng);
    const Matrix r = mf_rhs(MeanFieldState(g, u), micro);
    for (int k = 0; k < 6; ++k) {
        const double expected =
            0.7 * (u[0][(k + 1) % 6] + u[0][(k + 5) % 6] - 2.0 * u[0][k]);
        CHECK(r[0][k] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("mf_rhs equals h^2 times the rescaled master rhs") {
    const MicroParams micro = reference_micro();
    const ModelParams macro = micro_to_macro(micro);
    CounterRng rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        const int M = 4 + static_cast<int>(rng.next_below(20));
        Grid grid(M);
        const Matrix u = random_rows(2, M, rng);
        const Matrix mf = mf_rhs(MeanFieldState(grid, u), micro);
        const Matrix pde = rhs(DiscreteState(grid, u), macro);
        double scale = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < M; ++k) {
                scale = std::max(scale, std::abs(mf[i][k]));
            }
        }
        const double h2 = grid.h * grid.h;
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < M; ++k) {
                CHECK(std::abs(mf[i][k] - h2 * pde[i][k]) <= 1e-13 * std::max(scale, 1.0));
            }
        }
    }
}

TEST_CASE("mf_solve: uniform start is stationary; rows stay distributions") {
    Grid g(8);
    const MicroParams micro = reference_micro();
    Matrix uniform(2, std::vector<double>(8, 1.0 / 8.0));
    const std::vector<double> times = {0.0, 0.5, 1.0};
    const MeanFieldTrajectory traj = mf_solve(MeanFieldState(g, uniform), micro, 1.0, times);
    REQUIRE(traj.size() == 3);
    for (const auto& state : traj.states) {
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 8; ++k) {
                CHECK(state[i][k] == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
            }
        }
    }

    CounterRng rng(11);
    const Matrix u0 = random_rows(2, 8, rng);
    std::vector<double> dense;
    for (int s = 0; s <= 40; ++s) {
        dense.push_back(2.0 * s / 40.0);
    }
    const MeanFieldTrajectory t2 = mf_solve(MeanFieldState(g, u0), micro, 2.0, dense);
    for (const auto& state : t2.states) {
        for (int i = 0; i < 2; ++i) {
            double sum = 0.0;
            for (int k = 0; k < 8; ++k) {
                sum += state[i][k];
            }
            CHECK(std::abs(sum - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("weighted site entropy decays along the mean-field flow") {
    Grid g(8);
    const MicroParams micro = reference_micro();
    CounterRng rng(13);
    std::vector<double> dense;
    for (int s = 0; s <= 50; ++s) {
        dense.push_back(3.0 * s / 50.0);
    }
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix u0 = random_rows(2, 8, rng);
        const MeanFieldTrajectory traj = mf_solve(MeanFieldState(g, u0), micro, 3.0, dense);
        double prev = 0.0;
        for (std::size_t s = 0; s < traj.size(); ++s) {
            const double H =
                weighted_site_entropy(MeanFieldState(g, traj.states[s]), micro.pi);
            CHECK(H >= -1e-13);
            if (s > 0) {
                CHECK(H <= prev + 1e-10);
            }
            prev = H;
        }
    }
}

TEST_CASE("covariance defect of an exact product law vanishes") {
    Grid g(3);
    LabeledStateSpace space(g, {1, 1}, 2);
    Matrix laws = {{0.5, 0.25, 0.25}, {0.1, 0.7, 0.2}};
    const auto mu = product_distribution(space, laws);
    const Marginal two = project_marginal(space, mu, {1, 1});
    const Marginal mi = project_marginal(space, mu, {1, 0});
    const Marginal mj = project_marginal(space, mu, {0, 1});
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(std::abs(two.dist[a + 3 * b] - mi.dist[a] * mj.dist[b]) <= 1e-14);
        }
    }
}

TEST_CASE("chaos study: sampling error bound at t=0 and report shape") {
    Grid g(4);
    MicroParams micro({0.5, 0.5}, {{1.0, 0.6}, {0.6, 1.0}}, {0.5, 0.5});
    CounterRng rng(17);
    const Matrix u0 = random_rows(2, 4, rng);

    // single trial, large N: the t=0 distance is pure multinomial noise
    const long long N = 800;
    ChaosReport at0 = chaos_study(micro, g, u0, {N}, 1, 1e-9, 23, {0.0});
    const double particles = static_cast<double>(species_particles(0.5, N));
    const double bound = 3.0 * std::sqrt(static_cast<double>(g.M) / particles);
    CHECK(at0.distance_max.at(0) <= bound);

    // small study end to end
    ChaosReport report = chaos_study(micro, g, u0, {4, 8}, 8, 0.5, 29,
                                     {0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    REQUIRE(report.N_values.size() == 2);
    REQUIRE(report.marginal_distance.size() == 2);
    CHECK(report.marginal_distance[0].size() == 2);
    for (double d : report.distance_max) {
        CHECK(d >= 0.0);
        CHECK(d <= 2.0); // L1 distance between distributions is at most 2
    }
    // M=4 with 2+2 and 4+4 particles is enumerable: 4^4 and 4^8 states
    REQUIRE(report.oracle_N_values.size() == 2);
    CHECK(report.covariance_defect[0] >= 0.0);
    CHECK(report.covariance_defect[1] >= 0.0);

    CHECK_THROWS_AS(chaos_study(micro, g, u0, {8, 4}, 4, 0.5, 1, {0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(chaos_study(micro, g, u0, {1}, 4, 0.5, 1, {0.5}),
                    std::invalid_argument);
}

TEST_CASE("chaos study is deterministic given the seed") {
    Grid g(4);
    MicroParams micro({0.5, 0.5}, {{1.0, 0.6}, {0.6, 1.0}}, {0.5, 0.5});
    CounterRng rng(19);
    const Matrix u0 = random_rows(2, 4, rng);
    const std::vector<double> times = {0.0, 0.25, 0.5};
    ChaosReport a = chaos_study(micro, g, u0, {4, 8}, 6, 0.5, 31, times);
    ChaosReport b = chaos_study(micro, g, u0, {4, 8}, 6, 0.5, 31, times);
    CHECK(a.distance_max == b.distance_max);
    CHECK(a.covariance_defect == b.covariance_defect);
}

#include "oracles.hpp"

#include "dlrc/error.hpp"
#include "dlrc/mask.hpp"
#include "dlrc/reservoir.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace dlrc;

namespace {

ReservoirConfig small_config(int n, int k, double alpha, double beta)
{
    ReservoirConfig c;
    c.n_nodes = n;
    c.offset_k = k;
    c.alpha = alpha;
    c.beta = beta;
    c.washout = 0;
    return c;
}

Mask random_mask(int n, std::uint64_t seed)
{
    MaskSpec s;
    s.family = MaskFamily::random_uniform;
    s.n_nodes = n;
    s.seed = seed;
    return generate_mask(s);
}

}  // namespace

TEST_CASE("N=3, k=1 hand-unrolled states")
{
    const auto mask = make_step_mask({1.0, -1.0, 0.5});
    const std::vector<double> u{0.2, 0.4};
    const auto s = run_discrete(small_config(3, 1, 0.5, 1.0), mask, u, 0);
    REQUIRE(s.n_nodes() == 3);
    REQUIRE(s.input_len() == 2);
    // step 1: x(0) = x(-1) = 0
    CHECK(s(1, 0) == doctest::Approx(std::sin(0.2)).epsilon(1e-15));
    CHECK(s(2, 0) == doctest::Approx(std::sin(-0.2)).epsilon(1e-15));
    CHECK(s(3, 0) == doctest::Approx(std::sin(0.1)).epsilon(1e-15));
    // step 2: node 1 reads node 3 two steps back, the others read node i-1 one step back
    CHECK(s(1, 1) == doctest::Approx(std::sin(0.4)).epsilon(1e-15));
    CHECK(s(2, 1) == doctest::Approx(std::sin(0.5 * std::sin(0.2) - 0.4)).epsilon(1e-15));
    CHECK(s(3, 1) == doctest::Approx(std::sin(0.5 * std::sin(-0.2) + 0.2)).epsilon(1e-15));
}

TEST_CASE("discrete run matches the literal recursion on random instances")
{
    oracle::Gen gen{3};
    for (int trial = 0; trial < 30; ++trial) {
        const int n = gen.integer(2, 25);
        const int k = gen.integer(1, n - 1);
        auto c = small_config(n, k, gen.uniform(0, 1.2), gen.uniform(0, 2));
        c.nonlinearity.phase = gen.uniform(-1, 1);
        const auto mask_values = gen.vec(static_cast<std::size_t>(n), -1, 1);
        const auto u = gen.vec(static_cast<std::size_t>(gen.integer(2, 60)), -1, 1);
        const auto s = run_discrete(c, make_step_mask(mask_values), u, 0);
        const auto ref = oracle::reservoir(n, k, c.alpha, c.beta, c.nonlinearity.phase, mask_values, u);
        for (std::size_t t = 0; t < u.size(); ++t)
            for (int i = 1; i <= n; ++i) CHECK(std::fabs(s(i, static_cast<int>(t)) - ref[t][static_cast<std::size_t>(i - 1)]) < 1e-14);
    }
}

TEST_CASE("feedback-free reservoir is a static map")
{
    const auto mask = random_mask(7, 2);
    oracle::Gen gen{4};
    const auto u = gen.vec(30, -1, 1);
    const auto s = run_discrete(small_config(7, 3, 0.0, 1.0), mask, u, 0);
    for (int n = 0; n < 30; ++n)
        for (int i = 1; i <= 7; ++i) CHECK(s(i, n) == std::sin(mask.at_node(i) * u[static_cast<std::size_t>(n)]));
}

TEST_CASE("zero input keeps the zero state")
{
    const std::vector<double> u(50, 0.0);
    const auto s = run_discrete(small_config(9, 4, 0.9, 1.0), random_mask(9, 1), u, 0);
    CHECK(s.states.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturbing one past state propagates along the ring")
{
    // For i <= k the state at step n reads node i - k + N two steps back; for
    // i > k it reads node i - k one step back. Perturbing a single x_j(0)
    // must change exactly the predicted node at the predicted step first.
    const int n = 7;
    const int k = 3;
    const auto c = small_config(n, k, 0.8, 0.7);
    const auto mask = random_mask(n, 9);
    oracle::Gen gen{5};
    const auto u = gen.vec(6, -1, 1);
    for (int j = 1; j <= n; ++j) {
        InitialHistory base{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
        InitialHistory bumped = base;
        bumped.current[j - 1] = 1e-3;  // x_j(0)
        const auto a = run_discrete(c, mask, u, 0, base);
        const auto b = run_discrete(c, mask, u, 0, bumped);
        // first step (column 0 is x(1)): only i = j + k (if <= N) sees x_j(0)
        for (int i = 1; i <= n; ++i) {
            const bool expect = i > k && i - k == j;
            CHECK_MESSAGE((a(i, 0) != b(i, 0)) == expect, "j=" << j << " i=" << i);
        }
        // second step: node i <= k with i - k + N == j reads x_j(0)
        for (int i = 1; i <= k; ++i) {
            const bool expect = i - k + n == j;
            if (expect) CHECK(a(i, 1) != b(i, 1));
        }
        if (j > n - k) {
            // x_j(0) reaches node j + k - N at step 2 and nowhere earlier among i <= k
            CHECK(a(j + k - n, 0) == b(j + k - n, 0));
            CHECK(a(j + k - n, 1) != b(j + k - n, 1));
        }
    }
    // x(-1) only matters for nodes i <= k at step 1
    for (int j = 1; j <= n; ++j) {
        InitialHistory base{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
        InitialHistory bumped = base;
        bumped.previous[j - 1] = 1e-3;
        const auto a = run_discrete(c, mask, u, 0, base);
        const auto b = run_discrete(c, mask, u, 0, bumped);
        for (int i = 1; i <= n; ++i) {
            const bool expect = i <= k && i - k + n == j;
            CHECK((a(i, 0) != b(i, 0)) == expect);
        }
    }
}

TEST_CASE("sine states stay in [-1, 1]")
{
    oracle::Gen gen{6};
    for (int trial = 0; trial < 20; ++trial) {
        const int n = gen.integer(2, 30);
        auto c = small_config(n, gen.integer(1, n - 1), gen.uniform(0, 5), gen.uniform(0, 50));
        c.nonlinearity.phase = gen.uniform(-3, 3);
        c.state_noise_std = gen.uniform(0, 1);
        const auto s = run_discrete(c, random_mask(n, static_cast<std::uint64_t>(trial)), gen.vec(100, -10, 10),
                                    static_cast<std::uint64_t>(trial));
        CHECK(s.states.cwiseAbs().maxCoeff() <= 1.0);
        CHECK(s.states.allFinite());
    }
}

TEST_CASE("other nonlinearities are bounded")
{
    NonlinearitySpec f;
    f.kind = NonlinearityKind::saturating_gain;
    f.saturation = 2.0;
    CHECK(f(1e9) < 2.0);
    CHECK(f(-1e9) > -2.0);
    CHECK(f(1.0) == doctest::Approx(1.0 / 1.5));
    f.kind = NonlinearityKind::tanh;
    CHECK(f(0.3) == doctest::Approx(std::tanh(0.3)));
}

TEST_CASE("runs are deterministic, including state noise")
{
    auto c = small_config(11, 5, 0.8, 0.5);
    c.state_noise_std = 0.01;
    const auto mask = random_mask(11, 4);
    oracle::Gen gen{7};
    const auto u = gen.vec(80, -1, 1);
    const auto a = run_discrete(c, mask, u, 42);
    const auto b = run_discrete(c, mask, u, 42);
    CHECK(a.states == b.states);
    CHECK(a.states != run_discrete(c, mask, u, 43).states);
}

TEST_CASE("washout drops the head of the run")
{
    auto c = small_config(5, 2, 0.5, 1.0);
    const auto mask = random_mask(5, 1);
    oracle::Gen gen{8};
    const auto u = gen.vec(40, -1, 1);
    const auto full = run_discrete(c, mask, u, 0);
    c.washout = 10;
    const auto cut = run_discrete(c, mask, u, 0);
    REQUIRE(cut.input_len() == 30);
    CHECK(cut.states == full.states.rightCols(30));
}

TEST_CASE("run preconditions")
{
    auto c = small_config(5, 2, 0.5, 1.0);
    c.washout = 10;
    const auto mask = random_mask(5, 1);
    const std::vector<double> short_input(10, 0.1);
    CHECK_THROWS_AS(run_discrete(c, mask, short_input, 0), Error);
    CHECK_THROWS_AS(run_discrete(c, random_mask(6, 1), std::vector<double>(20, 0.1), 0), Error);
    std::vector<double> bad(20, 0.1);
    bad[3] = std::nan("");
    try {
        run_discrete(c, mask, bad, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::non_finite);
    }
    c.offset_k = 5;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.offset_k = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("emulator at one sample per node equals the discrete model")
{
    oracle::Gen gen{9};
    for (int trial = 0; trial < 10; ++trial) {
        const int n = gen.integer(2, 20);
        auto c = small_config(n, gen.integer(1, n - 1), gen.uniform(0, 1), gen.uniform(0, 2));
        c.nonlinearity.phase = gen.uniform(-1, 1);
        c.washout = gen.integer(0, 20);
        EmulatorConfig emu;
        emu.base = c;
        emu.t_prime = gen.uniform(0.5, 3);
        const auto mask = random_mask(n, static_cast<std::uint64_t>(trial));
        const auto u = gen.vec(static_cast<std::size_t>(gen.integer(c.washout + 1, 200)), -1, 1);
        const auto d = run_discrete(c, mask, u, 0);
        const auto e = run_continuous(emu, mask, u, 0);
        CHECK(e.states == d.states);
    }
}

TEST_CASE("emulator without feedback averages the windowed transfer")
{
    MaskSpec s;
    s.family = MaskFamily::two_sine;
    s.n_nodes = 11;
    s.f1 = 2;
    s.f2 = 3;
    const auto mask = generate_mask(s);
    EmulatorConfig emu;
    emu.oversampling = 8;
    emu.t_prime = 1.0;
    emu.base = small_config(11, 4, 0.0, 1.3);
    const std::vector<double> u{0.5, -0.7, 0.9};
    const auto states = run_continuous(emu, mask, u, 0);
    const double theta = 1.0 / 11;
    const double h = theta / 8;
    for (int n = 0; n < 3; ++n)
        for (int i = 1; i <= 11; ++i) {
            // node i covers [(i-1) theta, i theta), sampled at the grid points
            double riemann = 0.0;
            double fine = 0.0;
            for (int q = 0; q < 8; ++q) {
                const double t = (i - 1) * theta + q * h;
                const double m = std::sin(2 * std::numbers::pi * 2 * t) + std::sin(2 * std::numbers::pi * 3 * t);
                riemann += std::sin(1.3 * m * u[static_cast<std::size_t>(n)]);
            }
            riemann /= 8;
            const int fine_steps = 4000;
            for (int q = 0; q < fine_steps; ++q) {
                const double t = (i - 1) * theta + (q + 0.5) * theta / fine_steps;
                const double m = std::sin(2 * std::numbers::pi * 2 * t) + std::sin(2 * std::numbers::pi * 3 * t);
                fine += std::sin(1.3 * m * u[static_cast<std::size_t>(n)]);
            }
            fine /= fine_steps;
            CHECK(std::fabs(states(i, n) - riemann) < 1e-12);
            // left Riemann sum plus its first endpoint correction is trapezoidal
            auto f = [&](double t) {
                const double m = std::sin(2 * std::numbers::pi * 2 * t) + std::sin(2 * std::numbers::pi * 3 * t);
                return std::sin(1.3 * m * u[static_cast<std::size_t>(n)]);
            };
            const double corrected = states(i, n) + (f(i * theta) - f((i - 1) * theta)) / 16;
            CHECK(std::fabs(corrected - fine) < 0.02);
        }
}

TEST_CASE("emulator keeps zero input at zero")
{
    EmulatorConfig emu;
    emu.oversampling = 4;
    emu.base = small_config(13, 5, 0.9, 1.0);
    MaskSpec s;
    s.n_nodes = 13;
    const auto st = run_continuous(emu, generate_mask(s), std::vector<double>(20, 0.0), 0);
    CHECK(st.states.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fading memory probe")
{
    const int n = 53;
    MaskSpec s;
    const auto mask = generate_mask(s);
    oracle::Gen gen{10};
    const auto u = gen.vec(300, -1, 1);
    InitialHistory a{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    InitialHistory b{Eigen::VectorXd::Constant(n, 0.7), Eigen::VectorXd::Constant(n, -0.5)};

    SUBCASE("no feedback forgets immediately")
    {
        auto c = small_config(n, 18, 0.0, 0.5);
        const auto delta = fading_memory_probe(c, mask, u, a, b);
        for (double d : delta) CHECK(d == 0.0);
    }
    SUBCASE("identical starts never diverge")
    {
        const auto delta = fading_memory_probe(small_config(n, 18, 0.9, 0.5), mask, u, b, b);
        for (double d : delta) CHECK(d == 0.0);
    }
    SUBCASE("alpha 0.9 contracts below 1e-6 within 100 steps")
    {
        const auto delta = fading_memory_probe(small_config(n, 18, 0.9, 0.5), mask, u, a, b);
        CHECK(delta[99] < 1e-6);
    }
}

TEST_CASE("state CSV export")
{
    const auto path = std::filesystem::temp_directory_path() / "dlrc_states.csv";
    const auto s = run_discrete(small_config(3, 1, 0.5, 1.0), make_step_mask({1, -1, 0.5}), std::vector<double>{0.2, 0.4}, 0);
    write_states_csv(s, path.string());
    std::ifstream in{path};
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,i,x");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6);
    std::filesystem::remove(path);
}

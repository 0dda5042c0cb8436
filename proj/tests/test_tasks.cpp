#include "oracles.hpp"

#include "dlrc/error.hpp"
#include "dlrc/mask.hpp"
#include "dlrc/pipeline.hpp"
#include "dlrc/tasks.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace dlrc;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out{path};
    out << contents;
    return path;
}

std::vector<double> random_symbols(std::size_t n, std::uint64_t seed)
{
    oracle::Gen gen{seed};
    const double alphabet[] = {-3, -1, 1, 3};
    std::vector<double> s(n);
    for (auto& v : s) v = alphabet[gen.integer(0, 3)];
    return s;
}

}  // namespace

TEST_CASE("channel: zero symbols give zero signal")
{
    const std::vector<double> zeros(40, 0.0);
    const auto ds = channel_dataset_from_symbols(zeros, std::numeric_limits<double>::infinity(), 0, {});
    for (double u : ds.input) CHECK(u == 0.0);
}

TEST_CASE("channel: impulse response is the tap vector")
{
    std::vector<double> symbols(30, 0.0);
    const std::size_t p = 15;
    symbols[p] = 1.0;
    const auto q = channel_filter(symbols);
    REQUIRE(q.size() == 21);
    // q at index m corresponds to n = m + 7
    const double expected[] = {0.08, -0.12, 1.0, 0.18, -0.1, 0.091, -0.05, 0.04, 0.03, 0.01};
    for (int offset = -2; offset <= 7; ++offset) {
        const auto n = static_cast<std::size_t>(static_cast<long>(p) + offset);
        CHECK(q[n - 7] == expected[offset + 2]);
    }
    double others = 0.0;
    for (std::size_t m = 0; m < q.size(); ++m) {
        const long n = static_cast<long>(m) + 7;
        if (n < static_cast<long>(p) - 2 || n > static_cast<long>(p) + 7) others += std::fabs(q[m]);
    }
    CHECK(others == 0.0);
}

TEST_CASE("channel: noiseless signal matches the scalar oracle")
{
    auto symbols = random_symbols(5000, 77);
    symbols[0] = 1;
    symbols[1] = 3;
    symbols[2] = -1;
    const auto ds = channel_dataset_from_symbols(symbols, std::numeric_limits<double>::infinity(), 0, {});
    const auto ref = oracle::channel(symbols);
    REQUIRE(ds.input.size() == ref.size());
    for (std::size_t m = 0; m < ref.size(); ++m) {
        CHECK(std::fabs(ds.input[m] - ref[m].first) < 1e-12);
        CHECK(ds.target[m] == ref[m].second);
    }
}

TEST_CASE("channel: realized SNR within 0.1 dB")
{
    const auto symbols = random_symbols(100009, 5);
    const auto clean = channel_dataset_from_symbols(symbols, std::numeric_limits<double>::infinity(), 0, {});
    for (double snr : {12.0, 20.0, 32.0}) {
        const auto noisy = channel_dataset_from_symbols(symbols, snr, 99, {});
        std::vector<double> noise(clean.input.size());
        for (std::size_t n = 0; n < noise.size(); ++n) noise[n] = noisy.input[n] - clean.input[n];
        const double realized = 10 * std::log10(oracle::population_variance(clean.input) / oracle::population_variance(noise));
        CHECK(std::fabs(realized - snr) < 0.1);
    }
}

TEST_CASE("channel: parameters, lengths and determinism")
{
    ChannelParams p;
    p.n_symbols = 2009;
    p.split = {};
    p.snr_db = 24;
    const auto a = channel_dataset(p);
    const auto b = channel_dataset(p);
    CHECK(a.input.size() == 2000);
    CHECK(a.split.total() == 2000);
    CHECK(a.input == b.input);
    p.seed = 2;
    CHECK(channel_dataset(p).input != a.input);
    p.snr_db = 40;
    CHECK_THROWS_AS(channel_dataset(p), ConfigError);
    p.snr_db = 11;
    CHECK_THROWS_AS(channel_dataset(p), ConfigError);
    p.snr_db = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(channel_dataset(p));
    p.split = {1000, 500, 400};
    CHECK_THROWS_AS(channel_dataset(p), ConfigError);
}

TEST_CASE("NARMA10 from zero input")
{
    const std::vector<double> zeros(3000, 0.0);
    const auto d = narma10_target(zeros);
    CHECK(d[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(0.1305).epsilon(1e-15));
    // hand-unrolled third step: 0.3*0.1305 + 0.05*0.1305*(0.1305+0.1) + 0.1
    CHECK(d[2] == doctest::Approx(0.3 * 0.1305 + 0.05 * 0.1305 * 0.2305 + 0.1).epsilon(1e-15));
    CHECK(d.back() == doctest::Approx(0.7 - std::sqrt(0.29)).epsilon(1e-12));
}

TEST_CASE("NARMA10 datasets replay their recursion exactly")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto ds = narma10_dataset(4000, seed);
        const auto& u = ds.input;
        const auto& d = ds.target;
        for (double x : u) CHECK((x >= 0.0 && x <= 0.5));
        for (std::size_t n = 10; n < d.size(); ++n) {
            double window = 0.0;
            for (std::size_t i = 1; i <= 10; ++i) window += d[n - i];
            const double expected = 0.3 * d[n - 1] + 0.05 * d[n - 1] * window + 1.5 * u[n - 10] * u[n - 1] + 0.1;
            if (d[n] != expected) {
                FAIL("mismatch at " << n);
                break;
            }
        }
        CHECK(ds.split.train == 4000 / 3);
        CHECK(ds.split.total() == 4000);
    }
    const auto ds = narma10_dataset(9000, 1);
    CHECK(ds.split.train == 3000);
    CHECK(ds.split.validation == 1000);
    CHECK(ds.split.test == 5000);
    CHECK(narma10_dataset(500, 4).input == narma10_dataset(500, 4).input);
}

TEST_CASE("memory input moments")
{
    const int n = 100000;
    const auto ds = memory_input(n, 1);
    CHECK(ds.target.empty());
    const double mean = oracle::mean(ds.input);
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(12.0 * n));
    CHECK(std::fabs(oracle::population_variance(ds.input) - 1.0 / 3) < 0.005);
    for (double u : ds.input) CHECK((u >= -1.0 && u <= 1.0));
    CHECK(memory_input(100, 3).input == memory_input(100, 3).input);
}

TEST_CASE("Mackey-Glass")
{
    MackeyGlassParams p;
    SUBCASE("u = 1 is an exact fixed point")
    {
        p.washout_time = 0;
        for (double v : integrate_mackey_glass(p, 1.0, 600)) CHECK(v == 1.0);
    }
    SUBCASE("horizon 0 copies the input")
    {
        p.n_samples = 600;
        p.split = {};
        const auto ds = mackey_glass_dataset(p, 0);
        CHECK(ds.input == ds.target);
    }
    SUBCASE("targets are the series shifted by the horizon")
    {
        p.n_samples = 700;
        p.split = {};
        const auto d0 = mackey_glass_dataset(p, 0);
        const auto d5 = mackey_glass_dataset(p, 5);
        for (std::size_t n = 0; n + 5 < d0.input.size(); ++n) CHECK(d5.target[n] == d0.input[n + 5]);
    }
    SUBCASE("nearby trajectories separate")
    {
        p.washout_time = 0;
        const auto a = integrate_mackey_glass(p, 0.5, 500);
        const auto b = integrate_mackey_glass(p, 0.5 + 1e-8, 500);
        double sep = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) sep = std::max(sep, std::fabs(a[n] - b[n]));
        CHECK(sep > 1e-2);
    }
    SUBCASE("the integrator converges under step halving over a short span")
    {
        p.washout_time = 0;
        auto fine = p;
        fine.dt = 0.05;
        const auto a = integrate_mackey_glass(p, 0.5, 12);
        const auto b = integrate_mackey_glass(fine, 0.5, 12);
        for (std::size_t n = 0; n < a.size(); ++n) CHECK(std::fabs(a[n] - b[n]) < 1e-4);
    }
    SUBCASE("delay must be a whole number of steps")
    {
        p.dt = 0.3;
        CHECK_THROWS_AS(validate(p), ConfigError);
    }
}

TEST_CASE("series loader")
{
    SUBCASE("two rows with horizon 1 give one pair")
    {
        const auto path = temp_file("dlrc_series2.csv", "1.0\n3.0\n");
        const auto ds = series_dataset(path.string(), SeriesColumn::real, 1);
        CHECK(ds.size() == 1);
        CHECK(ds.input[0] == doctest::Approx(-1.0));
        CHECK(ds.target[0] == doctest::Approx(1.0));
    }
    SUBCASE("constant column is rejected")
    {
        const auto path = temp_file("dlrc_series_const.csv", "re,im\n2,1\n2,5\n2,3\n");
        CHECK_THROWS_WITH_AS(series_dataset(path.string(), SeriesColumn::real, 1), doctest::Contains("variance"), Error);
        CHECK_NOTHROW(series_dataset(path.string(), SeriesColumn::imaginary, 1));
    }
    SUBCASE("malformed rows report their line")
    {
        const auto path = temp_file("dlrc_series_bad.csv", "1\n2\nx\n");
        CHECK_THROWS_WITH_AS(series_dataset(path.string(), SeriesColumn::real, 1), doctest::Contains(":3"), Error);
    }
    SUBCASE("a reservoir predicts the quadrature of a sinusoid")
    {
        std::string text = "value\n";
        for (int n = 0; n < 3000; ++n) text += std::to_string(std::sin(2 * std::numbers::pi * n / 40.0)) + "\n";
        const auto path = temp_file("dlrc_series_sine.csv", text);
        const auto ds = series_dataset(path.string(), SeriesColumn::real, 10);
        MaskSpec ms;
        ms.family = MaskFamily::random_uniform;
        ReservoirConfig c;
        c.alpha = 0.8;
        c.beta = 0.3;
        const auto r = run_pipeline(ds, generate_mask(ms), c, {}, MetricKind::nmse, 0);
        CHECK(r.test_metric < 0.01);
    }
}

TEST_CASE("dataset CSV round trip")
{
    const auto ds = narma10_dataset(300, 9);
    const auto path = std::filesystem::temp_directory_path() / "dlrc_ds.csv";
    write_dataset_csv(ds, path.string(), "note");
    const auto back = read_dataset_csv(path.string());
    CHECK(back.input == ds.input);
    CHECK(back.target == ds.target);
    CHECK(back.split.total() == 300);
}

TEST_CASE("splits")
{
    CHECK(default_split(100).train == 60);
    CHECK(default_split(100).validation == 20);
    CHECK(benchmark_split(9000).train == 3000);
    CHECK_THROWS_AS(narma10_dataset(100, 1, Split{50, 20, 20}), ConfigError);
    CHECK_THROWS_AS(narma10_dataset(100, 1, Split{-1, 51, 50}), ConfigError);
}

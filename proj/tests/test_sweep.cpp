#include "dlrc/error.hpp"
#include "dlrc/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace dlrc;

namespace {

SweepGrid small_grid()
{
    SweepGrid g;
    g.family = MaskFamily::two_sine;
    g.n_nodes = 13;
    g.k_values = {4};
    g.f1_values = {3};
    g.f2_values = {5};
    g.alpha_values = {0.7};
    g.beta_values = {0.3};
    g.base.washout = 100;
    g.task.kind = TaskSpec::Kind::channel;
    g.task.channel.n_symbols = 1209;
    g.task.channel.split = {500, 200, 500};
    g.task.channel.snr_db = 24;
    g.metric = MetricKind::ser;
    g.replicas = 1;
    return g;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in{p};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("default gain grids")
{
    const auto a = default_alpha_grid();
    REQUIRE(a.size() == 10);
    CHECK(a.front() == 0.5);
    CHECK(a.back() == doctest::Approx(0.95));
    const auto b = default_beta_grid();
    REQUIRE(b.size() == 7);
    CHECK(b.front() == doctest::Approx(1e-2));
    CHECK(b.back() == doctest::Approx(10.0));
}

TEST_CASE("two-sine sweeps skip equal frequencies")
{
    auto g = small_grid();
    g.f1_values = {3, 5};
    g.f2_values = {3, 5};
    const auto points = enumerate_points(g);
    REQUIRE(points.size() == 2);
    CHECK(points[0].f1 == 3);
    CHECK(points[0].f2 == 5);
    CHECK(points[1].f1 == 5);
    CHECK(points[1].f2 == 3);
    const auto result = run_sweep(g);
    CHECK(result.rows.size() == 2);
}

TEST_CASE("points come out in lexicographic order and collapse unused frequencies")
{
    auto g = small_grid();
    g.family = MaskFamily::single_sine;
    g.k_values = {9, 2};
    g.f1_values = {4, 1, 4};
    g.f2_values = {7};
    g.alpha_values = {0.9, 0.5};
    const auto points = enumerate_points(g);
    REQUIRE(points.size() == 8);
    CHECK(std::is_sorted(points.begin(), points.end()));
    for (const auto& p : points) CHECK(p.f2 == 0);
    g.family = MaskFamily::random_uniform;
    CHECK(enumerate_points(g).size() == 4);
}

TEST_CASE("a one-point sweep equals a direct pipeline run")
{
    auto g = small_grid();
    g.reservoir_seed = 17;
    g.task.seed = 4;
    const auto result = run_sweep(g);
    REQUIRE(result.rows.size() == 1);
    REQUIRE(result.best);
    const auto& row = result.best_row();
    const auto direct = run_pipeline(make_dataset(g.task, 4), point_mask(g, row.point, 0), point_config(g, row.point),
                                     g.readout, g.metric, 17);
    CHECK(row.mean == direct.test_metric);
    CHECK(row.replicas[0].ridge == direct.readout.ridge);
    CHECK(row.std == 0.0);
}

TEST_CASE("replicas use shifted seeds and report sample statistics")
{
    auto g = small_grid();
    g.replicas = 3;
    g.task.seed = 10;
    const auto result = run_sweep(g);
    CHECK(result.dataset_seeds == std::vector<std::uint64_t>{10, 11, 12});
    const auto& row = result.rows[0];
    REQUIRE(row.replicas.size() == 3);
    double mean = 0.0;
    for (const auto& r : row.replicas) mean += r.value / 3;
    double var = 0.0;
    for (const auto& r : row.replicas) var += (r.value - mean) * (r.value - mean) / 2;
    CHECK(row.mean == doctest::Approx(mean).epsilon(1e-14));
    CHECK(row.std == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("results do not depend on scheduling")
{
    auto g = small_grid();
    g.k_values = {2, 4, 7};
    g.alpha_values = {0.5, 0.9};
    g.beta_values = {0.1, 1.0};
    g.replicas = 2;
    const auto serial = run_sweep(g);
    SweepOptions shuffled;
    shuffled.shuffle_seed = 99;
    shuffled.jobs = 3;
    const auto other = run_sweep(g, shuffled);
    REQUIRE(serial.rows.size() == other.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].point == other.rows[i].point);
        for (std::size_t r = 0; r < 2; ++r) CHECK(serial.rows[i].replicas[r].value == other.rows[i].replicas[r].value);
    }
    CHECK(serial.best == other.best);
}

TEST_CASE("interrupted sweeps resume to the same CSV")
{
    auto g = small_grid();
    g.k_values = {2, 4, 7, 9};
    g.beta_values = {0.1, 1.0};
    g.replicas = 2;
    const auto dir = std::filesystem::temp_directory_path() / "dlrc_resume_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    const auto full = run_sweep(g);
    write_sweep_csv(full, g.metric, (dir / "full.csv").string(), "p");

    SweepOptions o;
    o.checkpoint_path = (dir / "ck").string();
    o.config_hash = "abc";
    o.stop_after = 3;
    const auto partial = run_sweep(g, o);
    CHECK_FALSE(partial.complete);
    o.resume = true;
    o.stop_after = 2;
    CHECK_FALSE(run_sweep(g, o).complete);
    o.stop_after = 0;
    const auto resumed = run_sweep(g, o);
    CHECK(resumed.complete);
    write_sweep_csv(resumed, g.metric, (dir / "resumed.csv").string(), "p");
    CHECK(slurp(dir / "full.csv") == slurp(dir / "resumed.csv"));

    o.config_hash = "different";
    CHECK_THROWS_AS(run_sweep(g, o), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("per-point failures stay in their row")
{
    auto g = small_grid();
    g.beta_values = {0.0, 0.3};
    g.readout.ridge_grid = {0.0};
    const auto result = run_sweep(g);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].failed);
    CHECK_FALSE(result.rows[0].replicas[0].error.empty());
    CHECK(std::isnan(result.rows[0].replicas[0].value));
    CHECK_FALSE(result.rows[1].failed);
    REQUIRE(result.best);
    CHECK(*result.best == 1);
}

TEST_CASE("best point: minimal mean, ties to the smallest point")
{
    SweepResult r;
    auto row = [](int k, double mean) {
        SweepRow s;
        s.point.k = k;
        s.replicas = {ReplicaOutcome{mean, 0, 0, 0, {}}};
        return s;
    };
    r.rows = {row(1, 0.3), row(2, 0.1), row(3, 0.1), row(4, 0.2)};
    aggregate(r);
    CHECK(*r.best == 1);
    // sub-ulp-scale noise on non-tied rows never changes the winner
    r.rows[0].replicas[0].value = 0.3 - 1e-16;
    r.rows[3].replicas[0].value = 0.2 + 1e-16;
    aggregate(r);
    CHECK(*r.best == 1);
    r.rows[1].replicas[0].value = std::nextafter(0.1, 1.0);
    aggregate(r);
    CHECK(*r.best == 2);
}

TEST_CASE("validation selection uses validation metric then validation NMSE")
{
    SweepResult r;
    auto row = [](int k, double test, double val, double val_nmse) {
        SweepRow s;
        s.point.k = k;
        s.replicas = {ReplicaOutcome{test, val, val_nmse, 0, {}}};
        return s;
    };
    r.rows = {row(1, 0.1, 0.02, 0.5), row(2, 0.3, 0.01, 0.9), row(3, 0.2, 0.01, 0.4)};
    aggregate(r, MetricSelection::validation);
    CHECK(*r.best == 2);
    aggregate(r, MetricSelection::test);
    CHECK(*r.best == 0);
}

TEST_CASE("landscape")
{
    auto g = small_grid();
    g.family = MaskFamily::single_sine;
    g.k_values = {2, 4, 7};
    g.f1_values = {1, 2, 3, 5};
    g.alpha_values = {0.5, 0.9};
    const auto result = run_sweep(g);
    const auto cells = landscape(result, SweepAxis::f1, SweepAxis::k);
    CHECK(cells.size() == 12);
    for (const auto& c : cells) {
        double best = INFINITY;
        for (const auto& row : result.rows)
            if (row.point.f1 == c.axis1 && row.point.k == c.axis2) best = std::min(best, row.mean);
        CHECK(c.metric == best);
    }
    CHECK(std::is_sorted(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        return std::pair{a.axis1, a.axis2} < std::pair{b.axis1, b.axis2};
    }));

    auto one = small_grid();
    CHECK(landscape(run_sweep(one), SweepAxis::k, SweepAxis::alpha).size() == 1);
    CHECK_FALSE(parse_axis("gamma"));
    CHECK(parse_axis("f1") == SweepAxis::f1);

    auto two = small_grid();
    two.f1_values = {2, 3, 5};
    two.f2_values = {3, 5};
    // (3,3) and (5,5) are skipped: 3 * 2 - 2 cells
    CHECK(landscape(run_sweep(two), SweepAxis::f1, SweepAxis::f2).size() == 4);
}

TEST_CASE("snr curve")
{
    auto g = small_grid();
    const auto curve = snr_curve(g, {20.0});
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].snr_db == 20.0);
    // 500 test symbols resolve an error rate only down to 10 errors
    CHECK(curve.warnings.empty() == (500 * curve.points[0].ser_mean >= 10));
    g.task.kind = TaskSpec::Kind::narma10;
    CHECK_THROWS(snr_curve(g, {20.0}));
}

TEST_CASE("grid validation")
{
    auto g = small_grid();
    g.k_values = {};
    CHECK_THROWS_AS(validate(g), ConfigError);
    g = small_grid();
    g.k_values = {13};
    CHECK_THROWS_AS(validate(g), ConfigError);
    g = small_grid();
    g.f1_values = {0};
    CHECK_THROWS_AS(validate(g), ConfigError);
    g = small_grid();
    g.replicas = 0;
    CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("sweep CSV layout")
{
    auto g = small_grid();
    g.replicas = 2;
    const auto path = std::filesystem::temp_directory_path() / "dlrc_sweep.csv";
    write_sweep_csv(run_sweep(g), g.metric, path.string());
    const auto text = slurp(path);
    CHECK(text.rfind("k,f1,f2,alpha,beta,phase,lambda,replica,metric,value\n4,3,5,0.7,0.3,0,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    std::filesystem::remove(path);
}

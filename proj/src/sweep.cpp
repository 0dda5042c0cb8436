#include "dlrc/sweep.hpp"

#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <unistd.h>

namespace dlrc {

std::vector<double> default_alpha_grid()
{
    std::vector<double> out;
    for (int i = 0; i <= 9; ++i) out.push_back(0.5 + 0.05 * i);
    return out;
}

std::vector<double> default_beta_grid()
{
    std::vector<double> out;
    for (int i = 0; i <= 6; ++i) out.push_back(std::pow(10.0, -2.0 + 0.5 * i));
    return out;
}

void validate(const SweepGrid& grid)
{
    if (grid.n_nodes < 2) throw ConfigError("mask.n_nodes", "must be at least 2");
    if (grid.k_values.empty()) throw ConfigError("sweep.k", "axis is empty");
    for (int k : grid.k_values)
        if (k < 1 || k > grid.n_nodes - 1) throw ConfigError("sweep.k", "values must lie in [1, n_nodes - 1]");
    auto check_freq = [&](const std::vector<int>& axis, const char* key) {
        if (axis.empty()) throw ConfigError(key, "axis is empty");
        for (int f : axis)
            if (f < 1 || f > grid.n_nodes) throw ConfigError(key, "values must lie in [1, n_nodes]");
    };
    if (is_sine_family(grid.family)) check_freq(grid.f1_values, "sweep.f1");
    if (grid.family == MaskFamily::two_sine) check_freq(grid.f2_values, "sweep.f2");
    if (grid.alpha_values.empty()) throw ConfigError("sweep.alpha", "axis is empty");
    if (grid.beta_values.empty()) throw ConfigError("sweep.beta", "axis is empty");
    if (grid.phase_values.empty()) throw ConfigError("sweep.phase", "axis is empty");
    for (double a : grid.alpha_values)
        if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("sweep.alpha", "values must be finite and >= 0");
    for (double b : grid.beta_values)
        if (!(b >= 0) || !std::isfinite(b)) throw ConfigError("sweep.beta", "values must be finite and >= 0");
    for (double p : grid.phase_values)
        if (!std::isfinite(p)) throw ConfigError("sweep.phase", "values must be finite");
    if (grid.replicas < 1) throw ConfigError("sweep.replicas", "must be >= 1");
    if (grid.readout.ridge_grid.empty()) throw ConfigError("readout.ridge", "grid is empty");
}

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string sanitize(std::string text)
{
    for (auto& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return text;
}

}  // namespace

std::vector<SweepPoint> enumerate_points(const SweepGrid& grid)
{
    validate(grid);
    const auto ks = sorted_unique(grid.k_values);
    const auto f1s = is_sine_family(grid.family) ? sorted_unique(grid.f1_values) : std::vector<int>{0};
    const auto f2s = grid.family == MaskFamily::two_sine ? sorted_unique(grid.f2_values) : std::vector<int>{0};
    const auto alphas = sorted_unique(grid.alpha_values);
    const auto betas = sorted_unique(grid.beta_values);
    const auto phases = sorted_unique(grid.phase_values);

    std::vector<SweepPoint> points;
    for (int k : ks)
        for (int f1 : f1s)
            for (int f2 : f2s) {
                if (grid.family == MaskFamily::two_sine && f1 == f2) continue;
                for (double a : alphas)
                    for (double b : betas)
                        for (double p : phases) points.push_back({k, f1, f2, a, b, p});
            }
    return points;
}

Mask point_mask(const SweepGrid& grid, const SweepPoint& point, int replica)
{
    MaskSpec spec;
    spec.family = grid.family;
    spec.n_nodes = grid.n_nodes;
    spec.f1 = point.f1;
    spec.f2 = point.f2;
    spec.seed = grid.mask_seed + static_cast<std::uint64_t>(replica);
    if (!is_sine_family(spec.family)) spec.f1 = spec.f2 = 1;
    return generate_mask(spec);
}

ReservoirConfig point_config(const SweepGrid& grid, const SweepPoint& point)
{
    ReservoirConfig config = grid.base;
    config.n_nodes = grid.n_nodes;
    config.offset_k = point.k;
    config.alpha = point.alpha;
    config.beta = point.beta;
    config.nonlinearity.phase = point.phase;
    return config;
}

namespace {

constexpr const char* checkpoint_magic = "# dlrc-sweep-checkpoint";

struct CheckpointLine {
    std::size_t point;
    int replica;
    ReplicaOutcome outcome;
};

bool parse_nan_aware(const std::string& text, double& out)
{
    if (text == "nan") {
        out = std::numeric_limits<double>::quiet_NaN();
        return true;
    }
    return parse_double(text, out);
}

std::vector<CheckpointLine> load_checkpoint(const std::string& path, const std::string& hash)
{
    std::ifstream in{path};
    if (!in) return {};
    std::string line;
    if (!std::getline(in, line)) return {};
    const std::string expected = std::string{checkpoint_magic} + " " + hash;
    if (line != expected)
        throw ConfigError("sweep", "checkpoint '" + path + "' belongs to a different sweep definition");
    std::vector<CheckpointLine> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        CheckpointLine c{};
        double point = 0;
        double replica = 0;
        if (f.size() != 7 || !parse_double(f[0], point) || !parse_double(f[1], replica)
            || !parse_nan_aware(f[2], c.outcome.ridge) || !parse_nan_aware(f[3], c.outcome.value)
            || !parse_nan_aware(f[4], c.outcome.validation) || !parse_nan_aware(f[5], c.outcome.validation_nmse)) {
            // A torn final line from an interrupted write is expected; anything
            // earlier is corruption.
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": malformed checkpoint row");
        }
        c.point = static_cast<std::size_t>(point);
        c.replica = static_cast<int>(replica);
        c.outcome.error = f[6];
        out.push_back(std::move(c));
    }
    return out;
}

class CheckpointWriter {
public:
    CheckpointWriter(const std::string& path, const std::string& hash, bool append)
    {
        if (path.empty()) return;
        file_ = std::fopen(path.c_str(), append ? "ab" : "wb");
        if (!file_) throw Error(ErrorCode::io, "cannot open checkpoint '" + path + "'");
        if (!append) {
            std::fprintf(file_, "%s %s\n", checkpoint_magic, hash.c_str());
            sync();
        }
    }
    CheckpointWriter(const CheckpointWriter&) = delete;
    CheckpointWriter& operator=(const CheckpointWriter&) = delete;
    ~CheckpointWriter()
    {
        if (file_) std::fclose(file_);
    }

    void append(std::size_t point, const std::vector<ReplicaOutcome>& replicas)
    {
        if (!file_) return;
        std::lock_guard lock{mutex_};
        for (std::size_t r = 0; r < replicas.size(); ++r) {
            const auto& o = replicas[r];
            std::fprintf(file_, "%zu,%zu,%s,%s,%s,%s,%s\n", point, r, format_number(o.ridge).c_str(),
                         format_number(o.value).c_str(), format_number(o.validation).c_str(),
                         format_number(o.validation_nmse).c_str(), sanitize(o.error).c_str());
        }
        sync();
    }

private:
    void sync()
    {
        std::fflush(file_);
        ::fsync(::fileno(file_));
    }

    std::FILE* file_ = nullptr;
    std::mutex mutex_;
};

}  // namespace

SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options)
{
    validate(grid);
    const auto points = enumerate_points(grid);

    SweepResult result;
    result.config_hash = options.config_hash;
    result.rows.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) result.rows[i].point = points[i];

    std::vector<TaskDataset> datasets;
    for (int r = 0; r < grid.replicas; ++r) {
        const auto seed = grid.task.seed + static_cast<std::uint64_t>(r);
        result.dataset_seeds.push_back(seed);
        datasets.push_back(make_dataset(grid.task, seed));
    }

    std::vector<bool> done(points.size(), false);
    if (options.resume && !options.checkpoint_path.empty()) {
        std::map<std::size_t, std::map<int, ReplicaOutcome>> seen;
        for (auto& line : load_checkpoint(options.checkpoint_path, options.config_hash))
            if (line.point < points.size() && line.replica >= 0 && line.replica < grid.replicas)
                seen[line.point][line.replica] = std::move(line.outcome);
        for (auto& [index, reps] : seen) {
            if (static_cast<int>(reps.size()) != grid.replicas) continue;
            auto& row = result.rows[index];
            for (auto& [r, outcome] : reps) row.replicas.push_back(std::move(outcome));
            done[index] = true;
        }
    }
    const bool append = options.resume && !options.checkpoint_path.empty()
                        && std::ifstream{options.checkpoint_path}.good();
    CheckpointWriter checkpoint{options.checkpoint_path, options.config_hash, append};

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!done[i]) order.push_back(i);
    if (options.shuffle_seed) {
        std::mt19937_64 prng{*options.shuffle_seed};
        std::shuffle(order.begin(), order.end(), prng);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> started{0};
    auto evaluate_point = [&](std::size_t index) {
        const auto& point = points[index];
        std::vector<ReplicaOutcome> outcomes(static_cast<std::size_t>(grid.replicas));
        for (int r = 0; r < grid.replicas; ++r) {
            auto& o = outcomes[static_cast<std::size_t>(r)];
            try {
                const auto mask = point_mask(grid, point, r);
                const auto config = point_config(grid, point);
                const auto res = run_pipeline(datasets[static_cast<std::size_t>(r)], mask, config, grid.readout,
                                              grid.metric, grid.reservoir_seed + static_cast<std::uint64_t>(r));
                o.value = res.test_metric;
                o.validation = res.validation_metric;
                o.validation_nmse = res.validation_nmse;
                o.ridge = res.readout.ridge;
            } catch (const std::exception& e) {
                o.value = o.validation = o.validation_nmse = o.ridge = std::numeric_limits<double>::quiet_NaN();
                o.error = e.what();
                if (o.error.empty()) o.error = "failed";
            }
        }
        checkpoint.append(index, outcomes);
        result.rows[index].replicas = std::move(outcomes);
    };

    auto worker = [&] {
        while (true) {
            if (options.stop_after > 0 && started.fetch_add(1) >= options.stop_after) return;
            const auto slot = next.fetch_add(1);
            if (slot >= order.size()) return;
            evaluate_point(order[slot]);
        }
    };

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(std::max<std::size_t>(order.size(), 1))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    aggregate(result, grid.select_on);
    return result;
}

void aggregate(SweepResult& result, MetricSelection selection)
{
    result.best.reset();
    result.complete = true;
    auto key_of = [&](const SweepRow& row) {
        if (selection == MetricSelection::test) return std::pair{row.mean, 0.0};
        double v = 0.0;
        double n = 0.0;
        for (const auto& o : row.replicas) {
            v += o.validation;
            n += o.validation_nmse;
        }
        const auto count = static_cast<double>(row.replicas.size());
        return std::pair{v / count, n / count};
    };
    std::pair<double, double> best_key{};
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        auto& row = result.rows[i];
        if (row.replicas.empty()) {
            result.complete = false;
            row.failed = false;
            row.mean = row.std = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        row.failed = false;
        double sum = 0.0;
        for (const auto& o : row.replicas) {
            if (!o.error.empty() || std::isnan(o.value)) row.failed = true;
            sum += o.value;
        }
        const auto count = static_cast<double>(row.replicas.size());
        row.mean = sum / count;
        double sq = 0.0;
        for (const auto& o : row.replicas) sq += (o.value - row.mean) * (o.value - row.mean);
        row.std = row.replicas.size() > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0;
        if (row.failed) continue;
        const auto key = key_of(row);
        if (std::isnan(key.first)) continue;
        // Rows are in lexicographic point order, so strict < keeps the
        // smallest point among exact ties.
        if (!result.best || key < best_key) {
            result.best = i;
            best_key = key;
        }
    }
}

void aggregate(SweepResult& result) { aggregate(result, MetricSelection::test); }

void write_sweep_csv(const SweepResult& result, MetricKind metric, const std::string& path,
                     const std::string& provenance)
{
    CsvWriter csv{path, provenance, "k,f1,f2,alpha,beta,phase,lambda,replica,metric,value"};
    for (const auto& row : result.rows) {
        const auto& p = row.point;
        for (std::size_t r = 0; r < row.replicas.size(); ++r) {
            const auto& o = row.replicas[r];
            csv.row({std::to_string(p.k), std::to_string(p.f1), std::to_string(p.f2), format_number(p.alpha),
                     format_number(p.beta), format_number(p.phase), format_number(o.ridge), std::to_string(r),
                     to_string(metric), format_number(o.value)});
        }
    }
    csv.close();
}

std::optional<SweepAxis> parse_axis(std::string_view name)
{
    for (auto a : {SweepAxis::k, SweepAxis::f1, SweepAxis::f2, SweepAxis::alpha, SweepAxis::beta, SweepAxis::phase})
        if (to_string(a) == name) return a;
    return std::nullopt;
}

std::string_view to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::k: return "k";
    case SweepAxis::f1: return "f1";
    case SweepAxis::f2: return "f2";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::beta: return "beta";
    case SweepAxis::phase: return "phase";
    }
    return "unknown";
}

namespace {

double axis_value(const SweepPoint& p, SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::k: return p.k;
    case SweepAxis::f1: return p.f1;
    case SweepAxis::f2: return p.f2;
    case SweepAxis::alpha: return p.alpha;
    case SweepAxis::beta: return p.beta;
    case SweepAxis::phase: return p.phase;
    }
    return 0.0;
}

}  // namespace

std::vector<LandscapeCell> landscape(const SweepResult& result, SweepAxis axis1, SweepAxis axis2)
{
    if (axis1 == axis2) throw Error(ErrorCode::invalid_argument, "landscape axes must differ");
    std::map<std::pair<double, double>, double> cells;
    for (const auto& row : result.rows) {
        if (row.replicas.empty()) continue;
        const std::pair key{axis_value(row.point, axis1), axis_value(row.point, axis2)};
        const double value = row.failed ? std::numeric_limits<double>::quiet_NaN() : row.mean;
        auto [it, inserted] = cells.emplace(key, value);
        if (!inserted && (std::isnan(it->second) || value < it->second)) it->second = value;
    }
    std::vector<LandscapeCell> out;
    out.reserve(cells.size());
    for (const auto& [key, value] : cells) out.push_back({key.first, key.second, value});
    return out;
}

void write_landscape_csv(const std::vector<LandscapeCell>& cells, SweepAxis axis1, SweepAxis axis2,
                         const std::string& path, const std::string& provenance)
{
    const std::string header = std::string{to_string(axis1)} + "," + std::string{to_string(axis2)} + ",metric";
    CsvWriter csv{path, provenance, header};
    for (const auto& c : cells)
        csv.row({format_number(c.axis1), format_number(c.axis2), format_number(c.metric)});
    csv.close();
}

SnrCurve snr_curve(const SweepGrid& grid, const std::vector<double>& snr_list, int jobs)
{
    if (grid.task.kind != TaskSpec::Kind::channel)
        throw Error(ErrorCode::invalid_argument, "snr curves need the channel task");
    if (snr_list.empty()) throw ConfigError("sweep.snr", "SNR list is empty");
    SnrCurve curve;
    for (double snr : snr_list) {
        SweepGrid g = grid;
        g.task.channel.snr_db = snr;
        g.metric = MetricKind::ser;
        SweepOptions options;
        options.jobs = jobs;
        const auto result = run_sweep(g, options);
        if (!result.best) throw Error(ErrorCode::runtime, "every point failed at " + format_number(snr) + " dB");
        const auto& row = result.best_row();
        curve.points.push_back({snr, row.mean, row.std, row.point});
        const double test_len = g.task.channel.split.test > 0 ? g.task.channel.split.test
                                                              : default_split(g.task.channel.n_symbols - 9).test;
        if (test_len * row.mean < 10.0)
            curve.warnings.push_back("SER at " + format_number(snr) + " dB rests on fewer than 10 errors ("
                                     + format_number(test_len * row.mean) + " expected)");
    }
    return curve;
}

void write_snr_curve_csv(const SnrCurve& curve, const std::string& path, const std::string& provenance)
{
    CsvWriter csv{path, provenance, "snr_db,ser_mean,ser_std"};
    for (const auto& p : curve.points)
        csv.row({format_number(p.snr_db), format_number(p.ser_mean), format_number(p.ser_std)});
    csv.close();
}

}  // namespace dlrc

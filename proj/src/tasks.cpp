#include "dlrc/tasks.hpp"

#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"
#include "dlrc/random.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

namespace dlrc {

namespace {

constexpr std::uint64_t noise_stream = 1;

std::string num(double v) { return format_number(v); }

double population_variance(std::span<const double> v)
{
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size());
}

Split resolve_split(Split split, int length, const char* key, Split (*fallback)(int) = default_split)
{
    if (split.train == 0 && split.validation == 0 && split.test == 0) return fallback(length);
    if (split.train < 0 || split.validation < 0 || split.test < 0)
        throw ConfigError(key, "split sizes must be >= 0");
    if (split.total() != length)
        throw ConfigError(key, "split " + std::to_string(split.train) + "/"
                                   + std::to_string(split.validation) + "/" + std::to_string(split.test)
                                   + " does not sum to the dataset length " + std::to_string(length));
    return split;
}

}  // namespace

Split default_split(int length)
{
    Split s;
    s.validation = length / 5;
    s.test = length / 5;
    s.train = length - s.validation - s.test;
    return s;
}

Split benchmark_split(int length)
{
    Split s;
    s.train = length / 3;
    s.validation = length / 9;
    s.test = length - s.train - s.validation;
    return s;
}

void validate(const TaskDataset& dataset)
{
    if (!dataset.target.empty() && dataset.target.size() != dataset.input.size())
        throw Error(ErrorCode::dimension_mismatch, "input and target lengths differ");
    if (dataset.split.total() != static_cast<int>(dataset.input.size()))
        throw Error(ErrorCode::dimension_mismatch, "split does not sum to the dataset length");
}

// --- channel ----------------------------------------------------------------

void validate(const ChannelParams& params)
{
    if (!(params.snr_db >= 12.0 && params.snr_db <= 32.0) && !std::isinf(params.snr_db))
        throw ConfigError("task.snr_db", "must lie in [12, 32] dB or be inf");
    if (std::isinf(params.snr_db) && params.snr_db < 0)
        throw ConfigError("task.snr_db", "must lie in [12, 32] dB or be inf");
    if (params.n_symbols <= 9) throw ConfigError("task.n_symbols", "must exceed the 10-tap filter support");
}

std::vector<double> channel_filter(std::span<const double> symbols)
{
    if (symbols.size() < channel_taps.size()) return {};
    std::vector<double> q(symbols.size() - 9);
    for (std::size_t m = 0; m < q.size(); ++m) {
        double acc = 0.0;
        for (std::size_t t = 0; t < channel_taps.size(); ++t) acc += channel_taps[t] * symbols[m + 9 - t];
        q[m] = acc;
    }
    return q;
}

std::vector<double> channel_distort(std::span<const double> q)
{
    std::vector<double> u(q.size());
    for (std::size_t n = 0; n < q.size(); ++n) u[n] = q[n] + 0.036 * q[n] * q[n] + 0.011 * q[n] * q[n] * q[n];
    return u;
}

TaskDataset channel_dataset_from_symbols(std::span<const double> symbols, double snr_db,
                                         std::uint64_t noise_seed, Split split)
{
    if (symbols.size() <= 9)
        throw Error(ErrorCode::invalid_argument, "channel needs more than 9 symbols");
    TaskDataset ds;
    ds.task = "channel";
    ds.input = channel_distort(channel_filter(symbols));
    ds.target.assign(symbols.begin() + 7, symbols.end() - 2);

    double noise_std = 0.0;
    if (!std::isinf(snr_db)) {
        const double signal_var = population_variance(ds.input);
        noise_std = std::sqrt(signal_var / std::pow(10.0, snr_db / 10.0));
        std::mt19937_64 prng{noise_seed};
        std::normal_distribution<double> gauss{0.0, 1.0};
        for (auto& u : ds.input) u += noise_std * gauss(prng);
    }
    ds.split = resolve_split(split, static_cast<int>(ds.input.size()), "task.split");
    ds.meta["snr_db"] = num(snr_db);
    ds.meta["noise_std"] = num(noise_std);
    return ds;
}

TaskDataset channel_dataset(const ChannelParams& params)
{
    validate(params);
    std::mt19937_64 prng{params.seed};
    std::vector<double> symbols(static_cast<std::size_t>(params.n_symbols));
    constexpr std::array<double, 4> alphabet{-3.0, -1.0, 1.0, 3.0};
    for (auto& s : symbols) s = alphabet[prng() >> 62];
    auto ds = channel_dataset_from_symbols(symbols, params.snr_db, derive_seed(params.seed, noise_stream),
                                           params.split);
    ds.meta["seed"] = std::to_string(params.seed);
    ds.meta["n_symbols"] = std::to_string(params.n_symbols);
    return ds;
}

// --- NARMA10 ----------------------------------------------------------------

std::vector<double> narma10_target(std::span<const double> input)
{
    const std::size_t len = input.size();
    std::vector<double> d(len, 0.0);
    auto past = [&](std::size_t n, std::size_t i) { return n >= i ? d[n - i] : 0.0; };
    auto u_at = [&](std::size_t n, std::size_t i) { return n >= i ? input[n - i] : 0.0; };
    for (std::size_t n = 0; n < len; ++n) {
        double window = 0.0;
        for (std::size_t i = 1; i <= 10; ++i) window += past(n, i);
        d[n] = 0.3 * past(n, 1) + 0.05 * past(n, 1) * window + 1.5 * u_at(n, 10) * u_at(n, 1) + 0.1;
    }
    return d;
}

TaskDataset narma10_dataset(int length, std::uint64_t seed, Split split)
{
    if (length <= 10) throw ConfigError("task.length", "NARMA10 needs more than 10 samples");
    TaskDataset ds;
    ds.task = "narma10";
    ds.meta["seed"] = std::to_string(seed);
    int regenerations = 0;
    for (std::uint64_t s = seed;; ++s, ++regenerations) {
        std::mt19937_64 prng{s};
        std::uniform_real_distribution<double> dist{0.0, 0.5};
        ds.input.resize(static_cast<std::size_t>(length));
        for (auto& u : ds.input) u = dist(prng);
        ds.target = narma10_target(ds.input);
        bool diverged = false;
        for (double d : ds.target)
            if (!(std::abs(d) <= narma_divergence_bound)) diverged = true;
        if (!diverged) {
            ds.meta["effective_seed"] = std::to_string(s);
            break;
        }
        if (regenerations > 1000) throw Error(ErrorCode::runtime, "NARMA10 keeps diverging");
    }
    ds.meta["regenerations"] = std::to_string(regenerations);
    ds.split = resolve_split(split, length, "task.split", benchmark_split);
    return ds;
}

// --- memory input ------------------------------------------------------------

TaskDataset memory_input(int length, std::uint64_t seed, Split split)
{
    if (length < 1) throw ConfigError("task.length", "must be positive");
    TaskDataset ds;
    ds.task = "capacity";
    std::mt19937_64 prng{seed};
    std::uniform_real_distribution<double> dist{-1.0, 1.0};
    ds.input.resize(static_cast<std::size_t>(length));
    for (auto& u : ds.input) u = dist(prng);
    ds.split = resolve_split(split, length, "task.split", benchmark_split);
    ds.meta["seed"] = std::to_string(seed);
    return ds;
}

// --- Mackey-Glass -------------------------------------------------------------

namespace {

bool is_integer_ratio(double num, double den, long& out)
{
    const double r = num / den;
    out = std::lround(r);
    return std::abs(r - static_cast<double>(out)) < 1e-9 * std::max(1.0, std::abs(r));
}

}  // namespace

void validate(const MackeyGlassParams& params)
{
    long ignored = 0;
    if (!(params.dt > 0)) throw ConfigError("task.dt", "must be > 0");
    if (!(params.tau > 0) || !is_integer_ratio(params.tau, params.dt, ignored))
        throw ConfigError("task.dt", "tau / dt must be a positive integer");
    if (!is_integer_ratio(1.0, params.dt, ignored))
        throw ConfigError("task.dt", "1 / dt must be an integer for unit-period sampling");
    if (!(params.washout_time >= 0)) throw ConfigError("task.washout_time", "must be >= 0");
    if (params.n_samples < 1) throw ConfigError("task.n_samples", "must be positive");
    if (!std::isfinite(params.a) || !std::isfinite(params.b) || !std::isfinite(params.c))
        throw ConfigError("task.a", "coefficients must be finite");
}

std::vector<double> integrate_mackey_glass(const MackeyGlassParams& params, double initial, int count)
{
    validate(params);
    long delay = 0;
    long per_unit = 0;
    is_integer_ratio(params.tau, params.dt, delay);
    is_integer_ratio(1.0, params.dt, per_unit);
    const long washout_steps = std::lround(params.washout_time / params.dt);
    const long total_steps = washout_steps + static_cast<long>(count - 1) * per_unit;

    const double a = params.a;
    const double b = params.b;
    const double c = params.c;
    const double dt = params.dt;
    auto rhs = [&](double u, double delayed) { return a * delayed / (1.0 + std::pow(delayed, c)) - b * u; };

    std::vector<double> grid(static_cast<std::size_t>(total_steps + 1));
    grid[0] = initial;
    auto history = [&](long j) { return j < 0 ? initial : grid[static_cast<std::size_t>(j)]; };

    for (long j = 0; j < total_steps; ++j) {
        const double u = grid[static_cast<std::size_t>(j)];
        const double d0 = history(j - delay);
        const double d1 = history(j - delay + 1);
        const double dmid = 0.5 * (d0 + d1);
        const double k1 = rhs(u, d0);
        const double k2 = rhs(u + 0.5 * dt * k1, dmid);
        const double k3 = rhs(u + 0.5 * dt * k2, dmid);
        const double k4 = rhs(u + dt * k3, d1);
        grid[static_cast<std::size_t>(j + 1)] = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    std::vector<double> samples(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
        const double v = grid[static_cast<std::size_t>(washout_steps + n * per_unit)];
        if (!std::isfinite(v))
            throw Error(ErrorCode::non_finite, "Mackey-Glass integration diverged at sample " + std::to_string(n));
        samples[static_cast<std::size_t>(n)] = v;
    }
    return samples;
}

TaskDataset mackey_glass_dataset(const MackeyGlassParams& params, int horizon)
{
    validate(params);
    if (horizon < 0) throw ConfigError("task.horizon", "must be >= 0");
    std::mt19937_64 prng{params.seed};
    std::uniform_real_distribution<double> dist{0.0, 1.0};
    double initial = 0.0;
    while (initial == 0.0) initial = dist(prng);

    const auto series = integrate_mackey_glass(params, initial, params.n_samples + horizon);
    TaskDataset ds;
    ds.task = "mackey_glass";
    ds.input.assign(series.begin(), series.begin() + params.n_samples);
    ds.target.assign(series.begin() + horizon, series.end());
    ds.split = resolve_split(params.split, params.n_samples, "task.split");
    ds.meta["seed"] = std::to_string(params.seed);
    ds.meta["initial"] = num(initial);
    ds.meta["horizon"] = std::to_string(horizon);
    return ds;
}

// --- series file ----------------------------------------------------------------

TaskDataset series_dataset(const std::string& path, SeriesColumn column, int horizon, Split split)
{
    if (horizon < 0) throw ConfigError("task.horizon", "must be >= 0");
    std::ifstream in{path};
    if (!in) throw Error(ErrorCode::io, "cannot open series file '" + path + "'");

    std::vector<double> values;
    std::string line;
    int line_no = 0;
    bool seen_data = false;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_csv_line(text);
        std::vector<double> parsed;
        bool ok = fields.size() == 1 || fields.size() == 2;
        for (const auto& f : fields) {
            double v = 0.0;
            if (!ok || !parse_double(f, v) || !std::isfinite(v)) {
                ok = false;
                break;
            }
            parsed.push_back(v);
        }
        if (!ok) {
            if (!seen_data && (fields.size() == 1 || fields.size() == 2)) {
                seen_data = true;  // header line
                width = fields.size();
                continue;
            }
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no)
                                              + ": expected one or two numeric columns");
        }
        if (width == 0) width = parsed.size();
        if (parsed.size() != width)
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": inconsistent column count");
        seen_data = true;
        const std::size_t index = column == SeriesColumn::real ? 0 : 1;
        if (index >= parsed.size())
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": no imaginary column");
        values.push_back(parsed[index]);
    }

    if (values.size() < static_cast<std::size_t>(horizon) + 1 || values.size() < 2)
        throw Error(ErrorCode::invalid_argument, "series too short for horizon " + std::to_string(horizon));

    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    const double var = population_variance(values);
    if (!(var > 0)) throw Error(ErrorCode::invalid_argument, "series column has zero variance");
    const double sd = std::sqrt(var);
    for (auto& v : values) v = (v - mean) / sd;

    const auto usable = values.size() - static_cast<std::size_t>(horizon);
    TaskDataset ds;
    ds.task = "series";
    ds.input.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(usable));
    ds.target.assign(values.begin() + horizon, values.end());
    ds.split = resolve_split(split, static_cast<int>(usable), "task.split");
    ds.meta["path"] = path;
    ds.meta["column"] = column == SeriesColumn::real ? "re" : "im";
    ds.meta["horizon"] = std::to_string(horizon);
    ds.meta["mean"] = num(mean);
    ds.meta["std"] = num(sd);
    return ds;
}

void write_dataset_csv(const TaskDataset& dataset, const std::string& path, const std::string& provenance)
{
    CsvWriter csv{path, provenance, "n,u,d"};
    for (std::size_t n = 0; n < dataset.input.size(); ++n)
        csv.row({std::to_string(n), num(dataset.input[n]),
                 dataset.target.empty() ? std::string{} : num(dataset.target[n])});
    csv.close();
}

TaskDataset read_dataset_csv(const std::string& path, Split split)
{
    std::ifstream in{path};
    if (!in) throw Error(ErrorCode::io, "cannot open dataset file '" + path + "'");
    TaskDataset ds;
    ds.task = "csv";
    std::string line;
    int line_no = 0;
    bool header = false;
    bool has_target = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_csv_line(text);
        if (!header) {
            if (fields.size() != 3 || fields[0] != "n" || fields[1] != "u" || fields[2] != "d")
                throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": expected header n,u,d");
            header = true;
            continue;
        }
        double u = 0.0;
        double d = 0.0;
        if (fields.size() != 3 || !parse_double(fields[1], u))
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": malformed row");
        if (fields[2].empty()) {
            has_target = false;
        } else if (!parse_double(fields[2], d)) {
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": malformed target");
        }
        ds.input.push_back(u);
        ds.target.push_back(d);
    }
    if (!has_target) ds.target.clear();
    ds.split = resolve_split(split, static_cast<int>(ds.input.size()), "task.split");
    ds.meta["path"] = path;
    return ds;
}

}  // namespace dlrc

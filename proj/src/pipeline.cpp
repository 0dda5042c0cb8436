#include "dlrc/pipeline.hpp"

#include "dlrc/error.hpp"

#include <cmath>
#include <limits>

namespace dlrc {

std::string_view to_string(TaskSpec::Kind kind)
{
    switch (kind) {
    case TaskSpec::Kind::channel: return "channel";
    case TaskSpec::Kind::narma10: return "narma10";
    case TaskSpec::Kind::capacity: return "capacity";
    case TaskSpec::Kind::mackey_glass: return "mackey_glass";
    case TaskSpec::Kind::series: return "series";
    case TaskSpec::Kind::csv: return "csv";
    }
    return "unknown";
}

std::optional<TaskSpec::Kind> parse_task_kind(std::string_view name)
{
    for (auto k : {TaskSpec::Kind::channel, TaskSpec::Kind::narma10, TaskSpec::Kind::capacity,
                   TaskSpec::Kind::mackey_glass, TaskSpec::Kind::series, TaskSpec::Kind::csv})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

MetricKind default_metric(const TaskSpec& task)
{
    return task.kind == TaskSpec::Kind::channel ? MetricKind::ser : MetricKind::nmse;
}

TaskDataset make_dataset(const TaskSpec& task, std::uint64_t seed)
{
    switch (task.kind) {
    case TaskSpec::Kind::channel: {
        auto params = task.channel;
        params.seed = seed;
        return channel_dataset(params);
    }
    case TaskSpec::Kind::narma10: return narma10_dataset(task.length, seed, task.split);
    case TaskSpec::Kind::capacity: return memory_input(task.length, seed, task.split);
    case TaskSpec::Kind::mackey_glass: {
        auto params = task.mackey_glass;
        params.seed = seed;
        return mackey_glass_dataset(params, task.horizon);
    }
    case TaskSpec::Kind::series: return series_dataset(task.path, task.column, task.horizon, task.split);
    case TaskSpec::Kind::csv: return read_dataset_csv(task.path, task.split);
    }
    throw Error(ErrorCode::invalid_argument, "unknown task");
}

namespace {

double metric_or_nan(MetricKind kind, std::span<const double> y, std::span<const double> d)
{
    if (d.empty() || (kind == MetricKind::nmse && d.size() < 2)) return std::numeric_limits<double>::quiet_NaN();
    return evaluate_metric(kind, y, d);
}

double nmse_or_nan(std::span<const double> y, std::span<const double> d)
{
    try {
        return nmse(y, d);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// NaN-aware "a better than b" for (metric, nmse) pairs.
bool better(double metric_a, double nmse_a, double metric_b, double nmse_b)
{
    auto key = [](double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; };
    if (key(metric_a) != key(metric_b)) return key(metric_a) < key(metric_b);
    return key(nmse_a) < key(nmse_b);
}

}  // namespace

PipelineResult run_pipeline(const TaskDataset& dataset, const Mask& mask, const ReservoirConfig& config,
                            const ReadoutOptions& readout, MetricKind metric, std::uint64_t seed)
{
    validate(dataset);
    if (dataset.target.empty())
        throw Error(ErrorCode::invalid_argument, "task '" + dataset.task + "' has no target sequence");
    if (readout.ridge_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty ridge grid");
    const int washout = config.washout;
    const auto& split = dataset.split;
    if (split.train <= washout)
        throw Error(ErrorCode::invalid_argument, "train split (" + std::to_string(split.train)
                                                     + ") must exceed the washout ("
                                                     + std::to_string(washout) + ")");

    const auto states = run_discrete(config, mask, dataset.input, seed);
    const std::span<const double> target{dataset.target};

    const int train_len = split.train - washout;
    const auto train_states = states.states.leftCols(train_len);
    const auto val_states = states.states.middleCols(train_len, split.validation);
    const auto test_states = states.states.middleCols(train_len + split.validation, split.test);
    const auto train_target = target.subspan(static_cast<std::size_t>(washout), static_cast<std::size_t>(train_len));
    const auto val_target = target.subspan(static_cast<std::size_t>(split.train), static_cast<std::size_t>(split.validation));
    const auto test_target = target.subspan(static_cast<std::size_t>(split.train + split.validation),
                                            static_cast<std::size_t>(split.test));

    RidgeSolver solver{train_states, readout.with_bias};
    PipelineResult best;
    best.metric = metric;
    bool have_best = false;
    double best_sel_metric = 0.0;
    double best_sel_nmse = 0.0;
    std::string last_failure;

    for (double ridge : readout.ridge_grid) {
        Readout r;
        try {
            r = solver.solve(train_target, ridge);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::singular) throw;
            last_failure = e.what();
            continue;
        }
        double sel_metric = 0.0;
        double sel_nmse = 0.0;
        if (split.validation > 0) {
            const auto y = predict(r, val_states);
            sel_metric = metric_or_nan(metric, y, val_target);
            sel_nmse = nmse_or_nan(y, val_target);
        } else {
            const auto y = predict(r, train_states);
            sel_metric = metric_or_nan(metric, y, train_target);
            sel_nmse = nmse_or_nan(y, train_target);
        }
        if (!have_best || better(sel_metric, sel_nmse, best_sel_metric, best_sel_nmse)) {
            have_best = true;
            best_sel_metric = sel_metric;
            best_sel_nmse = sel_nmse;
            best.readout = std::move(r);
        }
    }
    if (!have_best) throw Error(ErrorCode::singular, last_failure);

    const auto y_train = predict(best.readout, train_states);
    best.train_metric = metric_or_nan(metric, y_train, train_target);
    if (split.validation > 0) {
        const auto y_val = predict(best.readout, val_states);
        best.validation_metric = metric_or_nan(metric, y_val, val_target);
        best.validation_nmse = nmse_or_nan(y_val, val_target);
    } else {
        best.validation_metric = best.validation_nmse = std::numeric_limits<double>::quiet_NaN();
    }
    best.test_begin = split.train + split.validation;
    best.test_prediction = predict(best.readout, test_states);
    best.test_metric = metric_or_nan(metric, best.test_prediction, test_target);
    best.test_nmse = nmse_or_nan(best.test_prediction, test_target);
    return best;
}

}  // namespace dlrc

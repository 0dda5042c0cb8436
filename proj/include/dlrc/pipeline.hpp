#pragma once

// dataset -> reservoir -> ridge readout -> test metric, with the ridge
// penalty selected on the validation split.

#include "dlrc/mask.hpp"
#include "dlrc/readout.hpp"
#include "dlrc/reservoir.hpp"
#include "dlrc/tasks.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dlrc {

struct ReadoutOptions {
    std::vector<double> ridge_grid = default_ridge_grid();
    bool with_bias = true;
};

/// Which generator builds the dataset, and with what parameters.
struct TaskSpec {
    enum class Kind { channel, narma10, capacity, mackey_glass, series, csv };
    Kind kind = Kind::channel;
    ChannelParams channel;
    MackeyGlassParams mackey_glass;
    int length = 9000;  // narma10 / capacity
    Split split{};      // narma10 / capacity / series / csv; zero means default
    int horizon = 1;    // mackey_glass / series
    std::string path;   // series / csv
    SeriesColumn column = SeriesColumn::real;
    std::uint64_t seed = 1;
};

std::string_view to_string(TaskSpec::Kind kind);
std::optional<TaskSpec::Kind> parse_task_kind(std::string_view name);

/// SER for the channel task, NMSE otherwise.
MetricKind default_metric(const TaskSpec& task);

/// Builds the dataset using `seed` in place of task.seed.
TaskDataset make_dataset(const TaskSpec& task, std::uint64_t seed);
inline TaskDataset make_dataset(const TaskSpec& task) { return make_dataset(task, task.seed); }

struct PipelineResult {
    MetricKind metric = MetricKind::nmse;
    Readout readout;
    double train_metric = 0.0;
    double validation_metric = 0.0;
    double validation_nmse = 0.0;
    double test_metric = 0.0;
    double test_nmse = 0.0;
    /// Absolute dataset index of the first test sample.
    int test_begin = 0;
    std::vector<double> test_prediction;
};

/// Runs the discrete reservoir over the whole input. The washout consumes
/// the head of the train split; the readout is trained on the remainder of
/// the train split for every ridge value and the one with the best
/// (validation metric, validation NMSE) is kept. Without a validation
/// split the training metric decides.
PipelineResult run_pipeline(const TaskDataset& dataset, const Mask& mask, const ReservoirConfig& config,
                            const ReadoutOptions& readout, MetricKind metric, std::uint64_t seed);

}  // namespace dlrc

#pragma once

// Benchmark datasets: nonlinear channel equalization, NARMA10, memory
// capacity inputs, Mackey-Glass prediction and externally supplied series.

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dlrc {

struct Split {
    int train = 0;
    int validation = 0;
    int test = 0;
    int total() const { return train + validation + test; }
};

struct TaskDataset {
    std::vector<double> input;
    std::vector<double> target;  // empty for memory-capacity inputs
    Split split;
    std::string task;
    /// Generator parameters, seed and regeneration notes, as text.
    std::map<std::string, std::string> meta;

    std::size_t size() const { return input.size(); }
};

/// Throws if lengths or the split are inconsistent.
void validate(const TaskDataset& dataset);

// --- channel equalization -------------------------------------------------

struct ChannelParams {
    double snr_db = std::numeric_limits<double>::infinity();
    int n_symbols = 106009;
    std::uint64_t seed = 1;
    Split split{3000, 3000, 100000};
};

void validate(const ChannelParams& params);

/// Multipath taps for d(n+2) .. d(n-7).
inline constexpr std::array<double, 10> channel_taps{0.08, -0.12, 1.0, 0.18, -0.1,
                                                     0.091, -0.05, 0.04, 0.03, 0.01};

/// Filter output q for every index with full support: element m uses
/// symbols[m .. m+9], i.e. q(n) at n = m + 7. Returns symbols.size() - 9 values.
std::vector<double> channel_filter(std::span<const double> symbols);

/// Receiver distortion q + 0.036 q^2 + 0.011 q^3 (noiseless).
std::vector<double> channel_distort(std::span<const double> q);

/// i.i.d. symbols from {-3, -1, 1, 3}; n_symbols - 9 aligned (u, d) pairs.
TaskDataset channel_dataset(const ChannelParams& params);

/// Same construction from a caller-supplied symbol stream.
TaskDataset channel_dataset_from_symbols(std::span<const double> symbols, double snr_db,
                                         std::uint64_t noise_seed, Split split);

// --- NARMA10 ----------------------------------------------------------------

/// d(n) = 0.3 d(n-1) + 0.05 d(n-1) sum_{i=1..10} d(n-i) + 1.5 u(n-10) u(n-1) + 0.1
/// from zero history (terms before the start of the sequence are zero).
std::vector<double> narma10_target(std::span<const double> input);

inline constexpr double narma_divergence_bound = 10.0;

/// Input i.i.d. uniform on [0, 0.5]. Regenerates with seed + 1 while any
/// |d(n)| exceeds the divergence bound; the count lands in meta.
TaskDataset narma10_dataset(int length, std::uint64_t seed, Split split = {});  // zero split: benchmark_split

// --- memory capacity --------------------------------------------------------

/// Input i.i.d. uniform on [-1, 1], no target.
TaskDataset memory_input(int length, std::uint64_t seed, Split split = {});

// --- Mackey-Glass -----------------------------------------------------------

struct MackeyGlassParams {
    double a = 2.0;
    double b = 1.0;
    double tau = 17.0;
    double c = 10.0;
    double dt = 0.1;
    int n_samples = 4500;
    double washout_time = 1000.0;
    std::uint64_t seed = 1;
    Split split{2000, 500, 2000};
};

void validate(const MackeyGlassParams& params);

/// du/dt = a u(t - tau) / (1 + u(t - tau)^c) - b u, classical RK4 with step
/// dt and constant history `initial`. Delayed values at the half steps are
/// linear interpolations of the stored grid. Discards `washout_time`, then
/// returns `count` samples at unit period.
std::vector<double> integrate_mackey_glass(const MackeyGlassParams& params, double initial,
                                           int count);

/// Series from a random initial value in (0, 1); target u(n + horizon).
TaskDataset mackey_glass_dataset(const MackeyGlassParams& params, int horizon);

// --- external series ---------------------------------------------------------

enum class SeriesColumn { real, imaginary };

/// Reads a CSV of one or two numeric columns (optional header), standardizes
/// the selected column and builds input u(n), target u(n + horizon). An
/// all-zero split is replaced by a 60/20/20 partition.
TaskDataset series_dataset(const std::string& path, SeriesColumn column, int horizon,
                           Split split = {});

/// Writes `n,u,d` rows.
void write_dataset_csv(const TaskDataset& dataset, const std::string& path,
                       const std::string& provenance = {});

/// Reads a CSV written by write_dataset_csv.
TaskDataset read_dataset_csv(const std::string& path, Split split = {});

/// 60/20/20 partition with every part non-empty where possible.
Split default_split(int length);

/// 3:1:5 partition used by NARMA10 and memory-capacity inputs when no split
/// is given (3000/1000/5000 at the default length of 9000).
Split benchmark_split(int length);

}  // namespace dlrc

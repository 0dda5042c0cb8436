#pragma once

// Grid search over the discrete mask/topology parameters (k, F1, F2) and the
// continuous gains, with replicated datasets, checkpointing and exports.

#include "dlrc/pipeline.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dlrc {

struct SweepPoint {
    int k = 1;
    int f1 = 0;  // 0 when the family has no first frequency
    int f2 = 0;  // 0 unless two_sine
    double alpha = 0.0;
    double beta = 0.0;
    double phase = 0.0;

    auto operator<=>(const SweepPoint&) const = default;
};

/// Which mean picks the best point: the test metric, or the validation
/// metric with validation NMSE as tie-break.
enum class MetricSelection { test, validation };

struct SweepGrid {
    MaskFamily family = MaskFamily::two_sine;
    int n_nodes = 53;
    std::uint64_t mask_seed = 1;
    std::vector<int> k_values;
    std::vector<int> f1_values;
    std::vector<int> f2_values;
    std::vector<double> alpha_values;
    std::vector<double> beta_values;
    std::vector<double> phase_values{0.0};
    /// Nonlinearity kind, saturation, noise and washout; gains and k come from the point.
    ReservoirConfig base;
    ReadoutOptions readout;
    TaskSpec task;
    MetricKind metric = MetricKind::ser;
    int replicas = 3;
    /// Replica r uses dataset seed task.seed + r, random-mask seed
    /// mask_seed + r and reservoir noise seed reservoir_seed + r.
    std::uint64_t reservoir_seed = 0;
    MetricSelection select_on = MetricSelection::test;
};

/// Default gain axes: alpha 0.5..0.95 step 0.05, beta log grid 1e-2..1e1.
std::vector<double> default_alpha_grid();
std::vector<double> default_beta_grid();

void validate(const SweepGrid& grid);

/// All evaluated points in lexicographic (k, f1, f2, alpha, beta, phase)
/// order. Axes are sorted and deduplicated; two_sine points with f1 == f2
/// are skipped; frequency axes collapse to 0 where the family has none.
std::vector<SweepPoint> enumerate_points(const SweepGrid& grid);

/// Mask and reservoir configuration for one point and replica.
Mask point_mask(const SweepGrid& grid, const SweepPoint& point, int replica);
ReservoirConfig point_config(const SweepGrid& grid, const SweepPoint& point);

struct ReplicaOutcome {
    double value = 0.0;       // test metric, NaN on failure
    double validation = 0.0;  // validation metric
    double validation_nmse = 0.0;
    double ridge = 0.0;
    std::string error;
};

struct SweepRow {
    SweepPoint point;
    std::vector<ReplicaOutcome> replicas;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation over replicas
    bool failed = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<std::size_t> best;  // index into rows
    std::string config_hash;
    std::vector<std::uint64_t> dataset_seeds;
    bool complete = true;

    const SweepRow& best_row() const { return rows.at(best.value()); }
};

struct SweepOptions {
    int jobs = 1;
    /// Append-only record of completed points; empty disables it.
    std::string checkpoint_path;
    bool resume = false;
    /// Hash identifying the sweep definition inside the checkpoint.
    std::string config_hash;
    /// Stop scheduling after this many newly computed points (0 = no limit).
    std::size_t stop_after = 0;
    /// Permutes the processing order; results must not depend on it.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Evaluates every point and replica. Failures are recorded in their row.
/// Rows come back in enumerate_points order regardless of scheduling.
SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options = {});

/// Recomputes mean, std, failure flags and best from the per-replica outcomes.
void aggregate(SweepResult& result, MetricSelection selection);
void aggregate(SweepResult& result);

/// `k,f1,f2,alpha,beta,phase,lambda,replica,metric,value`, one row per replica.
void write_sweep_csv(const SweepResult& result, MetricKind metric, const std::string& path,
                     const std::string& provenance = {});

enum class SweepAxis { k, f1, f2, alpha, beta, phase };
std::optional<SweepAxis> parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct LandscapeCell {
    double axis1 = 0.0;
    double axis2 = 0.0;
    double metric = 0.0;
};

/// Minimum mean metric over all other axes for every (axis1, axis2) pair
/// present in the result, sorted by (axis1, axis2).
std::vector<LandscapeCell> landscape(const SweepResult& result, SweepAxis axis1, SweepAxis axis2);

void write_landscape_csv(const std::vector<LandscapeCell>& cells, SweepAxis axis1, SweepAxis axis2,
                         const std::string& path, const std::string& provenance = {});

struct SnrPoint {
    double snr_db = 0.0;
    double ser_mean = 0.0;
    double ser_std = 0.0;
    SweepPoint best;
};

struct SnrCurve {
    std::vector<SnrPoint> points;
    std::vector<std::string> warnings;
};

/// Channel task only: for each SNR, sweeps the grid's gain axes at its
/// (single) mask point and keeps the best mean SER.
SnrCurve snr_curve(const SweepGrid& grid, const std::vector<double>& snr_list, int jobs = 1);

void write_snr_curve_csv(const SnrCurve& curve, const std::string& path, const std::string& provenance = {});

}  // namespace dlrc

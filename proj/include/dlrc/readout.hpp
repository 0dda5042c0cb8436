#pragma once

// Linear readout y(n) = bias + sum_i w_i x_i(n), trained by ridge regression,
// and the task metrics built on it.

#include "dlrc/mask.hpp"
#include "dlrc/reservoir.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dlrc {

struct Readout {
    Eigen::VectorXd weights;
    double bias = 0.0;
    double ridge = 0.0;
    bool has_bias = true;
};

/// Minimizes sum_n (d(n) - y(n))^2 + ridge * |w|^2, bias unpenalized.
/// Columns of `states` are time steps. Throws ErrorCode::singular when the
/// system is rank deficient (only possible at ridge = 0).
Readout train(const Eigen::Ref<const Eigen::MatrixXd>& states, std::span<const double> targets,
              double ridge, bool with_bias = true);

inline Readout train(const StateMatrix& states, std::span<const double> targets, double ridge,
                     bool with_bias = true)
{
    return train(states.states, targets, ridge, with_bias);
}

std::vector<double> predict(const Readout& readout, const Eigen::Ref<const Eigen::MatrixXd>& states);

inline std::vector<double> predict(const Readout& readout, const StateMatrix& states)
{
    return predict(readout, states.states);
}

/// Normal equations accumulated once and solved for many ridge values or
/// right-hand sides. Used by the ridge search and the capacity suite, where
/// the same states are regressed against many targets.
class RidgeSolver {
public:
    RidgeSolver(const Eigen::Ref<const Eigen::MatrixXd>& states, bool with_bias);

    /// Throws ErrorCode::singular on a rank-deficient system.
    Readout solve(std::span<const double> targets, double ridge) const;

    /// Solves for several targets (rows of `targets_by_row`) at one ridge value.
    std::vector<Readout> solve_many(const Eigen::Ref<const Eigen::MatrixXd>& targets_by_row,
                                    double ridge) const;

    int samples() const { return static_cast<int>(design_.cols()); }

private:
    Eigen::MatrixXd design_;  // N x L, row-centered when the bias is on
    Eigen::MatrixXd gram_;
    Eigen::VectorXd means_;
    bool with_bias_;
};

/// Mean squared error divided by the population variance of `d`.
double nmse(std::span<const double> y, std::span<const double> d);

/// Nearest symbol of {-3, -1, 1, 3}; thresholds -2, 0, 2, ties upward.
double quantize_symbol(double y);

/// Fraction of outputs whose nearest symbol differs from `d`.
double ser(std::span<const double> y, std::span<const double> d);

enum class MetricKind { nmse, ser };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);
double evaluate_metric(MetricKind kind, std::span<const double> y, std::span<const double> d);

void write_readout_csv(const Readout& readout, const std::string& path,
                       const std::string& provenance = {});

// --- memory capacities ---------------------------------------------------

enum class CapacityFamily { linear, quadratic, cross };

std::string_view to_string(CapacityFamily family);

struct CapacityLags {
    int linear_max = 50;     // i = 1..linear_max (plus i = 0 when include_zero)
    int quadratic_max = 20;  // i = 1..quadratic_max
    int cross_max = 15;      // 1 <= i < j <= cross_max
    bool include_zero = false;
};

struct CapacityEntry {
    CapacityFamily family;
    int i = 0;
    int j = -1;  // cross family only
    double raw = 0.0;
    double floored = 0.0;
    double ridge = 0.0;
};

struct CapacitySplit {
    int train = 3000;
    int validation = 1000;
    int test = 5000;
};

struct CapacityResult {
    std::vector<CapacityEntry> entries;
    double linear_total = 0.0;
    double quadratic_total = 0.0;
    double cross_total = 0.0;
    double total() const { return linear_total + quadratic_total + cross_total; }
};

/// Default ridge grid used when selecting the penalty on a validation split.
std::vector<double> default_ridge_grid();

/// Capacities computed on states already produced from `input` (states
/// column n corresponds to input index washout + n). Each target is trained
/// on the train split with its ridge chosen on the validation split; the
/// capacity is 1 - test NMSE, floored at 0 in `floored`.
CapacityResult capacity_suite(const StateMatrix& states, std::span<const double> input,
                              const CapacityLags& lags, const CapacitySplit& split,
                              std::span<const double> ridge_grid, bool with_bias = true);

/// Runs the reservoir on `input` first.
CapacityResult capacity_suite(const ReservoirConfig& config, const Mask& mask,
                              std::span<const double> input, const CapacityLags& lags,
                              const CapacitySplit& split, std::span<const double> ridge_grid,
                              std::uint64_t seed, bool with_bias = true);

void write_capacity_csv(const CapacityResult& result, const std::string& path,
                        const std::string& provenance = {});

}  // namespace dlrc

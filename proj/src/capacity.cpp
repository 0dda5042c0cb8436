#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"
#include "dlrc/readout.hpp"

#include <algorithm>
#include <limits>

namespace dlrc {

std::string_view to_string(CapacityFamily family)
{
    switch (family) {
    case CapacityFamily::linear: return "linear";
    case CapacityFamily::quadratic: return "quadratic";
    case CapacityFamily::cross: return "cross";
    }
    return "unknown";
}

namespace {

// Row-wise NMSE of predictions (targets x samples) against targets.
Eigen::VectorXd rowwise_nmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& target)
{
    const Eigen::VectorXd mean = target.rowwise().mean();
    const Eigen::VectorXd var = (target.colwise() - mean).array().square().rowwise().mean();
    const Eigen::VectorXd mse = (predicted - target).array().square().rowwise().mean();
    return mse.array() / var.array();
}

}  // namespace

CapacityResult capacity_suite(const StateMatrix& states, std::span<const double> input,
                              const CapacityLags& lags, const CapacitySplit& split,
                              std::span<const double> ridge_grid, bool with_bias)
{
    const int washout = states.config.washout;
    const int total = static_cast<int>(input.size());
    if (states.input_len() != total - washout)
        throw Error(ErrorCode::dimension_mismatch, "states do not match the input length");
    if (split.train + split.validation + split.test != total)
        throw Error(ErrorCode::dimension_mismatch, "capacity split must sum to the input length");
    if (lags.linear_max < 0 || lags.quadratic_max < 0 || lags.cross_max < 0)
        throw Error(ErrorCode::invalid_argument, "capacity lags must be >= 0");
    if (ridge_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty ridge grid");

    const int max_lag = std::max({lags.linear_max, lags.quadratic_max, lags.cross_max});
    const int start = std::max(washout, max_lag);
    if (start >= split.train)
        throw Error(ErrorCode::invalid_argument,
                    "train split must exceed max(washout, largest lag)");
    if (split.validation < 2 || split.test < 2)
        throw Error(ErrorCode::invalid_argument, "validation and test splits need >= 2 samples");

    std::vector<CapacityEntry> entries;
    for (int i = lags.include_zero ? 0 : 1; i <= lags.linear_max; ++i)
        entries.push_back({CapacityFamily::linear, i});
    for (int i = 1; i <= lags.quadratic_max; ++i)
        entries.push_back({CapacityFamily::quadratic, i});
    for (int i = 1; i <= lags.cross_max; ++i)
        for (int j = i + 1; j <= lags.cross_max; ++j)
            entries.push_back({CapacityFamily::cross, i, j});

    CapacityResult result;
    if (entries.empty()) return result;

    // targets(t, n) for absolute input index n
    const auto n_targets = static_cast<Eigen::Index>(entries.size());
    Eigen::MatrixXd targets(n_targets, total - start);
    for (Eigen::Index t = 0; t < n_targets; ++t) {
        const auto& e = entries[static_cast<std::size_t>(t)];
        for (int n = start; n < total; ++n) {
            const double ui = input[static_cast<std::size_t>(n - e.i)];
            double value = ui;
            if (e.family == CapacityFamily::quadratic) value = 3.0 * ui * ui - 1.0;
            if (e.family == CapacityFamily::cross) value = ui * input[static_cast<std::size_t>(n - e.j)];
            targets(t, n - start) = value;
        }
    }

    const int train_len = split.train - start;
    const int val_begin = split.train - start;
    const int test_begin = split.train + split.validation - start;
    auto cols = [&](int begin, int len) { return states.states.middleCols(begin + start - washout, len); };

    const auto train_states = cols(0, train_len);
    const auto val_states = cols(val_begin, split.validation);
    const auto test_states = cols(test_begin, split.test);

    RidgeSolver solver{train_states, with_bias};
    Eigen::VectorXd best_val = Eigen::VectorXd::Constant(n_targets, std::numeric_limits<double>::infinity());
    Eigen::VectorXd best_test = Eigen::VectorXd::Constant(n_targets, std::numeric_limits<double>::quiet_NaN());
    Eigen::VectorXd best_ridge = Eigen::VectorXd::Zero(n_targets);
    bool any_solved = false;
    std::string last_failure;

    for (double ridge : ridge_grid) {
        std::vector<Readout> readouts;
        try {
            readouts = solver.solve_many(targets.leftCols(train_len), ridge);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::singular) throw;
            last_failure = e.what();
            continue;
        }
        any_solved = true;
        Eigen::MatrixXd weights(n_targets, states.n_nodes());
        Eigen::VectorXd biases(n_targets);
        for (Eigen::Index t = 0; t < n_targets; ++t) {
            weights.row(t) = readouts[static_cast<std::size_t>(t)].weights.transpose();
            biases[t] = readouts[static_cast<std::size_t>(t)].bias;
        }
        Eigen::MatrixXd val_pred = weights * val_states;
        val_pred.colwise() += biases;
        const Eigen::VectorXd val_nmse = rowwise_nmse(val_pred, targets.middleCols(val_begin, split.validation));

        Eigen::MatrixXd test_pred = weights * test_states;
        test_pred.colwise() += biases;
        const Eigen::VectorXd test_nmse = rowwise_nmse(test_pred, targets.middleCols(test_begin, split.test));

        for (Eigen::Index t = 0; t < n_targets; ++t) {
            if (val_nmse[t] < best_val[t]) {
                best_val[t] = val_nmse[t];
                best_test[t] = test_nmse[t];
                best_ridge[t] = ridge;
            }
        }
    }
    if (!any_solved) throw Error(ErrorCode::singular, last_failure);

    for (Eigen::Index t = 0; t < n_targets; ++t) {
        auto& e = entries[static_cast<std::size_t>(t)];
        e.raw = 1.0 - best_test[t];
        e.floored = std::max(0.0, e.raw);
        e.ridge = best_ridge[t];
        switch (e.family) {
        case CapacityFamily::linear: result.linear_total += e.floored; break;
        case CapacityFamily::quadratic: result.quadratic_total += e.floored; break;
        case CapacityFamily::cross: result.cross_total += e.floored; break;
        }
    }
    result.entries = std::move(entries);
    return result;
}

CapacityResult capacity_suite(const ReservoirConfig& config, const Mask& mask,
                              std::span<const double> input, const CapacityLags& lags,
                              const CapacitySplit& split, std::span<const double> ridge_grid,
                              std::uint64_t seed, bool with_bias)
{
    const auto states = run_discrete(config, mask, input, seed);
    return capacity_suite(states, input, lags, split, ridge_grid, with_bias);
}

void write_capacity_csv(const CapacityResult& result, const std::string& path,
                        const std::string& provenance)
{
    CsvWriter csv{path, provenance, "family,i,j,raw_c,floored_c"};
    for (const auto& e : result.entries)
        csv.row({to_string(e.family), std::to_string(e.i), e.j < 0 ? std::string{} : std::to_string(e.j),
                 format_number(e.raw), format_number(e.floored)});
    csv.close();
}

}  // namespace dlrc

#include "dlrc/readout.hpp"

#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dlrc {

namespace {

// Pivot-ratio floor below which the normal equations count as singular.
double singular_threshold(Eigen::Index n)
{
    return static_cast<double>(std::max<Eigen::Index>(n, 1)) * std::numeric_limits<double>::epsilon();
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v)
{
    return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

RidgeSolver::RidgeSolver(const Eigen::Ref<const Eigen::MatrixXd>& states, bool with_bias)
  : with_bias_{with_bias}
{
    if (states.cols() == 0) throw Error(ErrorCode::dimension_mismatch, "no training samples");
    design_ = states;
    if (with_bias_) {
        // Centering makes the unpenalized bias exact and improves conditioning.
        Eigen::VectorXd mean = design_.rowwise().mean();
        design_.colwise() -= mean;
        means_ = std::move(mean);
    }
    gram_ = design_ * design_.transpose();
}

Readout RidgeSolver::solve(std::span<const double> targets, double ridge) const
{
    Eigen::MatrixXd row = as_vector(targets).transpose();
    return solve_many(row, ridge).front();
}

std::vector<Readout> RidgeSolver::solve_many(const Eigen::Ref<const Eigen::MatrixXd>& targets_by_row,
                                             double ridge) const
{
    if (targets_by_row.cols() != design_.cols())
        throw Error(ErrorCode::dimension_mismatch,
                    "targets length " + std::to_string(targets_by_row.cols())
                        + " differs from state length " + std::to_string(design_.cols()));
    if (!(ridge >= 0) || !std::isfinite(ridge))
        throw Error(ErrorCode::invalid_argument, "ridge must be finite and >= 0");

    Eigen::VectorXd target_means = Eigen::VectorXd::Zero(targets_by_row.rows());
    Eigen::MatrixXd rhs;
    if (with_bias_) {
        target_means = targets_by_row.rowwise().mean();
        rhs = design_ * (targets_by_row.colwise() - target_means).transpose();
    } else {
        rhs = design_ * targets_by_row.transpose();
    }

    Eigen::MatrixXd system = gram_;
    system.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > singular_threshold(system.rows())))
        throw Error(ErrorCode::singular, "readout normal equations are singular; use ridge > 0");
    Eigen::MatrixXd weights = ldlt.solve(rhs);
    if (!weights.allFinite()) throw Error(ErrorCode::singular, "readout solve produced non-finite weights");

    std::vector<Readout> out;
    out.reserve(static_cast<std::size_t>(targets_by_row.rows()));
    for (Eigen::Index t = 0; t < targets_by_row.rows(); ++t) {
        Readout r;
        r.weights = weights.col(t);
        r.ridge = ridge;
        r.has_bias = with_bias_;
        r.bias = with_bias_ ? target_means[t] - r.weights.dot(means_) : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

Readout train(const Eigen::Ref<const Eigen::MatrixXd>& states, std::span<const double> targets,
              double ridge, bool with_bias)
{
    if (static_cast<Eigen::Index>(targets.size()) != states.cols())
        throw Error(ErrorCode::dimension_mismatch, "targets length differs from state length");
    return RidgeSolver{states, with_bias}.solve(targets, ridge);
}

std::vector<double> predict(const Readout& readout, const Eigen::Ref<const Eigen::MatrixXd>& states)
{
    if (states.rows() != readout.weights.size())
        throw Error(ErrorCode::dimension_mismatch, "readout has " + std::to_string(readout.weights.size())
                                                       + " weights but states have "
                                                       + std::to_string(states.rows()) + " nodes");
    std::vector<double> y(static_cast<std::size_t>(states.cols()));
    Eigen::Map<Eigen::RowVectorXd> out(y.data(), states.cols());
    out.noalias() = readout.weights.transpose() * states;
    out.array() += readout.bias;
    return y;
}

double nmse(std::span<const double> y, std::span<const double> d)
{
    if (y.size() != d.size()) throw Error(ErrorCode::dimension_mismatch, "nmse: length mismatch");
    if (d.size() < 2) throw Error(ErrorCode::invalid_argument, "nmse: need at least two samples");
    const auto n = static_cast<double>(d.size());
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double var = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        var += (d[i] - mean) * (d[i] - mean);
        err += (d[i] - y[i]) * (d[i] - y[i]);
    }
    var /= n;
    if (!(var > 0)) throw Error(ErrorCode::invalid_argument, "nmse: target has zero variance");
    return err / n / var;
}

double quantize_symbol(double y)
{
    if (y < -2.0) return -3.0;
    if (y < 0.0) return -1.0;
    if (y < 2.0) return 1.0;
    return 3.0;
}

double ser(std::span<const double> y, std::span<const double> d)
{
    if (y.size() != d.size()) throw Error(ErrorCode::dimension_mismatch, "ser: length mismatch");
    if (d.empty()) return 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (quantize_symbol(y[i]) != d[i]) ++errors;
    return static_cast<double>(errors) / static_cast<double>(d.size());
}

std::string_view to_string(MetricKind kind) { return kind == MetricKind::ser ? "ser" : "nmse"; }

std::optional<MetricKind> parse_metric(std::string_view name)
{
    if (name == "ser") return MetricKind::ser;
    if (name == "nmse") return MetricKind::nmse;
    return std::nullopt;
}

double evaluate_metric(MetricKind kind, std::span<const double> y, std::span<const double> d)
{
    return kind == MetricKind::ser ? ser(y, d) : nmse(y, d);
}

void write_readout_csv(const Readout& readout, const std::string& path, const std::string& provenance)
{
    CsvWriter csv{path, provenance, "i,w"};
    for (Eigen::Index i = 0; i < readout.weights.size(); ++i)
        csv.row({std::to_string(i + 1), format_number(readout.weights[i])});
    csv.row({"bias", format_number(readout.bias)});
    csv.close();
}

std::vector<double> default_ridge_grid() { return {0.0, 1e-9, 1e-7, 1e-5, 1e-3, 1e-1}; }

}  // namespace dlrc

#include "dlrc/mask.hpp"

#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace dlrc {

std::string_view to_string(MaskFamily family)
{
    switch (family) {
    case MaskFamily::random_uniform: return "random_uniform";
    case MaskFamily::random_binary: return "random_binary";
    case MaskFamily::single_sine: return "single_sine";
    case MaskFamily::two_sine: return "two_sine";
    }
    return "unknown";
}

std::optional<MaskFamily> parse_mask_family(std::string_view name)
{
    if (name == "random_uniform") return MaskFamily::random_uniform;
    if (name == "random_binary") return MaskFamily::random_binary;
    if (name == "single_sine") return MaskFamily::single_sine;
    if (name == "two_sine") return MaskFamily::two_sine;
    return std::nullopt;
}

void validate(const MaskSpec& spec)
{
    if (spec.n_nodes < 2) throw ConfigError("mask.n_nodes", "must be at least 2");
    if (!is_sine_family(spec.family)) return;
    if (spec.f1 < 1 || spec.f1 > spec.n_nodes)
        throw ConfigError("mask.f1", "frequency index must lie in [1, n_nodes]");
    if (spec.family == MaskFamily::two_sine) {
        if (spec.f2 < 1 || spec.f2 > spec.n_nodes)
            throw ConfigError("mask.f2", "frequency index must lie in [1, n_nodes]");
        if (spec.f1 == spec.f2)
            throw ConfigError("mask.f2", "two_sine masks require f1 != f2");
    }
}

Mask::Mask(MaskSpec spec, std::vector<double> coefficients)
  : spec_{spec}, coefficients_{std::move(coefficients)}
{
    if (static_cast<int>(coefficients_.size()) != spec_.n_nodes)
        throw Error(ErrorCode::dimension_mismatch, "mask length differs from n_nodes");
}

namespace {

double harmonic(int i, int f, int n)
{
    return std::sin(2.0 * std::numbers::pi * static_cast<double>(i) * f / n);
}

}  // namespace

Mask generate_mask(const MaskSpec& spec)
{
    validate(spec);
    const int n = spec.n_nodes;
    std::vector<double> m(static_cast<std::size_t>(n));
    switch (spec.family) {
    case MaskFamily::single_sine:
        for (int i = 1; i <= n; ++i) m[i - 1] = harmonic(i, spec.f1, n);
        break;
    case MaskFamily::two_sine:
        for (int i = 1; i <= n; ++i) m[i - 1] = harmonic(i, spec.f1, n) + harmonic(i, spec.f2, n);
        break;
    case MaskFamily::random_uniform: {
        std::mt19937_64 prng{spec.seed};
        std::uniform_real_distribution<double> dist{-1.0, 1.0};
        for (auto& v : m) v = dist(prng);
        break;
    }
    case MaskFamily::random_binary: {
        std::mt19937_64 prng{spec.seed};
        for (auto& v : m) v = (prng() >> 63) ? 1.0 : -1.0;
        break;
    }
    }
    return Mask{spec, std::move(m)};
}

Mask make_step_mask(std::vector<double> coefficients)
{
    MaskSpec spec;
    spec.family = MaskFamily::random_uniform;
    spec.n_nodes = static_cast<int>(coefficients.size());
    spec.seed = 0;
    return Mask{spec, std::move(coefficients)};
}

double continuous_mask_value(const MaskSpec& spec, double t, double t_prime)
{
    if (!is_sine_family(spec.family))
        throw Error(ErrorCode::invalid_argument, "random masks need their coefficients");
    // Reduce to one period first so the phase stays accurate for large t.
    double phase = std::fmod(t / t_prime, 1.0);
    if (phase < 0) phase += 1.0;
    const double w = 2.0 * std::numbers::pi * phase;
    double value = std::sin(w * spec.f1);
    if (spec.family == MaskFamily::two_sine) value += std::sin(w * spec.f2);
    return value;
}

double continuous_mask_value(const Mask& mask, double t, double t_prime)
{
    if (is_sine_family(mask.spec().family)) return continuous_mask_value(mask.spec(), t, t_prime);
    const int n = mask.size();
    double phase = std::fmod(t / t_prime, 1.0);
    if (phase < 0) phase += 1.0;
    auto slot = static_cast<int>(std::floor(phase * n));
    if (slot >= n) slot = n - 1;
    return mask.coefficients()[static_cast<std::size_t>(slot)];
}

DegeneracyReport mask_degeneracy_report(const Mask& mask, double tolerance)
{
    DegeneracyReport report;
    const auto& m = mask.coefficients();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (std::abs(m[i] - m[j]) < tolerance)
                report.duplicate_pairs.emplace_back(static_cast<int>(i + 1), static_cast<int>(j + 1));

    const auto& spec = mask.spec();
    if (is_sine_family(spec.family)) {
        report.gcd_f1_n = std::gcd(spec.f1, spec.n_nodes);
        if (spec.family == MaskFamily::two_sine) {
            report.gcd_f2_n = std::gcd(spec.f2, spec.n_nodes);
            report.gcd_sum_n = std::gcd(spec.f1 + spec.f2, spec.n_nodes);
            report.gcd_diff_n = std::gcd(std::abs(spec.f1 - spec.f2), spec.n_nodes);
        }
    }
    return report;
}

void write_mask_csv(const Mask& mask, const std::string& path, const std::string& provenance)
{
    CsvWriter csv{path, provenance, "i,m_i"};
    for (int i = 1; i <= mask.size(); ++i)
        csv.row({std::to_string(i), format_number(mask.at_node(i))});
    csv.close();
}

}  // namespace dlrc

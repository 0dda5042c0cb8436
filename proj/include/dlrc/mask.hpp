#pragma once

// Input masks for the time-multiplexed reservoir: random step masks and the
// harmonic (one or two sine) masks, in discrete and continuous-time form.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dlrc {

enum class MaskFamily { random_uniform, random_binary, single_sine, two_sine };

std::string_view to_string(MaskFamily family);
/// Accepts `random_uniform`, `random_binary`, `single_sine`, `two_sine`.
std::optional<MaskFamily> parse_mask_family(std::string_view name);

inline bool is_sine_family(MaskFamily family)
{
    return family == MaskFamily::single_sine || family == MaskFamily::two_sine;
}

struct MaskSpec {
    MaskFamily family = MaskFamily::two_sine;
    int n_nodes = 53;
    int f1 = 3;
    int f2 = 5;
    std::uint64_t seed = 1;
};

/// Throws ConfigError naming the first violated field.
void validate(const MaskSpec& spec);

class Mask {
public:
    Mask(MaskSpec spec, std::vector<double> coefficients);

    const MaskSpec& spec() const noexcept { return spec_; }
    /// Zero-based storage: coefficients()[i - 1] holds m_i, i = 1..N.
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    int size() const noexcept { return static_cast<int>(coefficients_.size()); }
    /// Node index i in 1..N.
    double at_node(int i) const { return coefficients_.at(static_cast<std::size_t>(i - 1)); }

private:
    MaskSpec spec_;
    std::vector<double> coefficients_;
};

Mask generate_mask(const MaskSpec& spec);

/// Mask built from explicit coefficients (family recorded as random_uniform,
/// evaluated as a step function in continuous time).
Mask make_step_mask(std::vector<double> coefficients);

/// Continuous-time mask m(t) with period t_prime. Sine families evaluate the
/// harmonic form directly; random families use the step form, slot
/// [i*theta, (i+1)*theta) carrying m_{i+1}.
double continuous_mask_value(const Mask& mask, double t, double t_prime);

/// Sine-family convenience overload; needs no coefficient table.
double continuous_mask_value(const MaskSpec& spec, double t, double t_prime);

struct DegeneracyReport {
    /// Node pairs (i, j), 1-based, i < j, with |m_i - m_j| below tolerance.
    std::vector<std::pair<int, int>> duplicate_pairs;
    int gcd_f1_n = 0;
    int gcd_f2_n = 0;        // two_sine only
    int gcd_sum_n = 0;       // gcd(F1 + F2, N), two_sine only
    int gcd_diff_n = 0;      // gcd(|F1 - F2|, N), two_sine only
    bool all_distinct() const { return duplicate_pairs.empty(); }
};

inline constexpr double duplicate_tolerance = 1e-12;

DegeneracyReport mask_degeneracy_report(const Mask& mask, double tolerance = duplicate_tolerance);

/// CSV with header `i,m_i`, one coefficient per line, i = 1..N.
void write_mask_csv(const Mask& mask, const std::string& path, const std::string& provenance = {});

}  // namespace dlrc

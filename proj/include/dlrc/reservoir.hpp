#pragma once

// Delay-line reservoir with a single nonlinear node, time multiplexed over N
// virtual nodes. The loop delay exceeds the input hold period by k node
// durations, so node i couples to node i - k of the previous step and the
// first k nodes wrap around to the step before that.

#include "dlrc/mask.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dlrc {

enum class NonlinearityKind { sine, tanh, saturating_gain };

std::string_view to_string(NonlinearityKind kind);
std::optional<NonlinearityKind> parse_nonlinearity(std::string_view name);

struct NonlinearitySpec {
    NonlinearityKind kind = NonlinearityKind::sine;
    /// Offset inside the sine argument: f(x) = sin(x + phase).
    double phase = 0.0;
    /// Saturation level s of f(x) = x / (1 + |x| / s).
    double saturation = 1.0;

    double operator()(double x) const
    {
        switch (kind) {
        case NonlinearityKind::sine: return std::sin(x + phase);
        case NonlinearityKind::tanh: return std::tanh(x);
        case NonlinearityKind::saturating_gain: return x / (1.0 + std::abs(x) / saturation);
        }
        return x;
    }

    /// Largest |f(x)| over the reals.
    double bound() const { return kind == NonlinearityKind::saturating_gain ? saturation : 1.0; }
};

struct ReservoirConfig {
    int n_nodes = 53;
    int offset_k = 18;
    double alpha = 0.8;
    double beta = 0.5;
    NonlinearitySpec nonlinearity;
    double state_noise_std = 0.0;
    int washout = 200;
};

void validate(const ReservoirConfig& config);

/// Node states after washout. Column n holds the N node states of step
/// washout + n (zero-based input index); row i - 1 holds node i.
struct StateMatrix {
    Eigen::MatrixXd states;
    ReservoirConfig config;

    int n_nodes() const { return static_cast<int>(states.rows()); }
    int input_len() const { return static_cast<int>(states.cols()); }
    /// Node i in 1..N, step n counted after washout from 0.
    double operator()(int i, int n) const { return states(i - 1, n); }
};

/// States of the two steps preceding the first input: x(-1) and x(0).
/// Defaults to zeros when absent.
struct InitialHistory {
    Eigen::VectorXd previous;  // x(-1)
    Eigen::VectorXd current;   // x(0)
};

/// Discrete recursion, updated node by node:
///   x_i(n) = f(alpha x_{i-k}(n-1)     + beta m_i u(n)),  i = k+1..N
///   x_i(n) = f(alpha x_{i-k+N}(n-2)   + beta m_i u(n)),  i = 1..k
/// Gaussian state noise, when enabled, is added to the argument of f.
StateMatrix run_discrete(const ReservoirConfig& config, const Mask& mask,
                         std::span<const double> input, std::uint64_t seed,
                         const std::optional<InitialHistory>& initial = std::nullopt);

struct EmulatorConfig {
    int oversampling = 1;
    double t_prime = 1.0;
    ReservoirConfig base;
};

void validate(const EmulatorConfig& config);

/// Continuous-time emulation of x(t) = f(alpha x(t - T) + beta m(t) u(t)) with
/// T = T' + k theta, sampled on a grid of theta / oversampling. The input is
/// held over each period T'; node states are averages over their theta window.
StateMatrix run_continuous(const EmulatorConfig& emu, const Mask& mask,
                           std::span<const double> input, std::uint64_t seed);

/// Runs two trajectories from different initial histories under the same
/// input and returns max_i |x_i(n) - x'_i(n)| for every step n (no washout).
std::vector<double> fading_memory_probe(const ReservoirConfig& config, const Mask& mask,
                                        std::span<const double> input,
                                        const InitialHistory& first,
                                        const InitialHistory& second);

/// Long-format dump (`n,i,x`) for debugging.
void write_states_csv(const StateMatrix& states, const std::string& path,
                      const std::string& provenance = {});

}  // namespace dlrc

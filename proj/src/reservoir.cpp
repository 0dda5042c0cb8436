#include "dlrc/reservoir.hpp"

#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"

#include <cmath>
#include <random>

namespace dlrc {

std::string_view to_string(NonlinearityKind kind)
{
    switch (kind) {
    case NonlinearityKind::sine: return "sine";
    case NonlinearityKind::tanh: return "tanh";
    case NonlinearityKind::saturating_gain: return "saturating_gain";
    }
    return "unknown";
}

std::optional<NonlinearityKind> parse_nonlinearity(std::string_view name)
{
    if (name == "sine") return NonlinearityKind::sine;
    if (name == "tanh") return NonlinearityKind::tanh;
    if (name == "saturating_gain") return NonlinearityKind::saturating_gain;
    return std::nullopt;
}

void validate(const ReservoirConfig& config)
{
    if (config.n_nodes < 2) throw ConfigError("reservoir.n_nodes", "must be at least 2");
    if (config.offset_k < 1 || config.offset_k > config.n_nodes - 1)
        throw ConfigError("reservoir.k", "offset must lie in [1, n_nodes - 1]");
    if (!(config.alpha >= 0) || !std::isfinite(config.alpha))
        throw ConfigError("reservoir.alpha", "feedback gain must be finite and >= 0");
    if (!(config.beta >= 0) || !std::isfinite(config.beta))
        throw ConfigError("reservoir.beta", "input gain must be finite and >= 0");
    if (!std::isfinite(config.nonlinearity.phase))
        throw ConfigError("reservoir.phase", "must be finite");
    if (config.nonlinearity.kind == NonlinearityKind::saturating_gain
        && !(config.nonlinearity.saturation > 0 && std::isfinite(config.nonlinearity.saturation)))
        throw ConfigError("reservoir.saturation", "must be finite and > 0");
    if (!(config.state_noise_std >= 0) || !std::isfinite(config.state_noise_std))
        throw ConfigError("reservoir.noise_std", "must be finite and >= 0");
    if (config.washout < 0) throw ConfigError("reservoir.washout", "must be >= 0");
}

void validate(const EmulatorConfig& config)
{
    validate(config.base);
    if (config.oversampling < 1) throw ConfigError("emulator.oversampling", "must be >= 1");
    if (!(config.t_prime > 0) || !std::isfinite(config.t_prime))
        throw ConfigError("emulator.t_prime", "hold period must be > 0");
}

namespace {

void check_run_inputs(const ReservoirConfig& config, int mask_len, std::span<const double> input)
{
    validate(config);
    if (mask_len != config.n_nodes)
        throw Error(ErrorCode::dimension_mismatch, "mask length " + std::to_string(mask_len)
                                                       + " differs from n_nodes "
                                                       + std::to_string(config.n_nodes));
    if (input.size() <= static_cast<std::size_t>(config.washout))
        throw Error(ErrorCode::dimension_mismatch, "input length must exceed the washout");
    for (std::size_t n = 0; n < input.size(); ++n)
        if (!std::isfinite(input[n]))
            throw Error(ErrorCode::non_finite, "non-finite input at index " + std::to_string(n));
}

// Single expression shared by the discrete and emulated paths so both produce
// identical arithmetic on the aligned grid.
inline double node_update(const NonlinearitySpec& f, double alpha, double delayed, double beta,
                          double mask, double u, double noise)
{
    return f(alpha * delayed + beta * mask * u + noise);
}

class NoiseSource {
public:
    NoiseSource(double stddev, std::uint64_t seed) : stddev_{stddev}, prng_{seed} {}

    double operator()()
    {
        if (stddev_ == 0.0) return 0.0;
        return dist_(prng_) * stddev_;
    }

private:
    double stddev_;
    std::mt19937_64 prng_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace

StateMatrix run_discrete(const ReservoirConfig& config, const Mask& mask,
                         std::span<const double> input, std::uint64_t seed,
                         const std::optional<InitialHistory>& initial)
{
    check_run_inputs(config, mask.size(), input);
    const int n_nodes = config.n_nodes;
    const int k = config.offset_k;
    const auto& m = mask.coefficients();

    Eigen::VectorXd two_back = Eigen::VectorXd::Zero(n_nodes);
    Eigen::VectorXd one_back = Eigen::VectorXd::Zero(n_nodes);
    if (initial) {
        if (initial->previous.size() != n_nodes || initial->current.size() != n_nodes)
            throw Error(ErrorCode::dimension_mismatch, "initial history must have n_nodes entries");
        two_back = initial->previous;
        one_back = initial->current;
    }
    Eigen::VectorXd x(n_nodes);

    const auto steps = static_cast<Eigen::Index>(input.size());
    StateMatrix out;
    out.config = config;
    out.states.resize(n_nodes, steps - config.washout);

    NoiseSource noise{config.state_noise_std, seed};
    for (Eigen::Index n = 0; n < steps; ++n) {
        const double u = input[static_cast<std::size_t>(n)];
        // zero-based j is node i = j + 1
        for (int j = 0; j < k; ++j)
            x[j] = node_update(config.nonlinearity, config.alpha, two_back[j - k + n_nodes],
                               config.beta, m[j], u, noise());
        for (int j = k; j < n_nodes; ++j)
            x[j] = node_update(config.nonlinearity, config.alpha, one_back[j - k], config.beta,
                               m[j], u, noise());
        if (n >= config.washout) out.states.col(n - config.washout) = x;
        std::swap(two_back, one_back);
        std::swap(one_back, x);
    }
    return out;
}

StateMatrix run_continuous(const EmulatorConfig& emu, const Mask& mask,
                           std::span<const double> input, std::uint64_t seed)
{
    validate(emu);
    const auto& config = emu.base;
    check_run_inputs(config, mask.size(), input);

    const int n_nodes = config.n_nodes;
    const int os = emu.oversampling;
    const std::size_t period = static_cast<std::size_t>(n_nodes) * os;
    const std::size_t delay = static_cast<std::size_t>(n_nodes + config.offset_k) * os;
    const double step = emu.t_prime / static_cast<double>(period);

    // m(t) on one period of the grid; step masks index their slot exactly.
    std::vector<double> mask_grid(period);
    const bool sine = is_sine_family(mask.spec().family);
    for (std::size_t r = 0; r < period; ++r)
        mask_grid[r] = sine ? continuous_mask_value(mask.spec(), static_cast<double>(r) * step,
                                                    emu.t_prime)
                            : mask.coefficients()[r / static_cast<std::size_t>(os)];

    // Ring buffer over the last `delay` samples of x(t); starts at zero.
    std::vector<double> ring(delay, 0.0);
    std::size_t head = 0;

    const auto steps = static_cast<Eigen::Index>(input.size());
    StateMatrix out;
    out.config = config;
    out.states.resize(n_nodes, steps - config.washout);

    NoiseSource noise{config.state_noise_std, seed};
    for (Eigen::Index n = 0; n < steps; ++n) {
        const double u = input[static_cast<std::size_t>(n)];
        std::size_t r = 0;
        for (int j = 0; j < n_nodes; ++j) {
            double sum = 0.0;
            for (int q = 0; q < os; ++q, ++r) {
                const double x = node_update(config.nonlinearity, config.alpha, ring[head],
                                             config.beta, mask_grid[r], u, noise());
                ring[head] = x;
                head = head + 1 == delay ? 0 : head + 1;
                sum += x;
            }
            if (n >= config.washout) out.states(j, n - config.washout) = sum / os;
        }
    }
    return out;
}

std::vector<double> fading_memory_probe(const ReservoirConfig& config, const Mask& mask,
                                        std::span<const double> input,
                                        const InitialHistory& first,
                                        const InitialHistory& second)
{
    ReservoirConfig no_washout = config;
    no_washout.washout = 0;
    const auto a = run_discrete(no_washout, mask, input, 0, first);
    const auto b = run_discrete(no_washout, mask, input, 0, second);
    std::vector<double> delta(static_cast<std::size_t>(a.input_len()));
    for (int n = 0; n < a.input_len(); ++n)
        delta[static_cast<std::size_t>(n)] = (a.states.col(n) - b.states.col(n)).cwiseAbs().maxCoeff();
    return delta;
}

void write_states_csv(const StateMatrix& states, const std::string& path,
                      const std::string& provenance)
{
    CsvWriter csv{path, provenance, "n,i,x"};
    for (int n = 0; n < states.input_len(); ++n)
        for (int i = 1; i <= states.n_nodes(); ++i)
            csv.row({std::to_string(n + states.config.washout), std::to_string(i),
                     format_number(states(i, n))});
    csv.close();
}

}  // namespace dlrc

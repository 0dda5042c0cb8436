#include "dlrc/dlrc.h"

#include "dlrc/commands.hpp"
#include "dlrc/error.hpp"
#include "dlrc/mask.hpp"
#include "dlrc/readout.hpp"
#include "dlrc/reservoir.hpp"

#include <new>
#include <string>

struct dlrc_mask {
    dlrc::Mask mask;
};

struct dlrc_states {
    dlrc::StateMatrix states;
};

struct dlrc_readout {
    dlrc::Readout readout;
};

namespace {

thread_local std::string last_error;

dlrc_status fail(dlrc_status status, const std::string& message)
{
    last_error = message;
    return status;
}

template <typename Fn>
dlrc_status guarded(Fn&& fn)
{
    try {
        fn();
        last_error.clear();
        return DLRC_OK;
    } catch (const dlrc::Error& e) {
        return fail(static_cast<dlrc_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DLRC_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(DLRC_ERR_RUNTIME, e.what());
    }
}

dlrc::ReservoirConfig to_config(const dlrc_reservoir_params& p)
{
    dlrc::ReservoirConfig c;
    c.n_nodes = p.n_nodes;
    c.offset_k = p.offset_k;
    c.alpha = p.alpha;
    c.beta = p.beta;
    switch (p.nonlinearity) {
    case DLRC_NONLINEARITY_SINE: c.nonlinearity.kind = dlrc::NonlinearityKind::sine; break;
    case DLRC_NONLINEARITY_TANH: c.nonlinearity.kind = dlrc::NonlinearityKind::tanh; break;
    case DLRC_NONLINEARITY_SATURATING_GAIN: c.nonlinearity.kind = dlrc::NonlinearityKind::saturating_gain; break;
    default: throw dlrc::Error(dlrc::ErrorCode::invalid_argument, "unknown nonlinearity");
    }
    c.nonlinearity.phase = p.phase;
    c.nonlinearity.saturation = p.saturation;
    c.state_noise_std = p.noise_std;
    c.washout = p.washout;
    return c;
}

dlrc::CommandOptions to_options(const dlrc_command_options& o)
{
    dlrc::CommandOptions c;
    if (o.config_path) c.config_path = o.config_path;
    if (o.has_seed) c.seed = o.seed;
    c.jobs = o.jobs > 0 ? o.jobs : 1;
    if (o.out_dir) c.out_dir = std::string{o.out_dir};
    c.resume = o.resume != 0;
    if (o.landscape) c.landscape = std::string{o.landscape};
    c.snr_curve = o.snr_curve != 0;
    c.stop_after = o.stop_after;
    if (o.mask_family) c.mask_family = std::string{o.mask_family};
    if (o.n_nodes) c.n_nodes = o.n_nodes;
    if (o.f1) c.f1 = o.f1;
    if (o.f2) c.f2 = o.f2;
    if (o.has_mask_seed) c.mask_seed = o.mask_seed;
    if (o.log) {
        auto fn = o.log;
        auto user = o.log_user;
        c.log = [fn, user](dlrc::LogLevel level, const std::string& msg) {
            fn(static_cast<dlrc_log_level>(level), msg.c_str(), user);
        };
    }
    return c;
}

template <typename Cmd>
int run_command(const dlrc_command_options* options, Cmd cmd)
{
    if (!options) {
        last_error = "null options";
        return dlrc::exit_runtime;
    }
    try {
        return cmd(to_options(*options));
    } catch (const std::exception& e) {
        last_error = e.what();
        return dlrc::exit_runtime;
    }
}

}  // namespace

extern "C" {

const char* dlrc_version(void) { return "1.0.0"; }

const char* dlrc_last_error(void) { return last_error.c_str(); }

const char* dlrc_status_name(dlrc_status status)
{
    switch (status) {
    case DLRC_OK: return "ok";
    case DLRC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DLRC_ERR_CONFIG: return "config error";
    case DLRC_ERR_DIMENSION: return "dimension mismatch";
    case DLRC_ERR_NON_FINITE: return "non-finite value";
    case DLRC_ERR_SINGULAR: return "singular system";
    case DLRC_ERR_IO: return "i/o error";
    case DLRC_ERR_PARSE: return "parse error";
    case DLRC_ERR_RUNTIME: return "runtime error";
    case DLRC_ERR_NULL: return "null argument";
    }
    return "unknown";
}

dlrc_status dlrc_mask_create(dlrc_mask_family family, int n_nodes, int f1, int f2, uint64_t seed, dlrc_mask** out)
{
    if (!out) return fail(DLRC_ERR_NULL, "null output handle");
    return guarded([&] {
        dlrc::MaskSpec spec;
        switch (family) {
        case DLRC_MASK_RANDOM_UNIFORM: spec.family = dlrc::MaskFamily::random_uniform; break;
        case DLRC_MASK_RANDOM_BINARY: spec.family = dlrc::MaskFamily::random_binary; break;
        case DLRC_MASK_SINGLE_SINE: spec.family = dlrc::MaskFamily::single_sine; break;
        case DLRC_MASK_TWO_SINE: spec.family = dlrc::MaskFamily::two_sine; break;
        default: throw dlrc::Error(dlrc::ErrorCode::invalid_argument, "unknown mask family");
        }
        spec.n_nodes = n_nodes;
        spec.f1 = f1;
        spec.f2 = f2;
        spec.seed = seed;
        *out = new dlrc_mask{dlrc::generate_mask(spec)};
    });
}

dlrc_status dlrc_mask_from_values(const double* values, size_t n, dlrc_mask** out)
{
    if (!out || (!values && n)) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] { *out = new dlrc_mask{dlrc::make_step_mask(std::vector<double>(values, values + n))}; });
}

size_t dlrc_mask_size(const dlrc_mask* mask) { return mask ? static_cast<size_t>(mask->mask.size()) : 0; }

dlrc_status dlrc_mask_values(const dlrc_mask* mask, double* values, size_t capacity)
{
    if (!mask || !values) return fail(DLRC_ERR_NULL, "null argument");
    const auto& c = mask->mask.coefficients();
    if (capacity < c.size()) return fail(DLRC_ERR_DIMENSION, "buffer smaller than the mask");
    std::copy(c.begin(), c.end(), values);
    last_error.clear();
    return DLRC_OK;
}

dlrc_status dlrc_mask_continuous(const dlrc_mask* mask, double t, double t_prime, double* out)
{
    if (!mask || !out) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] { *out = dlrc::continuous_mask_value(mask->mask, t, t_prime); });
}

void dlrc_mask_destroy(dlrc_mask* mask) { delete mask; }

void dlrc_reservoir_params_default(dlrc_reservoir_params* params)
{
    if (!params) return;
    const dlrc::ReservoirConfig c;
    params->n_nodes = c.n_nodes;
    params->offset_k = c.offset_k;
    params->alpha = c.alpha;
    params->beta = c.beta;
    params->nonlinearity = DLRC_NONLINEARITY_SINE;
    params->phase = c.nonlinearity.phase;
    params->saturation = c.nonlinearity.saturation;
    params->noise_std = c.state_noise_std;
    params->washout = c.washout;
}

dlrc_status dlrc_run_discrete(const dlrc_reservoir_params* params, const dlrc_mask* mask, const double* input,
                              size_t length, uint64_t seed, dlrc_states** out)
{
    if (!params || !mask || !out || (!input && length)) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] {
        auto states = dlrc::run_discrete(to_config(*params), mask->mask, std::span<const double>{input, length}, seed);
        *out = new dlrc_states{std::move(states)};
    });
}

dlrc_status dlrc_run_continuous(const dlrc_reservoir_params* params, int oversampling, double t_prime,
                                const dlrc_mask* mask, const double* input, size_t length, uint64_t seed,
                                dlrc_states** out)
{
    if (!params || !mask || !out || (!input && length)) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] {
        dlrc::EmulatorConfig emu;
        emu.oversampling = oversampling;
        emu.t_prime = t_prime;
        emu.base = to_config(*params);
        auto states = dlrc::run_continuous(emu, mask->mask, std::span<const double>{input, length}, seed);
        *out = new dlrc_states{std::move(states)};
    });
}

size_t dlrc_states_nodes(const dlrc_states* states)
{
    return states ? static_cast<size_t>(states->states.n_nodes()) : 0;
}

size_t dlrc_states_length(const dlrc_states* states)
{
    return states ? static_cast<size_t>(states->states.input_len()) : 0;
}

dlrc_status dlrc_states_copy(const dlrc_states* states, double* out, size_t capacity)
{
    if (!states || !out) return fail(DLRC_ERR_NULL, "null argument");
    const auto& m = states->states.states;
    const auto size = static_cast<size_t>(m.size());
    if (capacity < size) return fail(DLRC_ERR_DIMENSION, "buffer smaller than N x L");
    std::copy(m.data(), m.data() + size, out);
    last_error.clear();
    return DLRC_OK;
}

void dlrc_states_destroy(dlrc_states* states) { delete states; }

dlrc_status dlrc_readout_train(const dlrc_states* states, const double* target, size_t length, double ridge,
                               int with_bias, dlrc_readout** out)
{
    if (!states || !target || !out) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] {
        auto r = dlrc::train(states->states, std::span<const double>{target, length}, ridge, with_bias != 0);
        *out = new dlrc_readout{std::move(r)};
    });
}

dlrc_status dlrc_readout_predict(const dlrc_readout* readout, const dlrc_states* states, double* out,
                                 size_t capacity)
{
    if (!readout || !states || !out) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] {
        const auto y = dlrc::predict(readout->readout, states->states);
        if (capacity < y.size()) throw dlrc::Error(dlrc::ErrorCode::dimension_mismatch, "buffer smaller than L");
        std::copy(y.begin(), y.end(), out);
    });
}

size_t dlrc_readout_size(const dlrc_readout* readout)
{
    return readout ? static_cast<size_t>(readout->readout.weights.size()) : 0;
}

dlrc_status dlrc_readout_weights(const dlrc_readout* readout, double* weights, size_t capacity, double* bias)
{
    if (!readout) return fail(DLRC_ERR_NULL, "null argument");
    const auto& w = readout->readout.weights;
    if (weights) {
        if (capacity < static_cast<size_t>(w.size())) return fail(DLRC_ERR_DIMENSION, "buffer smaller than N");
        std::copy(w.data(), w.data() + w.size(), weights);
    }
    if (bias) *bias = readout->readout.bias;
    last_error.clear();
    return DLRC_OK;
}

void dlrc_readout_destroy(dlrc_readout* readout) { delete readout; }

dlrc_status dlrc_nmse(const double* y, const double* d, size_t n, double* out)
{
    if (!y || !d || !out) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] { *out = dlrc::nmse(std::span<const double>{y, n}, std::span<const double>{d, n}); });
}

dlrc_status dlrc_ser(const double* y, const double* d, size_t n, double* out)
{
    if (!y || !d || !out) return fail(DLRC_ERR_NULL, "null argument");
    return guarded([&] { *out = dlrc::ser(std::span<const double>{y, n}, std::span<const double>{d, n}); });
}

void dlrc_command_options_default(dlrc_command_options* options)
{
    if (!options) return;
    *options = dlrc_command_options{};
    options->jobs = 1;
}

int dlrc_cmd_run(const dlrc_command_options* options) { return run_command(options, dlrc::cmd_run); }
int dlrc_cmd_sweep(const dlrc_command_options* options) { return run_command(options, dlrc::cmd_sweep); }
int dlrc_cmd_capacity(const dlrc_command_options* options) { return run_command(options, dlrc::cmd_capacity); }
int dlrc_cmd_gen_mask(const dlrc_command_options* options) { return run_command(options, dlrc::cmd_gen_mask); }
int dlrc_cmd_dataset(const dlrc_command_options* options) { return run_command(options, dlrc::cmd_dataset); }

}  // extern "C"

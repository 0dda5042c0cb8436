#include "dlrc/config.hpp"

#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dlrc {

namespace {

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"task",
         {"name", "seed", "length", "split", "snr_db", "n_symbols", "horizon", "path", "column", "a", "b", "tau",
          "c", "dt", "n_samples", "washout_time"}},
        {"mask", {"family", "n_nodes", "f1", "f2", "seed", "values"}},
        {"reservoir", {"n_nodes", "k", "alpha", "beta", "nonlinearity", "phase", "saturation", "noise_std", "washout"}},
        {"readout", {"ridge", "bias", "metric"}},
        {"capacity", {"linear_max", "quadratic_max", "cross_max", "include_zero", "split"}},
        {"sweep", {"family", "k", "f1", "f2", "alpha", "beta", "phase", "replicas", "select", "snr_db"}},
        {"output", {"dir", "formats"}},
    };
    return keys;
}

void check_known(const std::string& section, const std::string& key, int line)
{
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError(section, "unknown section", line);
    if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key", line);
}

std::string lower(std::string_view text)
{
    std::string out{text};
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Renders 0.5 + 9 * 0.05 as 0.95 rather than 0.9500000000000001.
double tidy(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::vector<std::string> split_items(const std::string& text)
{
    std::vector<std::string> out;
    for (const auto& item : split_csv_line(text)) {
        const auto t = trim(item);
        if (t.empty()) throw Error(ErrorCode::parse, "empty list item in '" + text + "'");
        out.emplace_back(t);
    }
    return out;
}

double to_real(std::string_view text)
{
    double v = 0.0;
    if (!parse_double(trim(text), v)) throw Error(ErrorCode::parse, "'" + std::string{text} + "' is not a number");
    return v;
}

long long to_integer(std::string_view text)
{
    const double v = to_real(text);
    if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 9.0e15)
        throw Error(ErrorCode::parse, "'" + std::string{text} + "' is not an integer");
    return static_cast<long long>(v);
}

std::vector<std::string> split_colon(const std::string& text)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    for (const auto& item : split_items(text)) {
        const auto parts = split_colon(item);
        if (parts.size() == 1) {
            out.push_back(static_cast<int>(to_integer(parts[0])));
        } else if (parts.size() == 2 || parts.size() == 3) {
            const auto a = to_integer(parts[0]);
            const auto b = to_integer(parts[1]);
            const auto step = parts.size() == 3 ? to_integer(parts[2]) : 1;
            if (step <= 0 || b < a) throw Error(ErrorCode::parse, "bad range '" + item + "'");
            for (auto v = a; v <= b; v += step) out.push_back(static_cast<int>(v));
        } else {
            throw Error(ErrorCode::parse, "bad range '" + item + "'");
        }
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split_items(text)) {
        const auto parts = split_colon(item);
        if (parts.size() == 1) {
            out.push_back(to_real(parts[0]));
        } else if (parts.size() == 4 && lower(trim(parts[0])) == "log") {
            const double a = to_real(parts[1]);
            const double b = to_real(parts[2]);
            const auto n = to_integer(parts[3]);
            if (!(a > 0) || !(b >= a) || n < 1) throw Error(ErrorCode::parse, "bad log range '" + item + "'");
            for (long long i = 0; i < n; ++i) {
                const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
                out.push_back(tidy(std::exp(std::log(a) + t * (std::log(b) - std::log(a)))));
            }
        } else if (parts.size() == 3) {
            const double a = to_real(parts[0]);
            const double b = to_real(parts[1]);
            const double step = to_real(parts[2]);
            if (!(step > 0) || !(b >= a)) throw Error(ErrorCode::parse, "bad range '" + item + "'");
            const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
            for (long long i = 0; i < count; ++i) out.push_back(tidy(a + static_cast<double>(i) * step));
        } else {
            throw Error(ErrorCode::parse, "bad range '" + item + "'");
        }
    }
    return out;
}

// --- raw file ---------------------------------------------------------------

KeyValueFile KeyValueFile::parse_ini(const std::string& text)
{
    KeyValueFile file;
    std::istringstream in{text};
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", "unterminated section header", line_no);
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(section)) throw ConfigError(section, "unknown section", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", "expected 'key = value'", line_no);
        const auto key = lower(trim(line.substr(0, eq)));
        if (section.empty()) throw ConfigError(key, "key outside any section", line_no);
        if (key.empty()) throw ConfigError(section, "empty key", line_no);
        check_known(section, key, line_no);
        const auto full = section + "." + key;
        if (file.entries_.contains(full)) throw ConfigError(full, "duplicate key", line_no);
        file.entries_[full] = Entry{std::string{trim(line.substr(eq + 1))}, line_no};
    }
    return file;
}

KeyValueFile KeyValueFile::parse_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string{"invalid JSON: "} + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "top level must be an object");
    auto scalar = [](const nlohmann::json& v, const std::string& key) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return format_number(v.get<double>());
        throw ConfigError(key, "expected a scalar or a list of scalars");
    };
    KeyValueFile file;
    for (const auto& [section_raw, body] : doc.items()) {
        const auto section = lower(section_raw);
        if (!schema().contains(section)) throw ConfigError(section, "unknown section");
        if (!body.is_object()) throw ConfigError(section, "section must be an object");
        for (const auto& [key_raw, value] : body.items()) {
            const auto key = lower(key_raw);
            check_known(section, key, 0);
            const auto full = section + "." + key;
            std::string text_value;
            if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i) {
                    if (i) text_value += ",";
                    text_value += scalar(value[i], full);
                }
            } else {
                text_value = scalar(value, full);
            }
            file.entries_[full] = Entry{text_value, 0};
        }
    }
    return file;
}

KeyValueFile KeyValueFile::parse(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json(text);
    return parse_ini(text);
}

const KeyValueFile::Entry* KeyValueFile::find(const std::string& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

bool KeyValueFile::has_section(const std::string& section) const
{
    const auto prefix = section + ".";
    const auto it = entries_.lower_bound(prefix);
    return it != entries_.end() && it->first.starts_with(prefix);
}

int KeyValueFile::line_of(const std::string& key) const
{
    const auto* e = find(key);
    return e ? e->line : 0;
}

// --- typed resolution ---------------------------------------------------------

namespace {

class Reader {
public:
    explicit Reader(const KeyValueFile& file) : file_{file} {}

    template <typename Fn>
    bool with(const std::string& key, Fn&& fn) const
    {
        const auto* e = file_.find(key);
        if (!e) return false;
        try {
            fn(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError(key, strip(err), e->line);
        } catch (const Error& err) {
            throw ConfigError(key, err.what(), e->line);
        }
        return true;
    }

    bool real(const std::string& key, double& out) const
    {
        return with(key, [&](const std::string& v) { out = to_real(v); });
    }
    bool integer(const std::string& key, int& out) const
    {
        return with(key, [&](const std::string& v) {
            const auto x = to_integer(v);
            if (x < INT32_MIN || x > INT32_MAX) throw Error(ErrorCode::parse, "out of range");
            out = static_cast<int>(x);
        });
    }
    bool seed(const std::string& key, std::uint64_t& out) const
    {
        return with(key, [&](const std::string& v) {
            const auto x = to_integer(v);
            if (x < 0) throw Error(ErrorCode::parse, "seed must be >= 0");
            out = static_cast<std::uint64_t>(x);
        });
    }
    bool boolean(const std::string& key, bool& out) const
    {
        return with(key, [&](const std::string& v) {
            const auto t = lower(v);
            if (t == "true" || t == "yes" || t == "1" || t == "on") out = true;
            else if (t == "false" || t == "no" || t == "0" || t == "off") out = false;
            else throw Error(ErrorCode::parse, "expected true or false, got '" + v + "'");
        });
    }
    bool split(const std::string& key, Split& out) const
    {
        return with(key, [&](const std::string& v) {
            const auto parts = parse_int_list(v);
            if (parts.size() != 3) throw Error(ErrorCode::parse, "expected train,validation,test");
            out = Split{parts[0], parts[1], parts[2]};
        });
    }

    // Rethrows a validation error raised after resolution at its key's line.
    [[noreturn]] void anchor(const ConfigError& err) const
    {
        const int line = file_.line_of(err.key());
        if (line > 0 && err.line() == 0) throw ConfigError(err.key(), strip(err), line);
        throw err;
    }

private:
    static std::string strip(const ConfigError& err)
    {
        std::string msg = err.what();
        const auto prefix_end = msg.find(err.key() + ": ");
        if (!err.key().empty() && prefix_end != std::string::npos) return msg.substr(prefix_end + err.key().size() + 2);
        return msg;
    }

    const KeyValueFile& file_;
};

MaskFamily family_from(const std::string& v)
{
    const auto f = parse_mask_family(lower(trim(v)));
    if (!f) throw Error(ErrorCode::parse, "unknown mask family '" + v + "'");
    return *f;
}

void check_bound(bool ok, const char* key, const char* message)
{
    if (!ok) throw ConfigError(key, message);
}

}  // namespace

RunConfig parse_config(const std::string& text)
{
    const auto file = KeyValueFile::parse(text);
    const Reader r{file};
    RunConfig cfg;

    // task
    if (!file.find("task.name")) throw ConfigError("task.name", "missing (the task section must name a task)");
    r.with("task.name", [&](const std::string& v) {
        const auto kind = parse_task_kind(lower(trim(v)));
        if (!kind) throw Error(ErrorCode::parse, "unknown task '" + v + "'");
        cfg.task.kind = *kind;
    });
    r.seed("task.seed", cfg.task.seed);
    r.integer("task.length", cfg.task.length);
    r.real("task.snr_db", cfg.task.channel.snr_db);
    if (r.integer("task.n_symbols", cfg.task.channel.n_symbols)) cfg.task.channel.split = Split{};
    r.integer("task.horizon", cfg.task.horizon);
    r.with("task.path", [&](const std::string& v) { cfg.task.path = v; });
    r.with("task.column", [&](const std::string& v) {
        const auto t = lower(trim(v));
        if (t == "re" || t == "0" || t == "real") cfg.task.column = SeriesColumn::real;
        else if (t == "im" || t == "1" || t == "imag" || t == "imaginary") cfg.task.column = SeriesColumn::imaginary;
        else throw Error(ErrorCode::parse, "expected re, im, 0 or 1");
    });
    auto& mg = cfg.task.mackey_glass;
    r.real("task.a", mg.a);
    r.real("task.b", mg.b);
    r.real("task.tau", mg.tau);
    r.real("task.c", mg.c);
    r.real("task.dt", mg.dt);
    if (r.integer("task.n_samples", mg.n_samples)) mg.split = Split{};
    r.real("task.washout_time", mg.washout_time);
    Split split{};
    if (r.split("task.split", split)) {
        cfg.task.split = split;
        cfg.task.channel.split = split;
        mg.split = split;
    }

    // mask
    r.with("mask.family", [&](const std::string& v) { cfg.mask.family = family_from(v); });
    r.integer("mask.n_nodes", cfg.mask.n_nodes);
    r.integer("mask.f1", cfg.mask.f1);
    r.integer("mask.f2", cfg.mask.f2);
    r.seed("mask.seed", cfg.mask.seed);
    r.with("mask.values", [&](const std::string& v) { cfg.mask_values = parse_real_list(v); });

    // reservoir
    if (!r.integer("reservoir.n_nodes", cfg.reservoir.n_nodes)) cfg.reservoir.n_nodes = cfg.mask.n_nodes;
    if (!file.find("mask.n_nodes")) cfg.mask.n_nodes = cfg.reservoir.n_nodes;
    r.integer("reservoir.k", cfg.reservoir.offset_k);
    r.real("reservoir.alpha", cfg.reservoir.alpha);
    r.real("reservoir.beta", cfg.reservoir.beta);
    r.with("reservoir.nonlinearity", [&](const std::string& v) {
        const auto t = lower(trim(v));
        if (t == "sine") cfg.reservoir.nonlinearity.kind = NonlinearityKind::sine;
        else if (t == "tanh") cfg.reservoir.nonlinearity.kind = NonlinearityKind::tanh;
        else if (t == "saturating_gain") cfg.reservoir.nonlinearity.kind = NonlinearityKind::saturating_gain;
        else throw Error(ErrorCode::parse, "expected sine, tanh or saturating_gain");
    });
    r.real("reservoir.phase", cfg.reservoir.nonlinearity.phase);
    r.real("reservoir.saturation", cfg.reservoir.nonlinearity.saturation);
    r.real("reservoir.noise_std", cfg.reservoir.state_noise_std);
    r.integer("reservoir.washout", cfg.reservoir.washout);

    // readout
    r.with("readout.ridge", [&](const std::string& v) { cfg.readout.ridge_grid = parse_real_list(v); });
    r.boolean("readout.bias", cfg.readout.with_bias);
    cfg.metric = default_metric(cfg.task);
    r.with("readout.metric", [&](const std::string& v) {
        const auto m = parse_metric(lower(trim(v)));
        if (!m) throw Error(ErrorCode::parse, "expected nmse or ser");
        cfg.metric = *m;
    });

    // capacity
    r.integer("capacity.linear_max", cfg.capacity_lags.linear_max);
    r.integer("capacity.quadratic_max", cfg.capacity_lags.quadratic_max);
    r.integer("capacity.cross_max", cfg.capacity_lags.cross_max);
    r.boolean("capacity.include_zero", cfg.capacity_lags.include_zero);
    Split cap{};
    if (r.split("capacity.split", cap)) cfg.capacity_split = CapacitySplit{cap.train, cap.validation, cap.test};

    // sweep
    if (file.has_section("sweep")) {
        SweepSection s;
        s.family = cfg.mask.family;
        r.with("sweep.family", [&](const std::string& v) { s.family = family_from(v); });
        auto ints = [&](const char* key, std::vector<int>& out, int fallback) {
            if (!r.with(key, [&](const std::string& v) { out = parse_int_list(v); })) out = {fallback};
        };
        auto reals = [&](const char* key, std::vector<double>& out, std::vector<double> fallback) {
            if (!r.with(key, [&](const std::string& v) { out = parse_real_list(v); })) out = std::move(fallback);
        };
        ints("sweep.k", s.k_values, cfg.reservoir.offset_k);
        ints("sweep.f1", s.f1_values, cfg.mask.f1);
        ints("sweep.f2", s.f2_values, cfg.mask.f2);
        reals("sweep.alpha", s.alpha_values, default_alpha_grid());
        reals("sweep.beta", s.beta_values, default_beta_grid());
        reals("sweep.phase", s.phase_values, {cfg.reservoir.nonlinearity.phase});
        r.integer("sweep.replicas", s.replicas);
        r.with("sweep.select", [&](const std::string& v) {
            const auto t = lower(trim(v));
            if (t == "test") s.select_on = MetricSelection::test;
            else if (t == "validation") s.select_on = MetricSelection::validation;
            else throw Error(ErrorCode::parse, "expected test or validation");
        });
        r.with("sweep.snr_db", [&](const std::string& v) { s.snr_db = parse_real_list(v); });
        cfg.sweep = std::move(s);
    }

    // output
    r.with("output.dir", [&](const std::string& v) {
        if (v.empty()) throw Error(ErrorCode::parse, "must not be empty");
        cfg.output.dir = v;
    });
    r.with("output.formats", [&](const std::string& v) {
        cfg.output.csv = cfg.output.json = false;
        for (const auto& item : split_items(v)) {
            const auto t = lower(item);
            if (t == "csv") cfg.output.csv = true;
            else if (t == "json") cfg.output.json = true;
            else throw Error(ErrorCode::parse, "unknown format '" + item + "'");
        }
    });

    // validation
    try {
        if (cfg.mask.n_nodes != cfg.reservoir.n_nodes)
            throw ConfigError("reservoir.n_nodes", "must equal mask.n_nodes (" + std::to_string(cfg.mask.n_nodes) + ")");
        if (cfg.mask_values) {
            if (static_cast<int>(cfg.mask_values->size()) != cfg.mask.n_nodes)
                throw ConfigError("mask.values", "needs exactly n_nodes coefficients");
            for (double m : *cfg.mask_values) check_bound(std::isfinite(m), "mask.values", "coefficients must be finite");
        } else {
            validate(cfg.mask);
        }
        validate(cfg.reservoir);
        check_bound(!cfg.readout.ridge_grid.empty(), "readout.ridge", "grid is empty");
        for (double l : cfg.readout.ridge_grid)
            check_bound(l >= 0 && std::isfinite(l), "readout.ridge", "values must be finite and >= 0");
        switch (cfg.task.kind) {
        case TaskSpec::Kind::channel: validate(cfg.task.channel); break;
        case TaskSpec::Kind::mackey_glass: validate(mg); break;
        case TaskSpec::Kind::series:
        case TaskSpec::Kind::csv: check_bound(!cfg.task.path.empty(), "task.path", "required for this task"); break;
        case TaskSpec::Kind::narma10:
            check_bound(cfg.task.length > 10, "task.length", "NARMA10 needs more than 10 samples");
            break;
        case TaskSpec::Kind::capacity: check_bound(cfg.task.length > 0, "task.length", "must be positive"); break;
        }
        check_bound(cfg.task.horizon >= 0, "task.horizon", "must be >= 0");
        check_bound(cfg.capacity_lags.linear_max >= 0, "capacity.linear_max", "must be >= 0");
        check_bound(cfg.capacity_lags.quadratic_max >= 0, "capacity.quadratic_max", "must be >= 0");
        check_bound(cfg.capacity_lags.cross_max >= 0, "capacity.cross_max", "must be >= 0");
        check_bound(cfg.capacity_split.train > cfg.reservoir.washout, "capacity.split",
                    "train part must exceed reservoir.washout");
        check_bound(cfg.capacity_split.validation >= 0 && cfg.capacity_split.test >= 2, "capacity.split",
                    "validation must be >= 0 and test >= 2");
        if (cfg.sweep) {
            for (double snr : cfg.sweep->snr_db) {
                auto c = cfg.task.channel;
                c.snr_db = snr;
                try {
                    validate(c);
                } catch (const ConfigError& e) {
                    throw ConfigError("sweep.snr_db", "values must lie in [12, 32] dB or be inf");
                }
            }
            validate(cfg.build_sweep());
        }
    } catch (const ConfigError& err) {
        r.anchor(err);
    }
    for (const auto& [key, entry] : file.entries()) cfg.lines[key] = entry.line;
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

Mask RunConfig::build_mask() const
{
    if (mask_values) return make_step_mask(*mask_values);
    return generate_mask(mask);
}

SweepGrid RunConfig::build_sweep() const
{
    if (!sweep) throw ConfigError("sweep", "config has no sweep section");
    SweepGrid g;
    g.family = sweep->family;
    g.n_nodes = mask.n_nodes;
    g.mask_seed = mask.seed;
    g.k_values = sweep->k_values;
    g.f1_values = sweep->f1_values;
    g.f2_values = sweep->f2_values;
    g.alpha_values = sweep->alpha_values;
    g.beta_values = sweep->beta_values;
    g.phase_values = sweep->phase_values;
    g.base = reservoir;
    g.readout = readout;
    g.task = task;
    g.metric = metric;
    g.replicas = sweep->replicas;
    g.reservoir_seed = task.seed;
    g.select_on = sweep->select_on;
    return g;
}

std::string RunConfig::canonical() const
{
    auto list = [](const auto& values) {
        std::string out;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ",";
            if constexpr (std::is_same_v<std::decay_t<decltype(values[i])>, int>) out += std::to_string(values[i]);
            else out += format_number(values[i]);
        }
        return out;
    };
    auto split_text = [](const Split& s) {
        return std::to_string(s.train) + "," + std::to_string(s.validation) + "," + std::to_string(s.test);
    };
    std::map<std::string, std::string> kv;
    kv["task.name"] = std::string{to_string(task.kind)};
    kv["task.seed"] = std::to_string(task.seed);
    switch (task.kind) {
    case TaskSpec::Kind::channel:
        kv["task.snr_db"] = format_number(task.channel.snr_db);
        kv["task.n_symbols"] = std::to_string(task.channel.n_symbols);
        kv["task.split"] = split_text(task.channel.split);
        break;
    case TaskSpec::Kind::narma10:
    case TaskSpec::Kind::capacity:
        kv["task.length"] = std::to_string(task.length);
        kv["task.split"] = split_text(task.split);
        break;
    case TaskSpec::Kind::mackey_glass: {
        const auto& m = task.mackey_glass;
        kv["task.a"] = format_number(m.a);
        kv["task.b"] = format_number(m.b);
        kv["task.tau"] = format_number(m.tau);
        kv["task.c"] = format_number(m.c);
        kv["task.dt"] = format_number(m.dt);
        kv["task.n_samples"] = std::to_string(m.n_samples);
        kv["task.washout_time"] = format_number(m.washout_time);
        kv["task.split"] = split_text(m.split);
        kv["task.horizon"] = std::to_string(task.horizon);
        break;
    }
    case TaskSpec::Kind::series:
        kv["task.column"] = task.column == SeriesColumn::real ? "re" : "im";
        kv["task.horizon"] = std::to_string(task.horizon);
        [[fallthrough]];
    case TaskSpec::Kind::csv:
        kv["task.path"] = task.path;
        kv["task.split"] = split_text(task.split);
        break;
    }
    kv["mask.n_nodes"] = std::to_string(mask.n_nodes);
    if (mask_values) {
        kv["mask.values"] = list(*mask_values);
    } else {
        kv["mask.family"] = std::string{to_string(mask.family)};
        if (is_sine_family(mask.family)) kv["mask.f1"] = std::to_string(mask.f1);
        if (mask.family == MaskFamily::two_sine) kv["mask.f2"] = std::to_string(mask.f2);
    }
    kv["mask.seed"] = std::to_string(mask.seed);
    kv["reservoir.k"] = std::to_string(reservoir.offset_k);
    kv["reservoir.alpha"] = format_number(reservoir.alpha);
    kv["reservoir.beta"] = format_number(reservoir.beta);
    const auto& nl = reservoir.nonlinearity;
    kv["reservoir.nonlinearity"] = nl.kind == NonlinearityKind::sine   ? "sine"
                                   : nl.kind == NonlinearityKind::tanh ? "tanh"
                                                                       : "saturating_gain";
    kv["reservoir.phase"] = format_number(nl.phase);
    if (nl.kind == NonlinearityKind::saturating_gain) kv["reservoir.saturation"] = format_number(nl.saturation);
    kv["reservoir.noise_std"] = format_number(reservoir.state_noise_std);
    kv["reservoir.washout"] = std::to_string(reservoir.washout);
    kv["readout.ridge"] = list(readout.ridge_grid);
    kv["readout.bias"] = readout.with_bias ? "true" : "false";
    kv["readout.metric"] = std::string{to_string(metric)};
    kv["capacity.linear_max"] = std::to_string(capacity_lags.linear_max);
    kv["capacity.quadratic_max"] = std::to_string(capacity_lags.quadratic_max);
    kv["capacity.cross_max"] = std::to_string(capacity_lags.cross_max);
    kv["capacity.include_zero"] = capacity_lags.include_zero ? "true" : "false";
    kv["capacity.split"] = split_text({capacity_split.train, capacity_split.validation, capacity_split.test});
    if (sweep) {
        kv["sweep.family"] = std::string{to_string(sweep->family)};
        kv["sweep.k"] = list(sweep->k_values);
        kv["sweep.f1"] = list(sweep->f1_values);
        kv["sweep.f2"] = list(sweep->f2_values);
        kv["sweep.alpha"] = list(sweep->alpha_values);
        kv["sweep.beta"] = list(sweep->beta_values);
        kv["sweep.phase"] = list(sweep->phase_values);
        kv["sweep.replicas"] = std::to_string(sweep->replicas);
        kv["sweep.select"] = sweep->select_on == MetricSelection::test ? "test" : "validation";
        kv["sweep.snr_db"] = list(sweep->snr_db);
    }
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical())); }

}  // namespace dlrc

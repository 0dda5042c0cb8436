#include "dlrc/commands.hpp"

#include "dlrc/config.hpp"
#include "dlrc/csv.hpp"
#include "dlrc/error.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace dlrc {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void say(const CommandOptions& o, LogLevel level, const std::string& msg)
{
    if (o.log) o.log(level, msg);
}

template <typename Fn>
int guarded(const CommandOptions& o, Fn&& fn)
{
    try {
        fn();
        return exit_ok;
    } catch (const ConfigError& e) {
        say(o, LogLevel::error, std::string{"config error: "} + e.what());
        return exit_config;
    } catch (const std::exception& e) {
        say(o, LogLevel::error, std::string{"error: "} + e.what());
        return exit_runtime;
    }
}

RunConfig load(const CommandOptions& o)
{
    auto cfg = load_config(o.config_path);
    if (o.seed) cfg.set_seed(*o.seed);
    if (o.out_dir) cfg.output.dir = *o.out_dir;
    return cfg;
}

std::string provenance(const std::string& hash, std::uint64_t seed)
{
    return "dlrc config=" + hash + " seed=" + std::to_string(seed);
}

ordered_json number(double v)
{
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

fs::path prepare(const std::string& dir)
{
    fs::path out{dir};
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create output directory '" + dir + "': " + ec.message());
    return out;
}

void write_json(const fs::path& path, const ordered_json& doc)
{
    std::ofstream out{path, std::ios::binary};
    if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

ordered_json point_json(const SweepPoint& p)
{
    return {{"k", p.k}, {"f1", p.f1}, {"f2", p.f2}, {"alpha", p.alpha}, {"beta", p.beta}, {"phase", p.phase}};
}

}  // namespace

int cmd_run(const CommandOptions& o)
{
    return guarded(o, [&] {
        const auto cfg = load(o);
        if (cfg.task.kind == TaskSpec::Kind::capacity)
            throw ConfigError("task.name", "memory-capacity inputs have no target; use the capacity command",
                              cfg.lines.contains("task.name") ? cfg.lines.at("task.name") : 0);
        const auto hash = cfg.hash();
        const auto prov = provenance(hash, cfg.seed());
        const auto dataset = make_dataset(cfg.task);
        const auto mask = cfg.build_mask();
        const auto res = run_pipeline(dataset, mask, cfg.reservoir, cfg.readout, cfg.metric, cfg.seed());

        const auto dir = prepare(cfg.output.dir);
        if (cfg.output.csv) {
            CsvWriter csv{(dir / "predictions.csv").string(), prov, "n,y,d"};
            for (std::size_t i = 0; i < res.test_prediction.size(); ++i) {
                const auto n = static_cast<std::size_t>(res.test_begin) + i;
                csv.row({std::to_string(n), format_number(res.test_prediction[i]), format_number(dataset.target[n])});
            }
            csv.close();
            write_readout_csv(res.readout, (dir / "weights.csv").string(), prov);
        }
        if (cfg.output.json) {
            ordered_json doc;
            doc["config_hash"] = hash;
            doc["seed"] = cfg.seed();
            doc["task"] = std::string{to_string(cfg.task.kind)};
            doc["metric"] = std::string{to_string(res.metric)};
            doc["train"] = number(res.train_metric);
            doc["validation"] = number(res.validation_metric);
            doc["test"] = number(res.test_metric);
            doc["test_nmse"] = number(res.test_nmse);
            doc["lambda"] = res.readout.ridge;
            doc["split"] = {{"train", dataset.split.train},
                            {"validation", dataset.split.validation},
                            {"test", dataset.split.test}};
            ordered_json meta = ordered_json::object();
            for (const auto& [k, v] : dataset.meta) meta[k] = v;
            doc["dataset"] = meta;
            write_json(dir / "metrics.json", doc);
        }
        say(o, LogLevel::info, "test " + std::string{to_string(res.metric)} + " = " + format_number(res.test_metric));
    });
}

int cmd_sweep(const CommandOptions& o)
{
    return guarded(o, [&] {
        const auto cfg = load(o);
        if (!cfg.sweep) throw ConfigError("sweep", "config has no sweep section");
        std::optional<std::pair<SweepAxis, SweepAxis>> axes;
        if (o.landscape) {
            const auto parts = split_csv_line(*o.landscape);
            if (parts.size() != 2) throw ConfigError("--landscape", "expected two comma-separated axes");
            const auto a1 = parse_axis(trim(parts[0]));
            const auto a2 = parse_axis(trim(parts[1]));
            if (!a1 || !a2) throw ConfigError("--landscape", "unknown axis in '" + *o.landscape + "' (k, f1, f2, alpha, beta, phase)");
            if (*a1 == *a2) throw ConfigError("--landscape", "axes must differ");
            axes = std::pair{*a1, *a2};
        }
        if (o.snr_curve && cfg.task.kind != TaskSpec::Kind::channel)
            throw ConfigError("task.name", "--snr-curve needs the channel task");

        const auto grid = cfg.build_sweep();
        const auto hash = cfg.hash();
        const auto prov = provenance(hash, cfg.seed());
        const auto dir = prepare(cfg.output.dir);

        SweepOptions so;
        so.jobs = o.jobs;
        so.checkpoint_path = (dir / "sweep.checkpoint").string();
        so.resume = o.resume;
        so.config_hash = hash;
        so.stop_after = o.stop_after;
        const auto result = run_sweep(grid, so);
        if (!result.complete)
            throw Error(ErrorCode::runtime, "sweep stopped before completion; rerun with --resume to finish");

        if (cfg.output.csv) write_sweep_csv(result, grid.metric, (dir / "sweep.csv").string(), prov);
        std::size_t failed = 0;
        for (const auto& row : result.rows) failed += row.failed ? 1 : 0;
        if (failed) say(o, LogLevel::warning, std::to_string(failed) + " point(s) failed; see the error column in sweep.checkpoint");

        if (cfg.output.json) {
            ordered_json doc;
            doc["config_hash"] = hash;
            doc["seed"] = cfg.seed();
            doc["metric"] = std::string{to_string(grid.metric)};
            doc["select_on"] = grid.select_on == MetricSelection::test ? "test" : "validation";
            doc["points"] = result.rows.size();
            doc["failed"] = failed;
            doc["dataset_seeds"] = result.dataset_seeds;
            if (result.best) {
                const auto& row = result.best_row();
                doc["best"] = {{"point", point_json(row.point)}, {"mean", number(row.mean)}, {"std", number(row.std)}};
            } else {
                doc["best"] = nullptr;
            }
            write_json(dir / "best.json", doc);
        }
        if (result.best) {
            const auto& row = result.best_row();
            say(o, LogLevel::info,
                "best " + std::string{to_string(grid.metric)} + " = " + format_number(row.mean) + " at k="
                    + std::to_string(row.point.k) + " f1=" + std::to_string(row.point.f1) + " f2="
                    + std::to_string(row.point.f2) + " alpha=" + format_number(row.point.alpha) + " beta="
                    + format_number(row.point.beta) + " phase=" + format_number(row.point.phase));
        } else {
            say(o, LogLevel::warning, "every point failed");
        }

        if (axes) {
            const auto cells = landscape(result, axes->first, axes->second);
            write_landscape_csv(cells, axes->first, axes->second, (dir / "landscape.csv").string(), prov);
        }
        if (o.snr_curve) {
            auto snrs = cfg.sweep->snr_db;
            if (snrs.empty()) snrs = {12, 16, 20, 24, 28, 32};
            const auto curve = snr_curve(grid, snrs, o.jobs);
            for (const auto& w : curve.warnings) say(o, LogLevel::warning, w);
            write_snr_curve_csv(curve, (dir / "snr_curve.csv").string(), prov);
        }
    });
}

int cmd_capacity(const CommandOptions& o)
{
    return guarded(o, [&] {
        const auto cfg = load(o);
        const auto hash = cfg.hash();
        const auto prov = provenance(hash, cfg.seed());
        const auto& s = cfg.capacity_split;
        const auto input = memory_input(s.train + s.validation + s.test, cfg.seed(), Split{s.train, s.validation, s.test});
        const auto mask = cfg.build_mask();
        const auto result = capacity_suite(cfg.reservoir, mask, input.input, cfg.capacity_lags, s,
                                           cfg.readout.ridge_grid, cfg.seed(), cfg.readout.with_bias);
        const auto dir = prepare(cfg.output.dir);
        if (cfg.output.csv) write_capacity_csv(result, (dir / "capacity.csv").string(), prov);
        if (cfg.output.json) {
            ordered_json doc;
            doc["config_hash"] = hash;
            doc["seed"] = cfg.seed();
            doc["n_nodes"] = cfg.reservoir.n_nodes;
            doc["linear"] = result.linear_total;
            doc["quadratic"] = result.quadratic_total;
            doc["cross"] = result.cross_total;
            doc["total"] = result.total();
            write_json(dir / "totals.json", doc);
        }
        say(o, LogLevel::info,
            "linear " + format_number(result.linear_total) + ", quadratic " + format_number(result.quadratic_total)
                + ", cross " + format_number(result.cross_total) + ", total " + format_number(result.total()));
    });
}

int cmd_gen_mask(const CommandOptions& o)
{
    return guarded(o, [&] {
        std::optional<RunConfig> cfg;
        MaskSpec spec;
        std::string dir = "out";
        std::uint64_t seed = 1;
        if (!o.config_path.empty()) {
            cfg = load(o);
            spec = cfg->mask;
            dir = cfg->output.dir;
            seed = cfg->seed();
        } else {
            if (o.out_dir) dir = *o.out_dir;
            if (o.seed) {
                seed = *o.seed;
                spec.seed = *o.seed;
            }
        }
        if (o.mask_family) {
            const auto f = parse_mask_family(*o.mask_family);
            if (!f) throw ConfigError("mask.family", "unknown family '" + *o.mask_family + "'");
            spec.family = *f;
        }
        if (o.n_nodes) spec.n_nodes = *o.n_nodes;
        if (o.f1) spec.f1 = *o.f1;
        if (o.f2) spec.f2 = *o.f2;
        if (o.mask_seed) spec.seed = *o.mask_seed;
        validate(spec);

        const bool explicit_values = cfg && cfg->mask_values && !o.mask_family && !o.n_nodes;
        const auto mask = explicit_values ? cfg->build_mask() : generate_mask(spec);
        std::string canon = "mask.family=" + std::string{to_string(spec.family)} + "\nmask.n_nodes="
                            + std::to_string(spec.n_nodes) + "\nmask.f1=" + std::to_string(spec.f1)
                            + "\nmask.f2=" + std::to_string(spec.f2) + "\nmask.seed=" + std::to_string(spec.seed) + "\n";
        const auto hash = explicit_values ? cfg->hash() : hex64(fnv1a64(canon));
        const auto path = prepare(dir) / "mask.csv";
        write_mask_csv(mask, path.string(), provenance(hash, seed));

        const auto report = mask_degeneracy_report(mask);
        if (report.all_distinct())
            say(o, LogLevel::info, "wrote " + path.string() + " (" + std::to_string(mask.size()) + " distinct coefficients)");
        else
            say(o, LogLevel::warning, "wrote " + path.string() + "; " + std::to_string(report.duplicate_pairs.size())
                                          + " node pair(s) share a coefficient");
    });
}

int cmd_dataset(const CommandOptions& o)
{
    return guarded(o, [&] {
        const auto cfg = load(o);
        const auto dataset = make_dataset(cfg.task);
        const auto path = prepare(cfg.output.dir) / "dataset.csv";
        write_dataset_csv(dataset, path.string(), provenance(cfg.hash(), cfg.seed()));
        say(o, LogLevel::info, "wrote " + path.string() + " (" + std::to_string(dataset.size()) + " samples, split "
                                   + std::to_string(dataset.split.train) + "/" + std::to_string(dataset.split.validation)
                                   + "/" + std::to_string(dataset.split.test) + ")");
    });
}

}  // namespace dlrc

#include "cli.hpp"

#include "cachemodel/config_io.hpp"
#include "cachemodel/error.hpp"
#include "cachemodel/explorer.hpp"
#include "cachemodel/report.hpp"
#include "cachemodel/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

namespace cachemodel::cli {

namespace {

using nlohmann::json;

bool strict_from_env() {
    const char* v = std::getenv("CACHEMODEL_STRICT");
    return v != nullptr && std::string_view(v) == "1";
}

int exit_code_for(std::string_view kind) {
    if (kind == "usage" || kind == "config" || kind == "invalid-parameter") {
        return kExitUsage;
    }
    return kExitRuntime;
}

void emit_error(std::ostream& err, const Error& e) {
    json j = {{"kind", e.kind()}, {"message", e.what()}};
    if (const auto* p = dynamic_cast<const InvalidParameterError*>(&e)) {
        j["field"] = p->field();
    } else if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
        j["path"] = c->path();
    } else if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        j["position"] = pe->position();
        j["token"] = pe->token();
    } else if (const auto* t = dynamic_cast<const TraceError*>(&e)) {
        j["record"] = t->record_index();
    }
    err << json{{"error", j}}.dump() << '\n';
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("io", "cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw Error("io", "failed writing '" + path + "'");
    }
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const std::string& w : warnings) {
        err << "warning: " << w << '\n';
    }
}

struct RunArgs {
    std::string trace;
    std::string params;
    std::string preset;
    std::string format = "json";
    std::string out;
    std::string id = "run";
};

int cmd_run(const RunArgs& a, bool strict, std::ostream& out, std::ostream& err) {
    if (a.params.empty() == a.preset.empty()) {
        throw UsageError("run: give exactly one of --params or --preset");
    }
    LoadedParameters loaded = a.preset.empty() ? load_parameters_file(a.params, strict)
                                               : load_preset(a.preset, strict);
    print_warnings(loaded.warnings, err);
    if (loaded.params.name.empty()) {
        loaded.params.name = a.params;
    }
    const std::vector<TraceRecord> trace = read_trace_file(a.trace, strict);
    RunReport report = run_pipeline(trace, loaded.params);
    report.config_id = a.id;
    write_output(a.out, a.format == "csv" ? format_report_csv(report) : format_report_json(report),
                 out);
    return kExitOk;
}

struct SweepArgs {
    std::string spec;
    unsigned jobs = 1;
    std::string out;
};

int cmd_sweep(const SweepArgs& a, bool strict, std::ostream& out) {
    const SweepSpec spec = load_sweep_spec(a.spec, strict);
    write_output(a.out, run_sweep(spec, a.jobs), out);
    return kExitOk;
}

struct CompareArgs {
    std::string pred;
    std::string ref;
    std::string format = "csv";
    std::string out;
    std::vector<std::string> metrics;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
    const MetricTable pred = read_metric_table(a.pred);
    MetricTable ref = read_metric_table(a.ref);
    if (!a.metrics.empty()) {
        const std::set<std::string> keep(a.metrics.begin(), a.metrics.end());
        for (auto& [id, order] : ref.column_order) {
            std::erase_if(order, [&](const std::string& m) { return !keep.contains(m); });
        }
    }
    const Comparison c = compare(pred, ref);
    print_warnings(c.warnings, err);
    write_output(a.out,
                 a.format == "json" ? comparison_to_json(c).dump(2) + "\n" : format_comparison_csv(c),
                 out);
    return kExitOk;
}

struct TraceGenArgs {
    std::string pattern = "sequential";
    std::uint64_t length = 0;
    std::uint64_t seed = 1;
    std::uint32_t cores = 1;
    std::uint64_t line_size = 64;
    std::uint32_t ifetch_per_data = 3;
    std::uint32_t write_every = 4;
    std::string out;
};

int cmd_trace_gen(const TraceGenArgs& a) {
    SyntheticSpec spec;
    spec.pattern = parse_pattern(a.pattern, a.seed);
    spec.length = a.length;
    spec.core_count = a.cores;
    spec.line_size = a.line_size;
    spec.ifetch_per_data = a.ifetch_per_data;
    spec.write_every = a.write_every;
    write_trace_file(a.out, generate_synthetic(spec));
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cache hierarchy energy/throughput models and trace-driven simulator",
                 "cachemodel"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Simulate a trace and evaluate both models");
    run_cmd->add_option("--trace", run_args.trace, "Trace file (.trc text or .ctrc binary)")
        ->required();
    run_cmd->add_option("--params", run_args.params, "Parameter file (JSON)");
    run_cmd->add_option("--preset", run_args.preset, "Built-in parameter preset");
    run_cmd->add_option("--format", run_args.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--out", run_args.out, "Output file (default stdout)");
    run_cmd->add_option("--id", run_args.id, "Configuration id recorded in the report");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a design-space sweep");
    sweep_cmd->add_option("--spec", sweep_args.spec, "Sweep spec (JSON)")->required();
    sweep_cmd->add_option("--jobs", sweep_args.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    sweep_cmd->add_option("--out", sweep_args.out, "Output CSV (default stdout)");

    CompareArgs cmp_args;
    auto* cmp_cmd = app.add_subcommand("compare", "Percent error of predictions vs references");
    cmp_cmd->add_option("--pred", cmp_args.pred, "Predictions (report JSON/CSV or sweep CSV)")
        ->required();
    cmp_cmd->add_option("--ref", cmp_args.ref, "References (same formats)")->required();
    cmp_cmd->add_option("--format", cmp_args.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmp_cmd->add_option("--metric", cmp_args.metrics, "Restrict to these metric columns");
    cmp_cmd->add_option("--out", cmp_args.out, "Output file (default stdout)");

    auto* presets_cmd = app.add_subcommand("presets", "List or dump built-in presets");
    presets_cmd->require_subcommand(1);
    auto* presets_list = presets_cmd->add_subcommand("list", "List preset names");
    std::string dump_name;
    auto* presets_dump = presets_cmd->add_subcommand("dump", "Print a preset's parameter file");
    presets_dump->add_option("name", dump_name, "Preset name")->required();

    TraceGenArgs gen_args;
    auto* trace_cmd = app.add_subcommand("trace", "Trace utilities");
    trace_cmd->require_subcommand(1);
    auto* gen_cmd = trace_cmd->add_subcommand("gen", "Generate a synthetic trace");
    gen_cmd->add_option("--pattern", gen_args.pattern,
                        "sequential | strided:K | random[:SEED] | loop:SIZE:ITERATIONS");
    gen_cmd->add_option("--len", gen_args.length, "Data records per core");
    gen_cmd->add_option("--seed", gen_args.seed, "Seed for the random pattern");
    gen_cmd->add_option("--cores", gen_args.cores, "Cores")->check(CLI::Range(1u, 255u));
    gen_cmd->add_option("--line-size", gen_args.line_size, "Data line granularity in bytes");
    gen_cmd->add_option("--ifetch-per-data", gen_args.ifetch_per_data,
                        "Instruction fetches before each data record");
    gen_cmd->add_option("--write-every", gen_args.write_every,
                        "Every k-th data record is a write (0: none)");
    gen_cmd->add_option("--out", gen_args.out, "Output (.ctrc = binary, else text)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << '\n';
        return kExitUsage;
    }

    const bool strict = strict_from_env();
    try {
        if (*run_cmd) {
            return cmd_run(run_args, strict, out, err);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_args, strict, out);
        }
        if (*cmp_cmd) {
            return cmd_compare(cmp_args, out, err);
        }
        if (*presets_list) {
            for (const PresetInfo& p : list_presets()) {
                out << p.name << '\t' << p.description << '\n';
            }
            return kExitOk;
        }
        if (*presets_dump) {
            out << preset_text(dump_name) << '\n';
            return kExitOk;
        }
        if (*gen_cmd) {
            return cmd_trace_gen(gen_args);
        }
    } catch (const Error& e) {
        emit_error(err, e);
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace cachemodel::cli

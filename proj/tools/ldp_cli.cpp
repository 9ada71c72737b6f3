#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "ldp/core/ldp.hpp"
#include "ldp/experiment/experiment.hpp"
#include "ldp/graph/edge_list.hpp"
#include "ldp/synth/graphs.hpp"
#include "ldp/synth/scm.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotIdentifiable = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

struct RunArgs {
    std::string data, exposure, outcome, test = "fisher_z", out, graph;
    double alpha = 0.01;
};

int cmd_run(const RunArgs& a) {
    using namespace ldp;
    const auto data = data::read_csv(a.data);
    for (const auto* col : {&a.exposure, &a.outcome})
        if (!data.has(*col)) throw data::DataError("schema error: column '" + *col + "' not found in " + a.data);
    if (a.exposure == a.outcome) throw std::invalid_argument("exposure and outcome must differ");

    std::vector<std::string> candidates;
    for (const auto& c : data.columns())
        if (c != a.exposure && c != a.outcome) candidates.push_back(c);

    std::unique_ptr<ci::CiTester> tester;
    switch (experiment::parse_test_kind(a.test)) {
        case experiment::TestKind::Oracle:
            if (a.graph.empty()) throw std::invalid_argument("--test oracle needs --graph");
            tester = std::make_unique<ci::OracleTester>(graph::read_edge_list(std::filesystem::path(a.graph)));
            break;
        case experiment::TestKind::FisherZ: tester = std::make_unique<ci::FisherZTester>(data, a.alpha); break;
        case experiment::TestKind::ChiSquare: tester = std::make_unique<ci::ChiSquareTester>(data, a.alpha); break;
    }
    const auto result = run_ldp(*tester, candidates, a.exposure, a.outcome);
    const auto json = to_json(result).dump(2) + "\n";
    if (a.out.empty()) {
        std::cout << json;
    } else {
        open_out(a.out) << json;
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    return result.vas ? kOk : kNotIdentifiable;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local Discovery by Partitioning: covariate partitioning and adjustment-set discovery"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "partition the columns of a CSV around an exposure/outcome pair");
    run_cmd->add_option("--data", run.data, "input CSV with a header row")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--exposure", run.exposure, "exposure column")->required();
    run_cmd->add_option("--outcome", run.outcome, "outcome column")->required();
    run_cmd->add_option("--test", run.test, "oracle | fisher_z | chi_square")->capture_default_str();
    run_cmd->add_option("--alpha", run.alpha, "significance level")->capture_default_str();
    run_cmd->add_option("--graph", run.graph, "edge-list file, required by --test oracle");
    run_cmd->add_option("--out", run.out, "output JSON (default: stdout)");

    std::string config_path, exp_out;
    std::size_t workers = 0;
    bool exp_timing = false;
    auto* exp_cmd = app.add_subcommand("experiment", "replicated benchmark run from a JSON config");
    exp_cmd->add_option("--config", config_path, "experiment config JSON")->required()->check(CLI::ExistingFile);
    exp_cmd->add_option("--out", exp_out, "output CSV")->required();
    exp_cmd->add_option("--workers", workers, "worker threads (0 = all cores)")->capture_default_str();
    exp_cmd->add_flag("--with-timing", exp_timing, "write measured runtimes instead of NA");

    std::size_t max_k = 10;
    std::string scaling_out;
    bool scaling_timing = false;
    auto* scaling_cmd = app.add_subcommand("scaling", "oracle test counts on the replicated ten-node graph");
    scaling_cmd->add_option("--max-k", max_k, "largest copies-per-partition k")->check(CLI::Range(1, 10))->capture_default_str();
    scaling_cmd->add_option("--out", scaling_out, "output CSV")->required();
    scaling_cmd->add_flag("--with-timing", scaling_timing, "write measured runtimes instead of NA");

    std::string graph_id, graph_out;
    auto* graphs_cmd = app.add_subcommand("graphs", "built-in benchmark graphs");
    graphs_cmd->require_subcommand(1);
    auto* list_cmd = graphs_cmd->add_subcommand("list", "print graph identifiers");
    auto* export_cmd = graphs_cmd->add_subcommand("export", "write a graph as an edge list");
    export_cmd->add_option("--id", graph_id, "graph identifier")->required();
    export_cmd->add_option("--out", graph_out, "output file (default: stdout)");

    std::string sample_graph, sample_process, sample_out;
    std::size_t sample_n = 10000;
    std::uint64_t sample_seed = 0;
    auto* sample_cmd = app.add_subcommand("sample", "draw a dataset from a preset structural causal model");
    sample_cmd->add_option("--graph", sample_graph, "graph identifier")->required();
    sample_cmd->add_option("--process", sample_process, "process preset")->required();
    sample_cmd->add_option("--n", sample_n, "rows")->capture_default_str();
    sample_cmd->add_option("--seed", sample_seed, "seed")->capture_default_str();
    sample_cmd->add_option("--out", sample_out, "output CSV")->required();

    std::string presets_dir;
    auto* presets_cmd = app.add_subcommand("presets", "structural causal model presets");
    presets_cmd->require_subcommand(1);
    auto* presets_list = presets_cmd->add_subcommand("list", "print graph/process pairs");
    auto* presets_export = presets_cmd->add_subcommand("export", "write every preset as <graph>__<process>.json");
    presets_export->add_option("--dir", presets_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kError;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*exp_cmd) {
            const auto config = ldp::experiment::load_config(config_path);
            const auto result = ldp::experiment::run_experiment(config, workers);
            auto out = open_out(exp_out);
            ldp::experiment::write_experiment_csv(out, result, exp_timing);
            return kOk;
        }
        if (*scaling_cmd) {
            auto out = open_out(scaling_out);
            ldp::experiment::write_scaling_csv(out, ldp::experiment::run_scaling(max_k), scaling_timing);
            return kOk;
        }
        if (*list_cmd) {
            for (const auto& id : ldp::synth::named_graph_ids()) std::cout << id << '\n';
            return kOk;
        }
        if (*export_cmd) {
            const auto g = ldp::synth::named_graph(graph_id);
            if (graph_out.empty()) {
                ldp::graph::write_edge_list(std::cout, g);
            } else {
                auto out = open_out(graph_out);
                ldp::graph::write_edge_list(out, g);
            }
            return kOk;
        }
        if (*presets_list) {
            for (const auto& [g, p] : ldp::synth::preset_pairs()) std::cout << g << ' ' << p << '\n';
            return kOk;
        }
        if (*presets_export) {
            std::filesystem::create_directories(presets_dir);
            for (const auto& [g, p] : ldp::synth::preset_pairs()) {
                auto out = open_out((std::filesystem::path(presets_dir) / (g + "__" + p + ".json")).string());
                out << ldp::synth::to_json(ldp::synth::preset(g, p)).dump(2) << '\n';
            }
            return kOk;
        }
        if (*sample_cmd) {
            const auto spec = ldp::synth::preset(sample_graph, sample_process);
            ldp::data::write_csv(std::filesystem::path(sample_out), ldp::synth::sample(spec, sample_n, sample_seed));
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

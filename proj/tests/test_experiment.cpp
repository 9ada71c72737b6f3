#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ldp/data/dataset.hpp"
#include "ldp/experiment/experiment.hpp"
#include "ldp/synth/scm.hpp"

using namespace ldp;
using experiment::ExperimentConfig;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

json base_config() {
    return json{{"schema_version", 1}, {"graph_id", "ten_node"}, {"process_id", "linear_bernoulli"},
                {"n", 2000},           {"replicates", 3},        {"alpha", 0.001},
                {"test", "chi_square"}, {"seed", 5}};
}

std::string csv(const experiment::ExperimentResult& r) {
    std::ostringstream out;
    experiment::write_experiment_csv(out, r, false);
    return out.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ldp_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(LDP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("config parsing") {
    unsetenv("LDP_SEED");
    const auto c = experiment::parse_config(base_config());
    CHECK(c.graph_id == "ten_node");
    CHECK(c.test == experiment::TestKind::ChiSquare);
    CHECK(c.seed == 5);
    CHECK(c.criterion == Criterion::CommonCause);

    auto unknown = base_config();
    unknown["samples"] = 10;
    CHECK_THROWS_AS(experiment::parse_config(unknown), std::invalid_argument);

    auto version = base_config();
    version.erase("schema_version");
    CHECK_THROWS_AS(experiment::parse_config(version), std::invalid_argument);

    auto hidden = base_config();
    hidden["hidden"] = {"X"};
    CHECK_THROWS_AS(experiment::parse_config(hidden), std::invalid_argument);
    hidden["hidden"] = {"Q"};
    CHECK_THROWS_AS(experiment::parse_config(hidden), std::invalid_argument);

    auto mismatch = base_config();
    mismatch["process_id"] = "linear_gaussian";
    CHECK_THROWS_AS(experiment::parse_config(mismatch), std::invalid_argument);

    auto oracle = json{{"schema_version", 1}, {"graph_id", "latent_18"}, {"test", "oracle"}};
    CHECK_NOTHROW(experiment::parse_config(oracle));

    setenv("LDP_SEED", "77", 1);
    CHECK(experiment::parse_config(base_config()).seed == 77);
    setenv("LDP_SEED", "seven", 1);
    CHECK_THROWS(experiment::parse_config(base_config()));
    unsetenv("LDP_SEED");

    const auto round = experiment::parse_config(json(experiment::to_json(c)));
    CHECK(experiment::to_json(round) == experiment::to_json(c));
}

TEST_CASE("experiments are deterministic and independent of the worker count") {
    unsetenv("LDP_SEED");
    const auto c = experiment::parse_config(base_config());
    const auto a = csv(experiment::run_experiment(c, 1));
    const auto b = csv(experiment::run_experiment(c, 1));
    const auto d = csv(experiment::run_experiment(c, 3));
    CHECK(a == b);
    CHECK(a == d);
    // header, one row per replicate, aggregate
    CHECK(std::count(a.begin(), a.end(), '\n') == 5);
    CHECK(a.rfind("kind,replicate,seed,graph_id", 0) == 0);
    CHECK(a.find("aggregate,") != std::string::npos);
}

TEST_CASE("replicate seeds follow the base seed") {
    const auto c = experiment::parse_config(base_config());
    const auto r = experiment::run_replicate(c, 2);
    CHECK(r.seed == 7);
    CHECK(r.metrics.tests > 0);
}

TEST_CASE("hidden butterfly collider under the oracle") {
    ExperimentConfig c;
    c.graph_id = "latent_18";
    c.test = experiment::TestKind::Oracle;
    c.hidden = {"B3"};
    c.replicates = 2;
    const auto r = experiment::run_experiment(c, 1);
    CHECK(r.report.z5_pass_fraction.mean == 0.0);
    CHECK(r.report.vas_valid_fraction.mean == 0.0);
    for (const auto& rep : r.replicates) CHECK(rep.ldp.labels.count("B3") == 0);
}

TEST_CASE("Fisher-z discovery on linear-Gaussian ten-node data") {
    ExperimentConfig c;
    c.graph_id = "ten_node";
    c.process_id = "linear_gaussian_ate";
    c.test = experiment::TestKind::FisherZ;
    c.alpha = 0.01;
    c.n = 5000;
    c.replicates = 100;
    const auto r = experiment::run_experiment(c, 1);
    int exact = 0;
    for (const auto& rep : r.replicates) exact += rep.ldp.vas == std::vector<std::string>{"Z1"} ? 1 : 0;
    CHECK(exact >= 93);
}

TEST_CASE("scaling rows") {
    const auto rows = experiment::run_scaling(3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].tests_executed == 50);
    CHECK(rows[1].tests_executed == 128);
    CHECK(rows[2].tests_executed == 234);
    CHECK(rows[2].candidates == 24);
    std::ostringstream out;
    experiment::write_scaling_csv(out, rows, false);
    CHECK(out.str().rfind("k,candidates,tests_executed,tests_per_z_squared,runtime_ms\n1,8,50,", 0) == 0);
    CHECK_THROWS(experiment::run_scaling(0));
    CHECK_THROWS(experiment::run_scaling(11));
}

TEST_CASE("command-line exit codes") {
    // isolated candidate only: ran, nothing identifiable
    const auto iso = scratch("isolated.csv");
    {
        std::ofstream out(iso);
        out << "X,Y,W\n";
        for (int i = 0; i < 200; ++i) out << (i % 2) << ',' << ((i / 2) % 2) << ',' << ((i / 4) % 3) << '\n';
    }
    const auto iso_out = scratch("isolated.json");
    fs::remove(iso_out);
    CHECK(cli("run --data " + iso.string() + " --exposure X --outcome Y --test chi_square --out " + iso_out.string()) == 2);
    REQUIRE(fs::exists(iso_out));
    CHECK(json::parse(slurp(iso_out))["vas"].is_null());

    CHECK(cli("run --data " + iso.string() + " --exposure T --outcome Y") == 1);
    CHECK(cli("run --data " + iso.string() + " --exposure X --outcome Y --test magic") == 1);
    CHECK(cli("frobnicate") == 1);

    const auto fig2 = scratch("fig2.csv");
    data::write_csv(fig2, synth::sample(synth::preset("ten_node", "linear_gaussian_ate"), 5000, 3));
    const auto fig2_out = scratch("fig2.json");
    CHECK(cli("run --data " + fig2.string() + " --exposure X --outcome Y --test fisher_z --alpha 0.01 --out " +
              fig2_out.string()) == 0);
    CHECK(json::parse(slurp(fig2_out))["vas"] == json::array({"Z1"}));

    const auto edges = scratch("ten_node.txt");
    CHECK(cli("graphs export --id ten_node --out " + edges.string()) == 0);
    const auto oracle_out = scratch("oracle.json");
    CHECK(cli("run --data " + fig2.string() + " --exposure X --outcome Y --test oracle --graph " + edges.string() +
              " --out " + oracle_out.string()) == 0);
    CHECK(json::parse(slurp(oracle_out))["tests_executed"] == 50);
    CHECK(cli("graphs list") == 0);
    CHECK(cli("graphs export --id nope") == 1);
}

TEST_CASE("command-line outputs are byte-stable") {
    const auto cfg = scratch("config.json");
    {
        std::ofstream out(cfg);
        auto j = base_config();
        j["replicates"] = 1;
        out << j.dump();
    }
    const auto a = scratch("exp_a.csv"), b = scratch("exp_b.csv");
    CHECK(cli("experiment --config " + cfg.string() + " --out " + a.string()) == 0);
    CHECK(cli("experiment --config " + cfg.string() + " --out " + b.string() + " --workers 2") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());

    const auto s1 = scratch("scale_a.csv"), s2 = scratch("scale_b.csv");
    CHECK(cli("scaling --max-k 2 --out " + s1.string()) == 0);
    CHECK(cli("scaling --max-k 2 --out " + s2.string()) == 0);
    CHECK(slurp(s1) == slurp(s2));
    CHECK(cli("scaling --max-k 11 --out " + s1.string()) == 1);

    const auto bad = scratch("bad.json");
    {
        std::ofstream out(bad);
        out << R"({"schema_version": 1, "graph_id": "ten_node", "test": "oracle", "extra": 1})";
    }
    CHECK(cli("experiment --config " + bad.string() + " --out " + a.string()) == 1);
}

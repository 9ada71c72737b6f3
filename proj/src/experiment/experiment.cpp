#include "ldp/experiment/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "ldp/graph/adjustment.hpp"
#include "ldp/synth/graphs.hpp"
#include "ldp/synth/scm.hpp"

namespace ldp::experiment {

namespace {

const std::set<std::string> kConfigKeys{"schema_version", "graph_id", "process_id", "n",    "replicates",
                                        "alpha",          "test",     "hidden",     "seed", "criterion"};

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + v[i];
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(TestKind t) {
    switch (t) {
        case TestKind::Oracle: return "oracle";
        case TestKind::FisherZ: return "fisher_z";
        case TestKind::ChiSquare: return "chi_square";
    }
    return "?";
}

TestKind parse_test_kind(std::string_view text) {
    for (auto t : {TestKind::Oracle, TestKind::FisherZ, TestKind::ChiSquare})
        if (to_string(t) == text) return t;
    throw std::invalid_argument("unknown test: " + std::string(text));
}

void ExperimentConfig::validate() const {
    const auto g = synth::named_graph(graph_id);
    if (replicates == 0) throw std::invalid_argument("replicates must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    for (const auto& h : hidden) {
        const auto id = g.find(h);
        if (!id) throw std::invalid_argument("hidden variable is not a node of " + graph_id + ": " + h);
        if (*id == g.exposure() || *id == g.outcome()) throw std::invalid_argument("cannot hide the exposure or outcome");
    }
    if (test != TestKind::Oracle) {
        if (n == 0) throw std::invalid_argument("n must be at least 1");
        const auto spec = synth::preset(graph_id, process_id);
        if (test == TestKind::ChiSquare && !spec.discretize)
            throw std::invalid_argument("chi_square needs a discrete process, got " + process_id);
    }
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!kConfigKeys.count(key)) throw std::invalid_argument("unknown config key: " + key);
    }
    if (!j.contains("schema_version") || j.at("schema_version") != kConfigSchemaVersion)
        throw std::invalid_argument("config needs \"schema_version\": " + std::to_string(kConfigSchemaVersion));

    ExperimentConfig c;
    try {
        c.graph_id = j.at("graph_id").get<std::string>();
        c.test = parse_test_kind(j.at("test").get<std::string>());
        c.process_id = j.value("process_id", std::string());
        c.n = j.value("n", c.n);
        c.replicates = j.value("replicates", c.replicates);
        c.alpha = j.value("alpha", c.alpha);
        c.hidden = j.value("hidden", c.hidden);
        c.seed = j.value("seed", c.seed);
        if (j.contains("criterion")) c.criterion = parse_criterion(j.at("criterion").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed config: ") + e.what());
    }
    if (const char* env = std::getenv("LDP_SEED"); env && *env) {
        std::uint64_t seed = 0;
        const auto* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, seed);
        if (ec != std::errc() || ptr != end) throw std::invalid_argument("LDP_SEED must be a non-negative integer");
        c.seed = seed;
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["graph_id"] = c.graph_id;
    j["process_id"] = c.process_id;
    j["n"] = c.n;
    j["replicates"] = c.replicates;
    j["alpha"] = c.alpha;
    j["test"] = std::string(to_string(c.test));
    j["hidden"] = c.hidden;
    j["seed"] = c.seed;
    j["criterion"] = std::string(to_string(c.criterion));
    return j;
}

ReplicateResult run_replicate(const ExperimentConfig& config, std::size_t index) {
    ReplicateResult out;
    out.index = index;
    out.seed = config.seed + index;

    const auto g = synth::named_graph(config.graph_id);
    const std::string x = g.name(g.exposure());
    const std::string y = g.name(g.outcome());
    const std::set<std::string> hidden(config.hidden.begin(), config.hidden.end());
    std::vector<std::string> candidates;
    for (const auto& c : g.names_of(g.candidates()))
        if (!hidden.count(c)) candidates.push_back(c);

    std::optional<data::Dataset> data;
    std::optional<synth::ScmSpec> spec;
    std::unique_ptr<ci::CiTester> tester;
    if (config.test == TestKind::Oracle) {
        tester = std::make_unique<ci::OracleTester>(g);
    } else {
        spec = synth::preset(config.graph_id, config.process_id);
        data = data::mask_latents(synth::sample(*spec, config.n, out.seed), config.hidden, x, y);
        if (config.test == TestKind::FisherZ)
            tester = std::make_unique<ci::FisherZTester>(*data, config.alpha);
        else
            tester = std::make_unique<ci::ChiSquareTester>(*data, config.alpha);
    }

    const auto start = std::chrono::steady_clock::now();
    out.ldp = run_ldp(*tester, candidates, x, y);
    out.metrics.runtime_ms = elapsed_ms(start);

    const auto full_truth = graph::ground_truth_partition(g);
    graph::LabelMap truth;
    for (const auto& c : candidates) truth.emplace(c, full_truth.at(c));

    out.selected = select_covariates(out.ldp, config.criterion);
    out.metrics.accuracy = eval::partition_accuracy(out.ldp.labels, truth);
    std::tie(out.metrics.z1_precision, out.metrics.z1_recall) = eval::z1_precision_recall(out.selected, full_truth);
    out.metrics.z5_passed = out.ldp.z5_criterion_passed;
    out.metrics.vas_valid = out.ldp.vas && graph::is_valid_adjustment_set(g, *out.ldp.vas);
    out.metrics.tests = static_cast<double>(out.ldp.counters.executed);
    if (spec && !spec->discretize) {
        out.metrics.ate = eval::ate_estimate(*data, x, y, out.selected);
        out.metrics.ate_true = synth::linear_total_effect(*spec, out.seed);
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
    config.validate();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, config.replicates);

    ExperimentResult result;
    result.config = config;
    result.replicates.resize(config.replicates);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < config.replicates; i = next++) {
                    try {
                        result.replicates[i] = run_replicate(config, i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = config.replicates;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<eval::ReplicateMetrics> metrics;
    for (const auto& r : result.replicates) metrics.push_back(r.metrics);
    result.report = eval::aggregate(metrics);
    return result;
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result, bool with_timing) {
    const auto& c = result.config;
    const bool oracle = c.test == TestKind::Oracle;
    const std::string prefix = csv_field(c.graph_id) + "," + csv_field(oracle ? "" : c.process_id) + "," +
                               std::string(to_string(c.test)) + "," + (oracle ? "" : std::to_string(c.n)) + "," +
                               (oracle ? "" : num(c.alpha)) + "," + csv_field(join(c.hidden, '|')) + "," +
                               std::string(to_string(c.criterion));

    out << "kind,replicate,seed,graph_id,process_id,test,n,alpha,hidden,criterion";
    for (const char* m : {"accuracy", "z1_precision", "z1_recall", "vas_valid", "z5_pass", "ate", "ate_sq_error",
                          "tests", "runtime_ms"})
        out << ',' << m << ',' << m << "_lo," << m << "_hi";
    out << ",vas\n";

    auto point = [](const std::string& v) { return v + ",,"; };
    for (const auto& r : result.replicates) {
        const auto& m = r.metrics;
        out << "replicate," << r.index << ',' << r.seed << ',' << prefix << ',';
        out << point(num(m.accuracy)) << ',' << point(num(m.z1_precision)) << ',' << point(num(m.z1_recall)) << ','
            << point(m.vas_valid ? "1" : "0") << ',' << point(m.z5_passed ? "1" : "0") << ','
            << point(m.ate ? num(*m.ate) : "") << ','
            << point(m.ate && m.ate_true ? num((*m.ate - *m.ate_true) * (*m.ate - *m.ate_true)) : "") << ','
            << point(num(m.tests)) << ',' << point(with_timing ? num(m.runtime_ms) : "NA") << ',';
        out << csv_field(r.ldp.vas ? join(*r.ldp.vas, '|') : "NA") << '\n';
    }

    const auto& rep = result.report;
    auto interval = [](const eval::Interval& i) { return num(i.mean) + "," + num(i.lo) + "," + num(i.hi); };
    auto optional = [&](const std::optional<eval::Interval>& i) { return i ? interval(*i) : std::string(",,"); };
    out << "aggregate,all," << c.seed << ',' << prefix << ',' << interval(rep.partition_accuracy) << ','
        << interval(rep.z1_precision) << ',' << interval(rep.z1_recall) << ',' << interval(rep.vas_valid_fraction)
        << ',' << interval(rep.z5_pass_fraction) << ',' << optional(rep.ate) << ',' << optional(rep.ate_mse) << ','
        << interval(rep.tests) << ',' << (with_timing ? interval(rep.runtime_ms) : std::string("NA,NA,NA")) << ",\n";
}

std::vector<ScalingRow> run_scaling(std::size_t max_k) {
    if (max_k < 1 || max_k > 10) throw std::invalid_argument("max-k must lie in [1, 10]");
    std::vector<ScalingRow> rows;
    for (std::size_t k = 1; k <= max_k; ++k) {
        const auto g = synth::scaling_graph(k);
        ci::OracleTester tester(g);
        const auto candidates = g.names_of(g.candidates());
        const auto start = std::chrono::steady_clock::now();
        const auto result = run_ldp(tester, candidates, "X", "Y");
        rows.push_back({k, candidates.size(), result.counters.executed, elapsed_ms(start)});
    }
    return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows, bool with_timing) {
    out << "k,candidates,tests_executed,tests_per_z_squared,runtime_ms\n";
    for (const auto& r : rows) {
        const double z2 = static_cast<double>(r.candidates) * static_cast<double>(r.candidates);
        out << r.k << ',' << r.candidates << ',' << r.tests_executed << ','
            << num(static_cast<double>(r.tests_executed) / z2) << ',' << (with_timing ? num(r.runtime_ms) : "NA")
            << '\n';
    }
}

}  // namespace ldp::experiment

// Copyright 2026 The clusterforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "clusterforge/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>
#include <type_traits>
#include <utility>

#include "clusterforge/analytics.h"
#include "clusterforge/counting_fabric.h"
#include "clusterforge/errors.h"
#include "clusterforge/exact_fabric.h"
#include "clusterforge/protocols.h"
#include "clusterforge/random.h"

namespace clusterforge {

namespace {

constexpr std::pair<Workload, std::string_view> kWorkloadNames[] = {
    {Workload::kRepeater, "repeater"}, {Workload::kConnect, "connect"}, {Workload::kCombined, "combined"},
    {Workload::kPlus, "plus"},         {Workload::kLattice, "lattice"},
};

size_t plus_leg_length(const ExperimentConfig &c) {
    return c.params.n_l;
}

size_t connect_length(const ExperimentConfig &c) {
    return c.params.n0 ? c.params.n0 : c.n;
}

/// Upper estimate of the qubits a combined build of n touches at once.
size_t combined_footprint(size_t n, const ProtocolParams &params) {
    CombinedPlan plan = plan_combined(n, params);
    if (plan.repeater_only) {
        return size_t{1} << plan.exponent;
    }
    // The extension loop rarely runs; one extra doubling of headroom covers it.
    return plan.seed_length << (plan.rounds + 1);
}

struct Outcome {
    uint64_t final_size = 0;
    bool success = false;
};

struct Target {
    std::vector<uint64_t> vertices;
    std::vector<std::pair<uint64_t, uint64_t>> edges;
};

Target chain_target(const ExactFabric::Chain &c) {
    Target t;
    t.vertices.assign(c.qubits.begin(), c.qubits.end());
    for (size_t k = 1; k < c.qubits.size(); k++) {
        t.edges.emplace_back(c.qubits[k - 1], c.qubits[k]);
    }
    return t;
}

Target plus_target(const ExactFabric::Plus &s) {
    Target t;
    t.vertices.push_back(s.center);
    for (const auto &leg : s.legs) {
        uint64_t prev = s.center;
        for (uint64_t q : leg) {
            t.vertices.push_back(q);
            t.edges.emplace_back(prev, q);
            prev = q;
        }
    }
    return t;
}

Target lattice_target(const LatticeBuild<ExactFabric> &lattice) {
    Target t;
    for (const auto &node : lattice.nodes) {
        t.vertices.push_back(node.center);
    }
    for (const GridEdge &e : grid_edges(lattice.rows, lattice.cols)) {
        t.edges.emplace_back(lattice.nodes[e.a].center, lattice.nodes[e.b].center);
    }
    return t;
}

/// Runs the configured workload. `inspect` sees the final object of a successful build.
template <class Fabric, class Inspect>
Outcome run_workload(Fabric &f, const ExperimentConfig &c, Inspect &&inspect) {
    uint64_t restarts = 0;
    switch (c.workload) {
        case Workload::kRepeater: {
            auto chain = build_chain_repeater(f, c.m, restarts);
            inspect(chain);
            return {f.length(chain), true};
        }
        case Workload::kConnect: {
            size_t n0 = connect_length(c);
            auto a = f.provision_chain(n0);
            auto b = f.provision_chain(n0);
            if (!connect_and_repair(f, a, b)) {
                f.discard(a);
                f.discard(b);
                return {0, false};
            }
            inspect(a);
            return {f.length(a), true};
        }
        case Workload::kCombined: {
            auto built = build_chain_combined(f, c.n);
            inspect(built.chain);
            return {f.length(built.chain), true};
        }
        case Workload::kPlus: {
            auto built = build_plus_shape(f, plus_leg_length(c));
            inspect(built.plus);
            return {f.live_qubits(), true};
        }
        case Workload::kLattice: {
            auto lattice = build_square_lattice(f, c.rows, c.cols, LatticeOptions{c.simulate_blocks});
            if (lattice.success) {
                inspect(lattice);
            }
            return {f.live_qubits(), lattice.success};
        }
    }
    throw std::logic_error("Unhandled workload.");
}

VerifyReport check_target(const ExactFabric &f, const Target &t) {
    VerifyReport r;
    r.built = true;
    r.total = t.vertices.size();
    for (uint64_t v : t.vertices) {
        r.satisfied += f.verify({&v, 1}, t.edges);
    }
    r.bookkeeping = f.verify_bookkeeping();
    return r;
}

struct ExactRun {
    TrialRecord record;
    VerifyReport report;
};

TrialRecord make_record(uint64_t index, uint64_t seed, const FabricCore &f, Outcome o) {
    const ResourceLedger &l = f.ledger();
    TrialRecord r;
    r.trial = index;
    r.seed = seed;
    r.attempts = l.cpf_attempts;
    r.successes = l.cpf_successes;
    r.z_measurements = l.z_measurements;
    r.x_measurements = l.x_measurements;
    r.time = l.elapsed_time;
    r.final_size = o.final_size;
    r.success = o.success;
    return r;
}

ExactRun run_exact(const ExperimentConfig &config, uint64_t index) {
    check_exact_cap(config);
    ProtocolParams params = config.params;
    params.seed = trial_seed(config.params.seed, index);
    ExactFabric f(params, config.cap);
    ExactRun run;
    auto inspect = [&](const auto &built) {
        using T = std::decay_t<decltype(built)>;
        if constexpr (std::is_same_v<T, ExactFabric::Chain>) {
            run.report = check_target(f, chain_target(built));
        } else if constexpr (std::is_same_v<T, ExactFabric::Plus>) {
            run.report = check_target(f, plus_target(built));
        } else {
            run.report = check_target(f, lattice_target(built));
        }
    };
    Outcome o = run_workload(f, config, inspect);
    f.audit();
    run.record = make_record(index, params.seed, f, o);
    return run;
}

double get_double(const Summary &s, const std::string &key) {
    auto it = s.find(key);
    if (it == s.end()) {
        throw SchemaError("Summary is missing '" + key + "'.");
    }
    try {
        size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) {
            throw SchemaError("Summary value of '" + key + "' is not a number.");
        }
        return v;
    } catch (const std::logic_error &) {
        throw SchemaError("Summary value of '" + key + "' is not a number.");
    }
}

const std::string &get_string(const Summary &s, const std::string &key) {
    auto it = s.find(key);
    if (it == s.end()) {
        throw SchemaError("Summary is missing '" + key + "'.");
    }
    return it->second;
}

template <class Fn>
double or_nan(Fn &&fn) {
    try {
        return fn();
    } catch (const std::exception &) {
        return std::nan("");
    }
}

}  // namespace

std::string_view backend_name(Backend b) {
    return b == Backend::kExact ? "exact" : "counting";
}

Backend parse_backend(std::string_view text) {
    if (text == "exact") {
        return Backend::kExact;
    }
    if (text == "counting") {
        return Backend::kCounting;
    }
    throw std::invalid_argument("Unknown backend '" + std::string(text) + "'.");
}

std::string_view workload_name(Workload w) {
    for (const auto &[k, name] : kWorkloadNames) {
        if (k == w) {
            return name;
        }
    }
    return "?";
}

Workload parse_workload(std::string_view text) {
    for (const auto &[k, name] : kWorkloadNames) {
        if (name == text) {
            return k;
        }
    }
    throw std::invalid_argument("Unknown workload '" + std::string(text) + "'.");
}

void ExperimentConfig::validate() const {
    params.validate();
    if (trials == 0) {
        throw std::invalid_argument("trials must be at least 1.");
    }
    if (cap == 0) {
        throw std::invalid_argument("cap must be at least 1.");
    }
    switch (workload) {
        case Workload::kRepeater:
            if (m > 40) {
                throw std::invalid_argument("m is too large.");
            }
            break;
        case Workload::kConnect:
            if (connect_length(*this) == 0) {
                throw std::invalid_argument("connect needs chains of at least one qubit.");
            }
            break;
        case Workload::kCombined:
            if (n == 0) {
                throw std::invalid_argument("n must be at least 1.");
            }
            break;
        case Workload::kPlus:
            if (params.n_l == 0) {
                throw std::invalid_argument("plus needs a leg length n_l >= 1.");
            }
            break;
        case Workload::kLattice:
            if (rows < 2 || cols < 2) {
                throw std::invalid_argument("The lattice needs at least 2 rows and 2 columns.");
            }
            break;
    }
}

void check_exact_cap(const ExperimentConfig &c) {
    size_t need = 0;
    switch (c.workload) {
        case Workload::kRepeater:
            need = size_t{1} << std::min(c.m, 62u);
            break;
        case Workload::kConnect:
            need = 2 * connect_length(c);
            break;
        case Workload::kCombined:
            need = combined_footprint(c.n, c.params);
            break;
        case Workload::kPlus:
            need = 2 * combined_footprint(2 * plus_leg_length(c) + 1, c.params);
            break;
        case Workload::kLattice: {
            size_t N = c.rows * c.cols;
            size_t n_l = c.params.n_l ? c.params.n_l : leg_length(N, c.params.epsilon, c.params.p);
            need = N * (4 * n_l + 1);
            if (c.simulate_blocks) {
                need += 2 * combined_footprint(2 * n_l + 1, c.params);
            }
            break;
        }
    }
    if (need > c.cap) {
        throw CapExceeded(
            "Exact backend needs about " + std::to_string(need) + " qubits, over the cap of " + std::to_string(c.cap) +
            ".");
    }
}

TrialRecord run_trial(const ExperimentConfig &config, uint64_t index) {
    if (config.backend == Backend::kExact) {
        ExactRun run = run_exact(config, index);
        if (run.record.success &&
            (run.report.satisfied != run.report.total || !run.report.bookkeeping)) {
            throw AuditFailure(
                "Trial " + std::to_string(index) + ": " + std::to_string(run.report.satisfied) + "/" +
                std::to_string(run.report.total) + " stabilizers satisfied.");
        }
        return run.record;
    }
    ProtocolParams params = config.params;
    params.seed = trial_seed(config.params.seed, index);
    CountingFabric f(params);
    Outcome o = run_workload(f, config, [](const auto &) {});
    f.audit();
    return make_record(index, params.seed, f, o);
}

VerifyReport verify_trial(const ExperimentConfig &config, uint64_t index) {
    return run_exact(config, index).report;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig &config) {
    config.validate();
    if (config.backend == Backend::kExact) {
        check_exact_cap(config);
    }
    std::vector<TrialRecord> records(config.trials);
    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<uint64_t>(threads, config.trials));

    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (true) {
            uint64_t i = next.fetch_add(1);
            if (i >= config.trials) {
                return;
            }
            try {
                records[i] = run_trial(config, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(config.trials);
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return records;
}

std::vector<TrialStats> aggregate(const std::vector<TrialRecord> &records) {
    RunningStats attempts, successes, z, x, time, size, ok;
    for (const TrialRecord &r : records) {
        attempts.add(static_cast<double>(r.attempts));
        successes.add(static_cast<double>(r.successes));
        z.add(static_cast<double>(r.z_measurements));
        x.add(static_cast<double>(r.x_measurements));
        time.add(r.time);
        size.add(static_cast<double>(r.final_size));
        ok.add(r.success ? 1.0 : 0.0);
    }
    return {
        TrialStats::from("attempts", attempts),       TrialStats::from("successes", successes),
        TrialStats::from("z_measurements", z),        TrialStats::from("x_measurements", x),
        TrialStats::from("time", time),               TrialStats::from("final_size", size),
        TrialStats::from("success", ok),
    };
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(std::ostream &out, const std::vector<TrialRecord> &records) {
    out << "trial,seed,attempts,successes,z_measurements,x_measurements,time,final_size,success\n";
    for (const TrialRecord &r : records) {
        out << r.trial << ',' << r.seed << ',' << r.attempts << ',' << r.successes << ',' << r.z_measurements << ','
            << r.x_measurements << ',' << format_double(r.time) << ',' << r.final_size << ',' << (r.success ? 1 : 0)
            << '\n';
    }
}

Summary make_summary(const ExperimentConfig &c, const std::vector<TrialStats> &stats) {
    Summary s;
    s["config.workload"] = workload_name(c.workload);
    s["config.backend"] = backend_name(c.backend);
    s["config.p"] = format_double(c.params.p);
    s["config.epsilon"] = format_double(c.params.epsilon);
    s["config.ta_seconds"] = format_double(c.params.ta_seconds);
    s["config.time_model"] = time_model_name(c.params.time_model);
    s["config.seed"] = std::to_string(c.params.seed);
    s["config.n"] = std::to_string(c.n);
    s["config.m"] = std::to_string(c.m);
    s["config.n0"] = std::to_string(c.params.n0);
    s["config.n_l"] = std::to_string(c.params.n_l);
    s["config.rows"] = std::to_string(c.rows);
    s["config.cols"] = std::to_string(c.cols);
    s["config.blocks"] = c.simulate_blocks ? "simulate" : "provision";
    s["config.trials"] = std::to_string(c.trials);

    for (const TrialStats &t : stats) {
        s[t.metric + ".count"] = std::to_string(t.count);
        s[t.metric + ".mean"] = format_double(t.mean);
        s[t.metric + ".variance"] = format_double(t.variance);
        s[t.metric + ".stderr"] = format_double(t.std_error);
        s[t.metric + ".min"] = format_double(t.min);
        s[t.metric + ".max"] = format_double(t.max);
        if (t.metric == "time") {
            s["time.mean_seconds"] = format_double(t.mean * c.params.ta_seconds);
        }
    }

    AnalyticReport report;
    double p = c.params.p;
    switch (c.workload) {
        case Workload::kRepeater:
            report = repeater_report(c.m, p);
            break;
        case Workload::kConnect:
            report.n_c = critical_length(p);
            report.n0 = connect_length(c);
            report.terms = {
                {"length_exact", expected_connected_length(report.n0, p, true)},
                {"length_approx", expected_connected_length(report.n0, p, false)},
            };
            break;
        case Workload::kCombined:
            report = chain_report(c.n, p);
            break;
        case Workload::kPlus:
            report = chain_report(2 * c.params.n_l + 1, p);
            report.n_l = c.params.n_l;
            break;
        case Workload::kLattice:
            report = lattice_report(c.rows, c.cols, c.params.epsilon, p);
            if (c.params.n_l) {
                report.n_l = c.params.n_l;
                report.p_c = edge_success_prob(p, report.n_l);
            }
            break;
    }
    s["analytic.n_c"] = format_double(report.n_c);
    s["analytic.n0"] = std::to_string(report.n0);
    s["analytic.T_pred"] = format_double(report.T_pred);
    s["analytic.M_pred"] = format_double(report.M_pred);
    s["analytic.T_pred_seconds"] = format_double(report.T_pred * c.params.ta_seconds);
    s["analytic.n_l"] = std::to_string(report.n_l);
    s["analytic.p_c"] = format_double(report.p_c);
    for (const auto &[name, value] : report.terms) {
        s["analytic.term." + name] = format_double(value);
    }
    if (c.workload == Workload::kLattice && std::abs(p - 0.1) < 1e-12 && std::abs(c.params.ta_seconds - 100e-9) < 1e-15) {
        double first = lattice_terms(c.rows * c.cols, c.params.epsilon, p).chains_time;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "block preparation term %.3g t_a = %.3g ms at 100 ns per attempt", first,
                      first * c.params.ta_seconds * 1e3);
        s["note.coherence_budget"] = buf;
    }
    return s;
}

void write_summary(std::ostream &out, const Summary &summary) {
    for (const auto &[k, v] : summary) {
        out << k << ": " << v << '\n';
    }
}

Summary read_summary(std::istream &in) {
    Summary s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        size_t colon = line.find(": ");
        if (colon == std::string::npos) {
            throw SchemaError("Malformed summary line: '" + line + "'.");
        }
        s[line.substr(0, colon)] = line.substr(colon + 2);
    }
    return s;
}

ExperimentConfig config_from_summary(const Summary &s) {
    ExperimentConfig c;
    try {
        c.workload = parse_workload(get_string(s, "config.workload"));
        c.backend = parse_backend(get_string(s, "config.backend"));
        c.params.time_model = parse_time_model(get_string(s, "config.time_model"));
    } catch (const SchemaError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw SchemaError(e.what());
    }
    c.params.p = get_double(s, "config.p");
    c.params.epsilon = get_double(s, "config.epsilon");
    c.params.ta_seconds = get_double(s, "config.ta_seconds");
    c.params.seed = static_cast<uint64_t>(std::stoull(get_string(s, "config.seed")));
    c.n = static_cast<size_t>(get_double(s, "config.n"));
    c.m = static_cast<unsigned>(get_double(s, "config.m"));
    c.params.n0 = static_cast<size_t>(get_double(s, "config.n0"));
    c.params.n_l = static_cast<size_t>(get_double(s, "config.n_l"));
    c.rows = static_cast<size_t>(get_double(s, "config.rows"));
    c.cols = static_cast<size_t>(get_double(s, "config.cols"));
    c.simulate_blocks = get_string(s, "config.blocks") != "provision";
    c.trials = static_cast<uint64_t>(get_double(s, "config.trials"));
    try {
        c.validate();
    } catch (const std::invalid_argument &e) {
        throw SchemaError(e.what());
    }
    return c;
}

std::vector<ComparisonRow> compare(const Summary &s) {
    ExperimentConfig c = config_from_summary(s);
    double p = c.params.p;
    bool mean_field = c.params.time_model == TimeModel::kMeanField;
    const double nan = std::nan("");

    std::vector<ComparisonRow> rows;
    auto add = [&](const std::string &metric, double exact, double closed) {
        ComparisonRow r;
        r.metric = metric;
        r.mean = get_double(s, metric + ".mean");
        r.std_error = get_double(s, metric + ".stderr");
        r.analytic_exact = exact;
        r.analytic_closed = closed;
        r.z = std::isnan(exact) ? nan : z_score(r.mean, exact, r.std_error);
        r.flagged = !std::isnan(r.z) && std::abs(r.z) > 3;
        rows.push_back(r);
    };

    switch (c.workload) {
        case Workload::kRepeater: {
            double n = std::ldexp(1.0, static_cast<int>(c.m));
            add("attempts", repeater_M(n, p, true), or_nan([&] { return repeater_M(n, p, false); }));
            add("time", mean_field ? repeater_T(n, p, true) : nan, or_nan([&] { return repeater_T(n, p, false); }));
            add("final_size", n, n);
            break;
        }
        case Workload::kConnect: {
            size_t n0 = connect_length(c);
            add("final_size", expected_connected_length(n0, p, true), expected_connected_length(n0, p, false));
            break;
        }
        case Workload::kCombined: {
            double n = static_cast<double>(c.n);
            add("attempts", nan, or_nan([&] { return combined_M(n, p); }));
            add("time", nan, or_nan([&] { return combined_T(n, p); }));
            break;
        }
        case Workload::kPlus:
            add("attempts", nan, nan);
            add("time", nan, nan);
            break;
        case Workload::kLattice: {
            size_t N = c.rows * c.cols;
            size_t n_l = c.params.n_l ? c.params.n_l : leg_length(N, c.params.epsilon, p);
            double pc = edge_success_prob(p, n_l);
            add("success", std::pow(pc, static_cast<double>(grid_edge_count(c.rows, c.cols))),
                std::pow(pc, 2.0 * static_cast<double>(N)));
            double closed_M = c.simulate_blocks ? or_nan([&] { return lattice_M(N, c.params.epsilon, p); }) : nan;
            double closed_T = c.simulate_blocks ? or_nan([&] { return lattice_T(N, c.params.epsilon, p); }) : nan;
            add("attempts", nan, closed_M);
            add("time", nan, closed_T);
            break;
        }
    }
    return rows;
}

void write_comparison(std::ostream &out, const std::vector<ComparisonRow> &rows) {
    out << "metric\tempirical_mean\tstderr\tanalytic_exact\tanalytic_closed\tz\tstatus\tnote\n";
    for (const ComparisonRow &r : rows) {
        std::string status = std::isnan(r.z) ? "n/a" : (r.flagged ? "FLAG" : "ok");
        std::string note;
        if (!std::isnan(r.analytic_exact) && !std::isnan(r.analytic_closed) &&
            std::abs(r.analytic_exact - r.analytic_closed) > 1e-9 * std::max(1.0, std::abs(r.analytic_exact))) {
            note = "closed-form approximation gap";
        }
        out << r.metric << '\t' << format_double(r.mean) << '\t' << format_double(r.std_error) << '\t'
            << format_double(r.analytic_exact) << '\t' << format_double(r.analytic_closed) << '\t'
            << format_double(r.z) << '\t' << status << '\t' << note << '\n';
    }
}

}  // namespace clusterforge

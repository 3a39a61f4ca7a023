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


// Command-line driver: chain | lattice | verify | sweep | compare.
//
// Exit codes: 0 ok, 2 usage or schema error, 3 exact-backend cap refusal,
// 4 invariant or stabilizer audit failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clusterforge/analytics.h"
#include "clusterforge/errors.h"
#include "clusterforge/experiment.h"

namespace {

using namespace clusterforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitAudit = 4;

struct Options {
    double p = 0.5;
    double eps = 0.05;
    uint64_t trials = 1;
    uint64_t seed = 0;
    std::string backend = "counting";
    std::string time_model = "mean_field";
    double ta_seconds = 100e-9;
    std::string out;
    unsigned threads = 0;
    size_t cap = 4096;

    size_t n = 64;
    unsigned m = 3;
    size_t n0 = 0;
    size_t nl = 0;
    size_t rows = 3;
    size_t cols = 3;
    std::string protocol = "combined";
    std::string blocks = "simulate";
    std::string shape = "chain";

    std::vector<double> p_list;
    std::vector<size_t> n_list;
    std::string summary;
};

ExperimentConfig base_config(const Options &o) {
    ExperimentConfig c;
    c.backend = parse_backend(o.backend);
    c.params.p = o.p;
    c.params.epsilon = o.eps;
    c.params.seed = o.seed;
    c.params.time_model = parse_time_model(o.time_model);
    c.params.ta_seconds = o.ta_seconds;
    c.params.n0 = o.n0;
    c.params.n_l = o.nl;
    c.n = o.n;
    c.m = o.m;
    c.rows = o.rows;
    c.cols = o.cols;
    if (o.blocks != "simulate" && o.blocks != "provision") {
        throw std::invalid_argument("--blocks must be simulate or provision.");
    }
    c.simulate_blocks = o.blocks == "simulate";
    c.trials = o.trials;
    c.threads = o.threads;
    c.cap = o.cap;
    return c;
}

/// Opens `path` for writing, or returns stdout when path is empty.
class Output {
   public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw std::invalid_argument("Cannot write '" + path + "'.");
            }
        }
    }
    std::ostream &stream() {
        return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout;
    }

   private:
    std::ofstream file_;
};

int run_experiment(const ExperimentConfig &config, const Options &o) {
    config.validate();
    std::vector<TrialRecord> records = run_trials(config);
    Summary summary = make_summary(config, aggregate(records));
    if (o.out.empty()) {
        write_summary(std::cout, summary);
        return kExitOk;
    }
    Output csv(o.out + ".csv");
    write_csv(csv.stream(), records);
    Output text(o.out + ".summary.txt");
    write_summary(text.stream(), summary);
    return kExitOk;
}

int cmd_chain(const Options &o) {
    ExperimentConfig c = base_config(o);
    c.workload = parse_workload(o.protocol);
    if (c.workload == Workload::kPlus || c.workload == Workload::kLattice) {
        throw std::invalid_argument("--protocol must be combined, repeater or connect.");
    }
    return run_experiment(c, o);
}

int cmd_lattice(const Options &o) {
    ExperimentConfig c = base_config(o);
    c.workload = Workload::kLattice;
    return run_experiment(c, o);
}

int cmd_verify(const Options &o) {
    ExperimentConfig c = base_config(o);
    if (c.backend != Backend::kExact) {
        throw std::invalid_argument("verify runs on the exact backend (--backend exact).");
    }
    if (o.shape == "chain") {
        c.workload = Workload::kCombined;
    } else if (o.shape == "plus") {
        c.workload = Workload::kPlus;
    } else if (o.shape == "lattice") {
        c.workload = Workload::kLattice;
    } else {
        throw std::invalid_argument("--shape must be chain, plus or lattice.");
    }
    c.validate();
    check_exact_cap(c);

    Output out(o.out);
    size_t built = 0;
    size_t satisfied = 0;
    size_t total = 0;
    bool ok = true;
    for (uint64_t i = 0; i < c.trials; i++) {
        VerifyReport r = verify_trial(c, i);
        if (!r.built) {
            continue;
        }
        built++;
        satisfied += r.satisfied;
        total += r.total;
        ok = ok && r.satisfied == r.total && r.bookkeeping;
    }
    out.stream() << "runs: " << c.trials << '\n';
    out.stream() << "built: " << built << '\n';
    out.stream() << "stabilizers: " << satisfied << '/' << total << " satisfied\n";
    out.stream() << "bookkeeping: " << (ok ? "consistent" : "INCONSISTENT") << '\n';
    return ok ? kExitOk : kExitAudit;
}

int cmd_sweep(const Options &o) {
    if (o.p_list.empty() && o.n_list.empty()) {
        throw std::invalid_argument("sweep needs --p-list and/or --n-list.");
    }
    ExperimentConfig base = base_config(o);
    base.workload = parse_workload(o.protocol);
    std::vector<double> ps = o.p_list.empty() ? std::vector<double>{o.p} : o.p_list;
    // The swept size is n for combined, n0 for connect, m for repeater, n_l for plus
    // and the grid side for lattice.
    std::vector<size_t> ns = o.n_list;
    if (ns.empty()) {
        ns.push_back(0);
    }

    Output out(o.out);
    std::ostream &os = out.stream();
    os << "workload,p,size,trials,attempts_mean,attempts_stderr,time_mean,time_stderr,final_size_mean,"
          "final_size_stderr,success_mean,analytic_T,analytic_M\n";
    for (double p : ps) {
        for (size_t n : ns) {
            ExperimentConfig c = base;
            c.params.p = p;
            size_t size = n;
            if (n != 0) {
                switch (c.workload) {
                    case Workload::kCombined:
                        c.n = n;
                        break;
                    case Workload::kConnect:
                        c.params.n0 = n;
                        break;
                    case Workload::kRepeater:
                        c.m = static_cast<unsigned>(n);
                        break;
                    case Workload::kPlus:
                        c.params.n_l = n;
                        break;
                    case Workload::kLattice:
                        c.rows = n;
                        c.cols = n;
                        break;
                }
            }
            c.validate();
            std::vector<TrialStats> stats = aggregate(run_trials(c));
            Summary s = make_summary(c, stats);
            auto get = [&](const std::string &k) { return s.at(k); };
            os << workload_name(c.workload) << ',' << format_double(p) << ',' << size << ',' << c.trials << ','
               << get("attempts.mean") << ',' << get("attempts.stderr") << ',' << get("time.mean") << ','
               << get("time.stderr") << ',' << get("final_size.mean") << ',' << get("final_size.stderr") << ','
               << get("success.mean") << ',' << get("analytic.T_pred") << ',' << get("analytic.M_pred") << '\n';
        }
    }
    return kExitOk;
}

int cmd_compare(const Options &o) {
    std::ifstream in(o.summary);
    if (!in) {
        throw SchemaError("Cannot read summary '" + o.summary + "'.");
    }
    std::vector<ComparisonRow> rows = compare(read_summary(in));
    Output out(o.out);
    write_comparison(out.stream(), rows);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cluster-state assembly from probabilistic entangling gates: simulation and analysis."};
    app.set_config("--config", "", "Read flat key=value options from a file");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--p", o.p, "Gate success probability")->check(CLI::Range(0.0, 1.0));
    app.add_option("--eps", o.eps, "Overall lattice failure budget epsilon");
    app.add_option("--trials", o.trials, "Number of seeded trials");
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--backend", o.backend, "counting | exact");
    app.add_option("--time-model", o.time_model, "mean_field | strict_parallel");
    app.add_option("--ta-seconds", o.ta_seconds, "Duration of one gate attempt in seconds");
    app.add_option("--out", o.out, "Output path (prefix for chain and lattice runs)");
    app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    app.add_option("--cap", o.cap, "Qubit cap of the exact backend");
    app.add_option("--n", o.n, "Target chain length");
    app.add_option("--m", o.m, "Repeater depth (chain of 2^m)");
    app.add_option("--n0", o.n0, "Seed length (combined) or input length (connect)");
    app.add_option("--nl", o.nl, "Leg length of + shapes (0 = derive from N, eps, p)");
    app.add_option("--rows", o.rows, "Lattice rows");
    app.add_option("--cols", o.cols, "Lattice columns");
    app.add_option("--protocol", o.protocol, "combined | repeater | connect (sweep also: plus | lattice)");
    app.add_option("--blocks", o.blocks, "simulate | provision lattice building blocks");
    app.add_option("--shape", o.shape, "verify target: chain | plus | lattice");
    app.add_option("--p-list", o.p_list, "Sweep values of p")->delimiter(',');
    app.add_option("--n-list", o.n_list, "Sweep sizes")->delimiter(',');
    app.add_option("--summary", o.summary, "Summary file to compare");

    int code = kExitOk;
    app.add_subcommand("chain", "Build 1D chains")->callback([&] { code = cmd_chain(o); });
    app.add_subcommand("lattice", "Build square lattices")->callback([&] { code = cmd_lattice(o); });
    app.add_subcommand("verify", "Check stabilizers of exact-backend builds")->callback([&] { code = cmd_verify(o); });
    app.add_subcommand("sweep", "Summaries over a grid of p and sizes")->callback([&] { code = cmd_sweep(o); });
    app.add_subcommand("compare", "Empirical summary against analytic predictions")->callback([&] {
        code = cmd_compare(o);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    } catch (const CapExceeded &e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitCap;
    } catch (const AuditFailure &e) {
        std::cerr << "audit failure: " << e.what() << '\n';
        return kExitAudit;
    } catch (const ProtocolLogicError &e) {
        std::cerr << "audit failure: " << e.what() << '\n';
        return kExitAudit;
    } catch (const InvalidFusion &e) {
        std::cerr << "audit failure: " << e.what() << '\n';
        return kExitAudit;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return code;
}

// Batch front end: schedules, count estimates, simulations, verification
// suites, and circuit export.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 resource error. Results go to stdout, diagnostics to stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsearch/constructions.hpp"
#include "qsearch/estimator.hpp"
#include "qsearch/numerics.hpp"
#include "qsearch/simulator.hpp"
#include "qsearch/verify.hpp"

namespace {

using namespace qsearch;

BigInt parse_exponent(const std::string& text) {
  // Accepts a plain decimal exponent or "2^j" for doubly exponential N.
  if (text.rfind("2^", 0) == 0) {
    BigInt j(text.substr(2));
    if (j < 0 || j > (1 << 30)) throw ConfigError("exponent out of range");
    return pow2(j.get_ui());
  }
  return BigInt(text);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw ConfigError("expected a comma-separated integer list");
  return out;
}

std::string format_probability(double p) {
  std::ostringstream out;
  out.precision(12);
  out << p;
  return out.str();
}

void warn_relaxed(const constructions::PreconditionReport& pre, bool relaxed) {
  if (pre.all_hold()) return;
  std::string summary = pre.failing_summary();
  if (relaxed) {
    std::cerr << "warning: running with unmet preconditions: " << summary << "\n";
  }
}

void print_schedule(const constructions::RecursionSchedule& sched, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["k"] = sched.k;
    doc["r"] = sched.r;
    doc["n_seq"] = nlohmann::ordered_json::array();
    for (const auto& n : sched.n_seq) doc["n_seq"].push_back(n.get_str());
    doc["preconditions"] = nlohmann::ordered_json::array();
    for (const auto& f : sched.pre.flags) {
      nlohmann::ordered_json row;
      row["name"] = f.name;
      row["holds"] = f.holds;
      if (!f.detail.empty()) row["detail"] = f.detail;
      doc["preconditions"].push_back(row);
    }
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "i\tn_i\n";
  for (size_t i = 0; i < sched.n_seq.size(); ++i)
    std::cout << (i + 1) << '\t' << sched.n_seq[i].get_str() << '\n';
  std::cout << "precondition\tholds\n";
  for (const auto& f : sched.pre.flags)
    std::cout << f.name << '\t' << (f.holds ? "true" : "false") << '\n';
}

int cmd_schedule(const std::string& n_text, long k, int r, bool relaxed,
                 const std::string& format) {
  auto sched = constructions::build_schedule(parse_exponent(n_text), k, r, relaxed);
  warn_relaxed(sched.pre, relaxed);
  print_schedule(sched, format);
  return 0;
}

void print_estimate(const std::vector<estimator::ResourceEstimate>& levels,
                    const std::vector<estimator::BoundCheck>& checks,
                    const std::string& format) {
  if (format == "json") {
    std::cout << estimator::to_json(levels, checks);
  } else {
    std::cout << estimator::to_tsv(levels, checks);
  }
}

int cmd_estimate(const std::string& n_text, long k, int r, bool boost, bool relaxed,
                 bool grover02, bool main_r, bool main_eps, const std::string& eps_text,
                 long k_override, const std::string& format) {
  BigInt n = parse_exponent(n_text);
  if (grover02) {
    auto est = estimator::estimate_grover02(n);
    std::cout << "k=" << est.plan.k << " m=" << est.plan.m.get_str() << "\n";
    print_estimate(est.levels, est.checks, format);
    return 0;
  }
  if (main_r) {
    auto est = estimator::estimate_main_fixed_r(n, r, relaxed, k_override);
    warn_relaxed(est.plan.pre, relaxed);
    std::cout << "k=" << est.plan.kchoice.k.get_str()
              << " c1=" << est.plan.kchoice.c.get_str() << " r=" << est.plan.r << "\n";
    print_estimate(est.levels, est.checks, format);
    return 0;
  }
  if (main_eps) {
    Rational eps = numerics::parse_rational(eps_text);
    auto est = estimator::estimate_main_eps(n, eps, relaxed);
    warn_relaxed(est.plan.pre, relaxed);
    std::cout << "k=" << est.plan.kchoice.k.get_str()
              << " c2=" << est.plan.kchoice.c.get_str() << " r=" << est.plan.r << "\n";
    print_estimate(est.levels, est.checks, format);
    return 0;
  }
  auto est = estimator::estimate_recursive(n, k, r, boost, relaxed);
  warn_relaxed(est.schedule.pre, relaxed);
  print_estimate(est.levels, est.checks, format);
  return 0;
}

constructions::SearchAlgorithm build_from_flags(bool c1, bool pipeline, bool grover,
                                                const std::string& amplify_target, int n, long k,
                                                const std::string& n_seq_text, bool boost,
                                                bool relaxed,
                                                constructions::PreconditionReport* report) {
  constructions::BuildOptions opts;
  opts.relaxed = relaxed;
  if (c1) {
    auto alg = constructions::build_c1(n, k);
    if (boost) alg = constructions::boost_to_one(alg, k);
    return alg;
  }
  if (pipeline) {
    return constructions::build_pipeline(parse_int_list(n_seq_text), k, boost, opts, report);
  }
  if (grover) {
    // Plain Grover at N = 2^n: amplify the uniform superposition to 1.
    return constructions::amplify_exact(constructions::hadamard_base(n), Rational(1));
  }
  if (!amplify_target.empty()) {
    return constructions::amplify_exact(constructions::hadamard_base(n),
                                        numerics::parse_rational(amplify_target));
  }
  throw ConfigError("choose one of --c1, --pipeline, --grover, --amplify");
}

int cmd_simulate(bool c1, bool pipeline, bool grover, const std::string& amplify_target, int n,
                 long k, const std::string& n_seq_text, bool boost, bool relaxed,
                 long solution, const std::string& bits_hex, int max_wires,
                 const std::string& dump_path, const std::string& format) {
  constructions::PreconditionReport report;
  auto alg = build_from_flags(c1, pipeline, grover, amplify_target, n, k, n_seq_text, boost,
                              relaxed, &report);
  warn_relaxed(report, relaxed);

  oracle::Database db = bits_hex.empty()
                            ? oracle::Database::unique_solution(alg.n, solution < 0
                                                                           ? 0
                                                                           : static_cast<std::uint64_t>(solution))
                            : oracle::Database::from_hex(alg.n, bits_hex);
  if (!db.has_unique_solution())
    throw ConfigError("simulate: the database must have exactly one solution bit");

  simulator::RunOptions ro;
  ro.max_wires = max_wires;
  auto state = simulator::run(alg.circ, db, ro);
  double measured = simulator::good_probability(state, alg.good_set(), db);
  double expected = alg.a_known.approx();
  auto counts = alg.counts();
  if (!dump_path.empty())
    simulator::dump_state(state, dump_path, alg.circ.gates().size());

  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["wires"] = alg.circ.num_wires();
    doc["a_known"] = format_probability(expected);
    doc["measured"] = format_probability(measured);
    doc["difference"] = format_probability(std::abs(measured - expected));
    doc["queries"] = counts.queries.get_str();
    doc["gates"] = counts.elementary_gates.get_str();
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "wires\t" << alg.circ.num_wires() << "\n"
              << "a_known\t" << format_probability(expected) << "\n"
              << "measured\t" << format_probability(measured) << "\n"
              << "difference\t" << format_probability(std::abs(measured - expected)) << "\n"
              << "queries\t" << counts.queries.get_str() << "\n"
              << "gates\t" << counts.elementary_gates.get_str() << "\n";
  }
  return 0;
}

int cmd_export(bool c1, bool pipeline, bool grover, const std::string& amplify_target, int n,
               long k, const std::string& n_seq_text, bool boost, bool relaxed,
               const std::string& out_path) {
  constructions::PreconditionReport report;
  auto alg = build_from_flags(c1, pipeline, grover, amplify_target, n, k, n_seq_text, boost,
                              relaxed, &report);
  warn_relaxed(report, relaxed);
  auto meta = alg.metadata();
  std::ofstream out(out_path);
  if (!out) throw IoError("export: cannot open " + out_path + " for writing");
  circuit::write_jsonl(alg.circ, out, &meta);
  out.flush();
  if (!out) throw IoError("export: write failed for " + out_path);
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& only, unsigned seed, bool quick,
               long fault_offset) {
  verify::VerifyOptions opts;
  opts.seed = seed;
  opts.quick = quick;
  opts.count_fault_offset = fault_offset;
  auto results = verify::run_suites(only, opts);
  long failures = 0;
  std::cout << "suite\tcases\tfailures\n";
  for (const auto& r : results) {
    std::cout << r.name << '\t' << r.cases << '\t' << r.failures << '\n';
    failures += r.failures;
    for (const auto& d : r.failure_details) std::cerr << "  " << r.name << ": " << d << "\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gate-count-optimized quantum search: build, simulate, estimate, verify"};
  app.require_subcommand(1);

  std::string n_text = "0";
  std::string n_seq_text;
  std::string eps_text = "1";
  std::string format = "tsv";
  std::string bits_hex;
  std::string amplify_target;
  std::string out_path;
  std::string dump_path;
  long k = 4;
  long k_override = 0;
  int r = 1;
  int n_small = 0;
  long solution = 0;
  int max_wires = 26;
  unsigned seed = 20240901;
  long fault_offset = 0;
  bool relaxed = false, boost = false, quick = false;
  bool use_c1 = false, use_pipeline = false, use_grover = false;
  bool grover02 = false, main_r = false, main_eps = false;
  std::vector<std::string> only;

  auto* schedule = app.add_subcommand("schedule", "print the recursion schedule n_1..n_r");
  schedule->add_option("--n", n_text, "log2 of the database size (or 2^j)")->required();
  schedule->add_option("--k", k, "power-of-2 amplification parameter");
  schedule->add_option("--r", r, "number of recursion levels");
  schedule->add_flag("--relaxed", relaxed, "allow parameters outside the theorem's range");
  schedule->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}));

  auto* estimate = app.add_subcommand("estimate", "exact query/gate counts and bound checks");
  estimate->add_option("--n", n_text, "log2 of the database size (or 2^j)")->required();
  estimate->add_option("--k", k, "power-of-2 amplification parameter");
  estimate->add_option("--r", r, "number of recursion levels");
  estimate->add_flag("--boost", boost, "append the final boost to probability 1");
  estimate->add_flag("--relaxed", relaxed);
  estimate->add_flag("--grover02", grover02, "the single-lift log log N recipe");
  estimate->add_flag("--main-r", main_r, "fixed-r parameter recipe");
  estimate->add_flag("--main-eps", main_eps, "fixed-epsilon parameter recipe");
  estimate->add_option("--epsilon", eps_text, "epsilon for --main-eps");
  estimate->add_option("--k-override", k_override, "override k (with --main-r --relaxed)");
  estimate->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}));

  auto* simulate = app.add_subcommand("simulate", "build a construction and run it");
  simulate->add_flag("--c1", use_c1, "C1: amplified Hadamard base");
  simulate->add_flag("--pipeline", use_pipeline, "C1 plus lifts along --n-seq");
  simulate->add_flag("--grover", use_grover, "amplify the uniform base to probability 1");
  simulate->add_option("--amplify", amplify_target, "amplify the uniform base to this value");
  simulate->add_option("--n", n_small, "address width for --c1/--grover/--amplify");
  simulate->add_option("--n-seq", n_seq_text, "comma-separated widths for --pipeline");
  simulate->add_option("--k", k);
  simulate->add_flag("--boost", boost);
  simulate->add_flag("--relaxed", relaxed);
  simulate->add_option("--solution", solution, "solution index t");
  simulate->add_option("--bits", bits_hex, "database as hex (length-checked)");
  simulate->add_option("--max-sim-wires", max_wires);
  simulate->add_option("--dump-state", dump_path, "write the final amplitudes to this file");
  simulate->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}));

  auto* verify_cmd = app.add_subcommand("verify", "run the property suites");
  verify_cmd->add_option("--only", only, "restrict to the named suites");
  verify_cmd->add_option("--seed", seed);
  verify_cmd->add_flag("--quick", quick, "smaller sweeps");
  verify_cmd->add_option("--inject-count-fault", fault_offset)->group("");  // hidden

  auto* export_cmd = app.add_subcommand("export", "write a circuit as JSON lines");
  export_cmd->add_flag("--c1", use_c1);
  export_cmd->add_flag("--pipeline", use_pipeline);
  export_cmd->add_flag("--grover", use_grover);
  export_cmd->add_option("--amplify", amplify_target);
  export_cmd->add_option("--n", n_small);
  export_cmd->add_option("--n-seq", n_seq_text);
  export_cmd->add_option("--k", k);
  export_cmd->add_flag("--boost", boost);
  export_cmd->add_flag("--relaxed", relaxed);
  export_cmd->add_option("--out", out_path, "output path")->required();

  try {
    app.parse(argc, argv);
    if (schedule->parsed()) return cmd_schedule(n_text, k, r, relaxed, format);
    if (estimate->parsed())
      return cmd_estimate(n_text, k, r, boost, relaxed, grover02, main_r, main_eps, eps_text,
                          k_override, format);
    if (simulate->parsed())
      return cmd_simulate(use_c1, use_pipeline, use_grover, amplify_target, n_small, k,
                          n_seq_text, boost, relaxed, solution, bits_hex, max_wires, dump_path,
                          format);
    if (verify_cmd->parsed()) return cmd_verify(only, seed, quick, fault_offset);
    if (export_cmd->parsed())
      return cmd_export(use_c1, use_pipeline, use_grover, amplify_target, n_small, k,
                        n_seq_text, boost, relaxed, out_path);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

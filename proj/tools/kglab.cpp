// kglab: experiment runner for the exact measure, QIA and dichotomy toolkit.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kglab/kglab.hpp"

#ifndef KGLAB_DEFAULT_PINS
#define KGLAB_DEFAULT_PINS "data/pins.json"
#endif

namespace {

using namespace kglab;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

struct Outcome {
  Table table;
  Json summary = Json::object();
  bool passed = true;
};

std::vector<std::pair<long long, long long>> parse_schedule(const std::string& text) {
  std::vector<std::pair<long long, long long>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("schedule items are Q0:Q1");
    try {
      out.emplace_back(std::stoll(item.substr(0, colon)), std::stoll(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("schedule item '" + item + "' is not Q0:Q1");
    }
  }
  return out;
}

/// Named presets or an inline JSON psi object.
PsiSpec parse_psi_flag(const std::string& text) {
  PsiSpec p;
  if (text == "convergent") {
    p.c = Rational(1);
    p.exponent = make_rational(11, 5);
    p.q_min = 2;
    p.q_max = 1000;
  } else if (text == "divergent") {
    p.c = make_rational(1, 2);
    p.exponent = Rational(1);
    p.q_min = 2;
    p.q_max = 1000;
    p.capped = true;
  } else if (text == "sparse") {
    p.kind = "sparse";
    p.q_max = 1024;
    for (long long q = 2; q <= 1024; q *= 2) p.support[q] = make_rational(1, q * q);
  } else if (text == "zero") {
    p.kind = "zero";
  } else {
    try {
      p = parse_psi(Json::parse(text));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("--psi expects convergent, divergent, sparse, zero or a JSON object");
    }
  }
  return p;
}

TargetSpec parse_target_flag(const std::string& text) {
  TargetSpec t;
  if (text == "sqrt2-1" || text == "e-2") {
    t.kind = "surrogate";
    t.surrogate = text;
    return t;
  }
  try {
    t.y = {parse_rational(text)};
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--target: ") + e.what());
  }
  return t;
}

Outcome run_dirichlet_pairs(const ExperimentConfig& c) {
  const TargetScheme target = c.target.build();
  Outcome o;
  o.table.columns = {"d", "a", "b", "conditions_hold"};
  const Rational& y = target.scalar();
  for (long long d = 1; d <= c.max_modulus; ++d) {
    const DirichletPair p = dirichlet_pair(y, d);
    const bool ok = satisfies_dirichlet_conditions(p, y);
    o.passed = o.passed && ok;
    o.table.add({std::to_string(d), std::to_string(p.a), std::to_string(p.b), bool_string(ok)});
  }
  o.summary["pairs"] = c.max_modulus;
  return o;
}

Outcome run_measure(const ExperimentConfig& c) {
  if (c.m != 1) throw ConfigError("measure compares against the interval oracle and needs m = 1");
  const TargetScheme target = c.target.build();
  Outcome o;
  o.table.columns = {"d", "delta", "variant", "b", "closed_form", "interval_measure", "match"};
  std::size_t mismatches = 0;
  for (long long d : c.moduli) {
    for (const auto& delta : c.deltas) {
      long long b = 1;
      if (c.variant == Variant::plain) {
        b = 0;
      } else if (c.variant == Variant::tilde) {
        b = dirichlet_pair(target.scalar(), d).b;
      } else if (c.variant == Variant::fixed_pair) {
        b = target.b;
      }
      const Rational closed = set_measure(c.variant, target, 1, d, delta);
      const Rational oracle = build_interval_set(arc_family(c.variant, target, d, delta)).measure();
      const bool match = closed == oracle;
      if (!match) ++mismatches;
      o.table.add({std::to_string(d), to_string(delta), to_string(c.variant), std::to_string(b), to_string(closed),
                   to_string(oracle), bool_string(match)});
    }
  }
  o.passed = mismatches == 0;
  o.summary["mismatches"] = mismatches;
  return o;
}

Outcome run_qia(const ExperimentConfig& c) {
  if (c.n != 2 || c.m != 1) throw ConfigError("qia supports (n, m) = (2, 1)");
  const ApproxFunction psi = c.psi.build();
  if (c.variant == Variant::tilde && !psi.satisfies_cap()) throw ConfigError("tilde qia needs psi(q) <= 1/q (set psi.capped)");
  for (long long q : c.cutoffs) {
    if (q > psi.q_max()) throw ConfigError("Q exceeds psi.q_max");
  }
  const auto reports = qia_series(psi, c.variant, c.target.build(), c.cutoffs);
  Outcome o;
  o.table.columns = {"Q", "S1", "S2_parallel", "S2_nonparallel", "ratio", "degenerate",
                     "step2_lhs", "step2_rhs", "step3_lhs", "step3_rhs"};
  Json digests = Json::object();
  for (const auto& r : reports) {
    o.table.add({std::to_string(r.Q), to_string(r.S1), to_string(r.S2_parallel), to_string(r.S2_nonparallel),
                 to_string(r.ratio), bool_string(r.degenerate), to_string(r.step2_lhs), to_string(r.step2_rhs),
                 to_string(r.step3_lhs), to_string(r.step3_rhs)});
    digests[std::to_string(r.Q)] = fnv1a_hex(to_string(r.ratio));
    if (!r.degenerate && (!(r.ratio > 0) || r.ratio > 1)) o.passed = false;
  }
  o.summary["ratio_digests"] = digests;
  return o;
}

Outcome run_disjointness(const ExperimentConfig& c) {
  const ApproxFunction psi = c.psi.build();
  const Rational y = c.target.build().scalar();
  Outcome o;
  o.table.columns = {"d", "e", "q", "r", "measure", "hypotheses_hold", "violations", "zero"};
  std::size_t warnings = 0;
  for (const auto& t : c.tuples) {
    const DisjointnessResult res = disjointness_check(t[0], t[1], t[2], t[3], psi, y);
    std::string violations;
    for (const auto& v : res.violations) violations += (violations.empty() ? "" : "; ") + v;
    const bool zero = res.measure == 0;
    if (!res.hypotheses_hold) ++warnings;
    if (res.hypotheses_hold && !zero) o.passed = false;
    o.table.add({std::to_string(t[0]), std::to_string(t[1]), std::to_string(t[2]), std::to_string(t[3]),
                 to_string(res.measure), bool_string(res.hypotheses_hold), violations, bool_string(zero)});
  }
  o.summary["warning_rows"] = warnings;
  return o;
}

Outcome run_gallagher(const ExperimentConfig& c) {
  Outcome o;
  o.table.columns = {"a", "b", "m", "sum", "ab_power", "ratio"};
  Rational worst(0);
  for (const auto& [a, b] : c.boxes) {
    for (int m : c.dims) {
      const Rational sum = gallagher_overlap_sum(a, b, m);
      Rational rhs(1);
      for (int k = 0; k < m; ++k) rhs *= a * b;
      const Rational ratio = rhs == 0 ? Rational(0) : sum / rhs;
      worst = std::max(worst, ratio);
      o.table.add({to_string(a), to_string(b), std::to_string(m), to_string(sum), to_string(rhs), to_string(ratio)});
    }
  }
  o.summary["max_ratio"] = to_string(worst);
  return o;
}

Outcome run_dichotomy(const ExperimentConfig& c) {
  const TailFamily family{c.n, c.m, c.variant, c.psi.build(), c.target.build()};
  const DichotomyReport rep = dichotomy_experiment(family, c.schedule, c.samples, c.seed);
  Outcome o;
  o.table.columns = {"Q0", "Q1", "samples", "hits", "estimate", "stderr", "tail_bound", "floor"};
  for (const auto& row : rep.rows) {
    const auto& e = row.estimate;
    o.table.add({std::to_string(e.Q0), std::to_string(e.Q1), std::to_string(e.samples), std::to_string(e.hits),
                 format_double(e.estimate), format_double(e.stderr_), to_string(row.tail_bound),
                 row.floor ? format_double(*row.floor) : ""});
    if (e.estimate > row.tail_bound.get_d() + 3.0 * e.stderr_) o.passed = false;
  }
  o.summary["diagnosis"] = rep.diagnosis;
  return o;
}

void emit(const ExperimentConfig& c, const Outcome& o) {
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + c.out + "'");
  }
  std::ostream& os = c.out.empty() ? std::cout : file;
  if (c.format == "json") {
    os << report_json(config_json(c), o.table, o.summary).dump(2) << '\n';
  } else {
    write_csv(os, o.table);
  }
}

void print_error(const std::string& kind, const std::string& message) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact measures, QIA sums and dichotomy experiments for inhomogeneous Diophantine approximation"};
  app.require_subcommand(1);
  std::string config_path, out, format;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker thread cap");
  app.fallthrough();

  auto* dirichlet_cmd = app.add_subcommand("dirichlet-pairs", "Dirichlet pairs (a_d, b_d) for d <= max_modulus");
  auto* measure_cmd = app.add_subcommand("measure", "closed-form measure against the interval-union oracle");
  auto* qia_cmd = app.add_subcommand("qia", "exact QIA sums and ratio for (n, m) = (2, 1)");
  auto* disjoint_cmd = app.add_subcommand("disjointness", "gcd-restricted arc disjointness tuples");
  auto* gallagher_cmd = app.add_subcommand("gallagher", "Gallagher overlap sums");
  auto* dichotomy_cmd = app.add_subcommand("dichotomy", "Monte Carlo tail-union estimates");
  auto* verify_cmd = app.add_subcommand("verify-suite", "run every acceptance check");

  std::string psi_flag, target_flag, schedule_flag;
  std::uint64_t samples = 0;
  dichotomy_cmd->add_option("--psi", psi_flag, "convergent | divergent | sparse | zero | JSON psi object");
  dichotomy_cmd->add_option("--target", target_flag, "y as num/den, or sqrt2-1 / e-2");
  dichotomy_cmd->add_option("--schedule", schedule_flag, "windows Q0:Q1,Q0:Q1,...");
  dichotomy_cmd->add_option("--samples", samples, "samples per window");

  bool recalibrate = false;
  std::string pins_path = KGLAB_DEFAULT_PINS;
  int only = 0;
  verify_cmd->add_flag("--recalibrate", recalibrate, "recompute and rewrite the pins file");
  verify_cmd->add_option("--pins", pins_path, "pins file");
  verify_cmd->add_option("--only", only, "run a single check by id (1-10)")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kExitConfigError;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = format;
    if (app.count("--seed")) cfg.seed = seed;
    if (threads) set_worker_threads(threads);
    if (dichotomy_cmd->parsed()) {
      if (!psi_flag.empty()) cfg.psi = parse_psi_flag(psi_flag);
      if (!target_flag.empty()) cfg.target = parse_target_flag(target_flag);
      if (!schedule_flag.empty()) cfg.schedule = parse_schedule(schedule_flag);
      if (samples) cfg.samples = samples;
    }
    validate(cfg);

    Outcome outcome;
    if (dirichlet_cmd->parsed()) {
      outcome = run_dirichlet_pairs(cfg);
    } else if (measure_cmd->parsed()) {
      outcome = run_measure(cfg);
    } else if (qia_cmd->parsed()) {
      outcome = run_qia(cfg);
    } else if (disjoint_cmd->parsed()) {
      outcome = run_disjointness(cfg);
    } else if (gallagher_cmd->parsed()) {
      outcome = run_gallagher(cfg);
    } else if (dichotomy_cmd->parsed()) {
      outcome = run_dichotomy(cfg);
    } else if (verify_cmd->parsed()) {
      Verifier verifier({pins_path, recalibrate});
      const std::vector<CheckResult> results =
          only ? std::vector<CheckResult>{verifier.run_one(only)} : verifier.run_all();
      outcome.table = verify_table(results);
      std::size_t failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      outcome.passed = failed == 0;
      outcome.summary["checks"] = results.size();
      outcome.summary["failed"] = failed;
      outcome.summary["pins"] = pins_path;
    }
    outcome.summary["passed"] = outcome.passed;
    emit(cfg, outcome);
    return outcome.passed ? kExitPass : kExitCheckFailure;
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    print_error("config", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return kExitCheckFailure;
  }
}

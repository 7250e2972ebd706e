#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "bcu/bounds.hpp"
#include "bcu/error.hpp"
#include "bcu/pda.hpp"
#include "bcu/update_code.hpp"

namespace bcu::cli {
namespace {

constexpr std::uint64_t kDefaultSeed = 20211;
// Subset checks times code length; sweep validation above this is skipped.
constexpr std::uint64_t kDefaultSweepBudget = 50'000'000;

struct Options {
  std::string family = "mn";
  std::size_t K = 4, t = 2, n = 5, a = 2, b = 2, q = 3, m = 2;
  std::string in;
  std::size_t epsilon = 1;
  unsigned field_bits = 16;
  std::uint64_t seed = kDefaultSeed;
  std::string method;
  std::string out;
  std::size_t trials = 100;
  std::size_t max_retries = kDefaultMaxRetries;
  std::string mode = "update";
  std::string format = "table";

  std::string vary = "epsilon";
  std::size_t from = 1, to = 3, step = 1;
  double beta = 0.0;
  std::uint64_t budget = kDefaultSweepBudget;
};

struct Instance {
  Pda pda;
  FamilyHint hint;
  std::string params;  // "K=4;t=2"
};

Instance make_instance(const Options& o) {
  auto kv = [](const char* k, std::size_t v) { return std::string(k) + "=" + std::to_string(v); };
  if (o.family == "mn") return {pda_mn(o.K, o.t), FamilyHint::mn(o.K, o.t), kv("K", o.K) + ";" + kv("t", o.t)};
  if (o.family == "hypergraph") {
    return {pda_hypergraph(o.n, o.a, o.b), FamilyHint::hypergraph(o.n, o.a, o.b),
            kv("n", o.n) + ";" + kv("a", o.a) + ";" + kv("b", o.b)};
  }
  if (o.family == "grouping") {
    return {pda_grouping(o.q, o.m), FamilyHint::grouping(o.q, o.m), kv("q", o.q) + ";" + kv("m", o.m)};
  }
  if (o.in.empty()) throw ParameterError("--family file needs --in <path>");
  return {pda_from_file(o.in), FamilyHint::generic(), "in=" + o.in};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write " + path);
  f << text;
  if (!f) throw ParameterError("cannot write " + path);
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

EncoderMatrix build_encoder(const UpdateProblem& p, EncoderMethod method, const Options& o) {
  switch (method) {
    case EncoderMethod::kNaive:
      return encoder_naive(p);
    case EncoderMethod::kMds:
      return encoder_mds(p);
    case EncoderMethod::kVandermonde:
      return encoder_vandermonde(p, o.seed, o.max_retries);
  }
  throw ParameterError("unknown method");
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string opt_str(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }

std::optional<std::uint64_t> find_entry(const std::vector<BoundEntry>& v,
                                        std::initializer_list<const char*> names) {
  for (const char* name : names) {
    for (const auto& e : v) {
      if (e.name == name) return e.value;
    }
  }
  return std::nullopt;
}

int cmd_pda(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = make_instance(o);
  const Pda& p = inst.pda;
  for (const auto& w : p.warnings()) err << "warning: " << w << '\n';
  out << "K=" << p.nodes() << " F=" << p.subfiles() << " Z=" << p.cache_size()
      << " S=" << (p.symbols() ? std::to_string(*p.symbols()) : "-")
      << " r=" << (p.replication() ? std::to_string(*p.replication()) : "-")
      << " distinct_supports=" << yes_no(p.distinct_supports()) << " valid=yes\n";
  if (o.out.empty()) {
    out << pda_to_text(p);
  } else {
    pda_to_file(p, o.out);
  }
  return kOk;
}

int cmd_code(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = make_instance(o);
  const UpdateProblem p(placement_of(inst.pda), o.epsilon, Field(o.field_bits));
  const EncoderMethod method = parse_method(o.method.empty() ? "mds" : o.method);
  const EncoderMatrix e = build_encoder(p, method, o);
  const ValidationResult v = validate_encoder(e.h, p);
  if (!v.valid) {
    err << "encoder failed validation at node " << p.placement().node_labels[v.witness->node].str()
        << "; nothing written\n";
    return kValidationFailure;
  }
  out << "method=" << method_name(method) << " l=" << e.length()
      << " cost_bits=" << e.length() * p.field().bits() << " valid=yes";
  if (method == EncoderMethod::kVandermonde) out << " seed=" << o.seed << " draws=" << e.draws;
  out << '\n';
  if (!o.out.empty()) write_file(o.out, encoder_to_text(e));
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = make_instance(o);
  const UpdateProblem p(placement_of(inst.pda), o.epsilon, Field(o.field_bits));
  const EncoderMethod method = parse_method(o.method.empty() ? "mds" : o.method);
  if (o.epsilon > p.cache_size() && method != EncoderMethod::kNaive) {
    err << "epsilon=" << o.epsilon << " exceeds the cache size Z=" << p.cache_size()
        << "; once Z <= 2*epsilon no code beats sending all F subfiles, use --method naive\n";
    return kParameterError;
  }
  if (o.mode != "update" && o.mode != "bnsi") throw ParameterError("--mode must be update or bnsi");
  const EncoderMatrix e = build_encoder(p, method, o);
  std::size_t success = 0;
  std::uint64_t cost = 0;
  for (std::size_t i = 0; i < o.trials; ++i) {
    Rng rng(o.seed + i);
    try {
      const RoundReport r = o.mode == "bnsi" ? simulate_bnsi_round(e, p, rng) : simulate_round(e, p, rng);
      cost += r.cost_bits;
      if (r.all_ok()) ++success;
    } catch (const DecodeError&) {
      cost += e.length() * p.field().bits();
    }
  }
  std::ostringstream mean;
  mean << std::fixed << std::setprecision(2)
       << (o.trials ? static_cast<double>(cost) / static_cast<double>(o.trials) : 0.0);
  out << "method=" << method_name(method) << " mode=" << o.mode << " l=" << e.length()
      << " success=" << success << "/" << o.trials << " mean_cost_bits=" << mean.str() << '\n';
  return success == o.trials ? kOk : kValidationFailure;
}

int cmd_bounds(const Options& o, std::ostream& out, std::ostream&) {
  const Instance inst = make_instance(o);
  const UpdateProblem p(placement_of(inst.pda), o.epsilon, Field(o.field_bits));
  const BoundReport r = report(p, inst.hint);
  emit(o, out, o.format == "csv" ? report_csv(r) : report_table(r));
  return kOk;
}

std::size_t* sweep_target(Options& o) {
  if (o.vary == "epsilon") return &o.epsilon;
  if (o.vary == "K") return &o.K;
  if (o.vary == "t") return &o.t;
  if (o.vary == "n") return &o.n;
  if (o.vary == "a") return &o.a;
  if (o.vary == "b") return &o.b;
  if (o.vary == "q") return &o.q;
  if (o.vary == "m") return &o.m;
  throw ParameterError("--vary must be one of epsilon, K, t, n, a, b, q, m");
}

int cmd_sweep(const Options& base, std::ostream& out, std::ostream& err) {
  if (base.step == 0) throw ParameterError("--step must be positive");
  Options o = base;
  std::size_t* target = sweep_target(o);
  std::ostringstream csv;
  csv << "family,params,epsilon,K,F,Z,r,lower_xs,lower_greedy,lower_family,best_lower,upper_mds,"
         "upper_vandermonde,best_upper,exact,l_naive,l_mds,l_vandermonde,validated_mds,"
         "validated_vandermonde,ratio\n";
  for (std::size_t v = base.from; v <= base.to; v += base.step) {
    *target = v;
    if (o.family == "mn" && o.vary == "K" && o.beta > 0.0) {
      o.t = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(o.beta * static_cast<double>(v))));
    }
    std::optional<Instance> found;
    try {
      found = make_instance(o);
    } catch (const ParameterError& e) {
      err << "skipping " << o.vary << "=" << v << ": " << e.what() << '\n';
      continue;
    }
    const Instance& inst = *found;
    const Placement pl = placement_of(inst.pda);
    const UpdateProblem p(pl, o.epsilon, Field(o.field_bits));
    const BoundReport r = report(p, inst.hint);
    const std::uint64_t checks = validation_cost(p);

    std::vector<std::size_t> built = {p.subfiles()};
    std::string l_mds, l_vdm, val_mds = "skipped", val_vdm = "skipped";
    if (p.field().order() >= p.subfiles()) {
      const EncoderMatrix e = encoder_mds(p);
      l_mds = std::to_string(e.length());
      if (saturating_mul(checks, e.length()) <= o.budget) {
        const bool ok = validate_encoder(e.h, p).valid;
        val_mds = yes_no(ok);
        if (ok) built.push_back(e.length());
      } else {
        built.push_back(e.length());
      }
    } else {
      val_mds = "field-too-small";
    }
    if (pl.replication() && pl.distinct_supports()) {
      const std::uint64_t len = 2 * o.epsilon * (p.nodes() - *pl.replication()) + 1;
      if (saturating_mul(checks, len) <= o.budget) {
        try {
          const EncoderMatrix e = encoder_vandermonde(p, o.seed, o.max_retries);
          l_vdm = std::to_string(e.length());
          val_vdm = "yes";
          built.push_back(e.length());
        } catch (const RetryExhausted&) {
          val_vdm = "retry-exhausted";
        }
      }
    }
    const std::size_t best_built = *std::min_element(built.begin(), built.end());
    std::ostringstream ratio;
    ratio << std::fixed << std::setprecision(4)
          << static_cast<double>(best_built) / static_cast<double>(r.best_lower());

    csv << o.family << ',' << inst.params << ',' << o.epsilon << ',' << p.nodes() << ',' << p.subfiles()
        << ',' << p.cache_size() << ',' << opt_str(pl.replication()) << ','
        << opt_str(find_entry(r.lower, {"cache-threshold"})) << ','
        << opt_str(find_entry(r.lower, {"greedy-sequence"})) << ','
        << opt_str(find_entry(r.lower, {"mn-window", "hypergraph-window", "grouping-sum"})) << ','
        << r.best_lower() << ',' << opt_str(find_entry(r.upper, {"mds"})) << ','
        << opt_str(find_entry(r.upper, {"random-vandermonde"})) << ',' << r.best_upper() << ','
        << opt_str(r.exact) << ',' << p.subfiles() << ',' << l_mds << ',' << l_vdm << ',' << val_mds
        << ',' << val_vdm << ',' << ratio.str() << '\n';
  }
  emit(base, out, csv.str());
  return kOk;
}

void add_family_options(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "placement family")
      ->check(CLI::IsMember({"mn", "hypergraph", "grouping", "file"}))
      ->capture_default_str();
  sub->add_option("--K", o.K, "MN: number of nodes")->capture_default_str();
  sub->add_option("--t", o.t, "MN: nodes caching each subfile")->capture_default_str();
  sub->add_option("--n", o.n, "hypergraph: ground set size")->capture_default_str();
  sub->add_option("--a", o.a, "hypergraph: subfile subset size")->capture_default_str();
  sub->add_option("--b", o.b, "hypergraph: node subset size")->capture_default_str();
  sub->add_option("--q", o.q, "grouping: alphabet size")->capture_default_str();
  sub->add_option("--m", o.m, "grouping: tuple length")->capture_default_str();
  sub->add_option("--in", o.in, "PDA file for --family file");
  sub->add_option("--out", o.out, "output file");
}

void add_code_options(CLI::App* sub, Options& o) {
  sub->add_option("--epsilon", o.epsilon, "maximum update weight")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
      ->capture_default_str();
  sub->add_option("--field-bits", o.field_bits, "field GF(2^b)")->check(CLI::Range(1u, 32u))->capture_default_str();
  sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  sub->add_option("--max-retries", o.max_retries, "draws allowed for the random construction")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Linear coded cache updates over GF(2^b)", "bcu");
  app.require_subcommand(1);

  auto* pda = app.add_subcommand("pda", "build or load a placement array and report its parameters");
  add_family_options(pda, o);

  auto* code = app.add_subcommand("code", "build and validate an encoder");
  add_family_options(code, o);
  add_code_options(code, o);
  code->add_option("--method", o.method, "naive, mds or vandermonde (default mds)");

  auto* sim = app.add_subcommand("simulate", "run update rounds and count decoding successes");
  add_family_options(sim, o);
  add_code_options(sim, o);
  sim->add_option("--method", o.method, "naive, mds or vandermonde (default mds)");
  sim->add_option("--trials", o.trials, "number of rounds")->capture_default_str();
  sim->add_option("--mode", o.mode, "update or bnsi")->check(CLI::IsMember({"update", "bnsi"}))->capture_default_str();

  auto* bnd = app.add_subcommand("bounds", "print lower and upper bounds on the update cost");
  add_family_options(bnd, o);
  add_code_options(bnd, o);
  bnd->add_option("--format", o.format, "table or csv")->check(CLI::IsMember({"table", "csv"}))->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "CSV of bounds and constructions over a parameter range");
  add_family_options(sweep, o);
  add_code_options(sweep, o);
  sweep->add_option("--vary", o.vary, "parameter to vary")->capture_default_str();
  sweep->add_option("--from", o.from, "first value")->capture_default_str();
  sweep->add_option("--to", o.to, "last value")->capture_default_str();
  sweep->add_option("--step", o.step, "increment")->capture_default_str();
  sweep->add_option("--beta", o.beta, "MN with --vary K: t = round(beta K)");
  sweep->add_option("--budget", o.budget, "validation work limit (subset checks times l)")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << e.what() << '\n';
    return kParameterError;
  }

  try {
    if (pda->parsed()) return cmd_pda(o, out, err);
    if (code->parsed()) return cmd_code(o, out, err);
    if (sim->parsed()) return cmd_simulate(o, out, err);
    if (bnd->parsed()) return cmd_bounds(o, out, err);
    return cmd_sweep(o, out, err);
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const RetryExhausted& e) {
    err << e.what() << "; raise --field-bits\n";
    return kExhausted;
  } catch (const BudgetExceeded& e) {
    err << e.what() << '\n';
    return kExhausted;
  } catch (const FieldTooSmall& e) {
    err << e.what() << "; raise --field-bits\n";
    return kParameterError;
  } catch (const ParameterError& e) {
    err << e.what() << '\n';
    return kParameterError;
  } catch (const FieldMismatch& e) {
    err << e.what() << '\n';
    return kParameterError;
  } catch (const DecodeError& e) {
    err << "decoding failed: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bcu::cli

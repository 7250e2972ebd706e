#include "bcu/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bcu/combinatorics.hpp"
#include "bcu/error.hpp"

namespace bcu {

namespace {

constexpr double kTol = 1e-9;

std::uint64_t pos_part(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : 0; }

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  return binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("bound consistency check failed: " + what);
}

std::size_t count_new(const std::vector<std::size_t>& cache, const std::vector<bool>& covered) {
  std::size_t n = 0;
  for (auto f : cache) n += !covered[f];
  return n;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational make_rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return {num / (g ? g : 1), den / (g ? g : 1)};
}

std::uint64_t BoundReport::best_lower() const {
  std::uint64_t best = 0;
  for (const auto& e : lower) best = std::max(best, e.value);
  return best;
}

std::uint64_t BoundReport::best_upper() const {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (const auto& e : upper) best = std::min(best, e.value);
  return best;
}

std::uint64_t upper_bound_joint(std::uint64_t nodes, std::uint64_t subfiles,
                                std::uint64_t cache_size, std::uint64_t replication,
                                std::uint64_t epsilon, bool distinct_supports) {
  if (subfiles == 0 || nodes == 0 || cache_size > subfiles || replication > nodes ||
      nodes * cache_size != replication * subfiles) {
    throw ParameterError("inconsistent parameters: K Z = " + std::to_string(nodes * cache_size) +
                         " but r F = " + std::to_string(replication * subfiles));
  }
  const std::uint64_t mds = subfiles - pos_part(cache_size, 2 * epsilon);
  if (!distinct_supports) return mds;
  return std::min(2 * epsilon * (nodes - replication) + 1, mds);
}

std::optional<std::uint64_t> exact_cases(std::uint64_t subfiles, std::uint64_t cache_size,
                                         std::uint64_t epsilon) {
  const std::uint64_t two_eps = 2 * epsilon;
  if (cache_size <= two_eps) return subfiles;
  if (cache_size == subfiles) return two_eps;
  if (cache_size + 1 == subfiles) return two_eps + 1;
  if (cache_size + 2 == subfiles) return two_eps + 2;
  return std::nullopt;
}

std::uint64_t bound_generic(const Placement& placement, std::uint64_t epsilon,
                            std::span<const std::size_t> sequence) {
  std::vector<bool> used(placement.nodes(), false);
  std::vector<bool> covered(placement.subfiles(), false);
  std::uint64_t total = 0;
  for (auto k : sequence) {
    if (k >= placement.nodes()) throw ParameterError("node index " + std::to_string(k) + " out of range");
    if (used[k]) throw ParameterError("node " + placement.node_labels[k].str() + " repeated in sequence");
    used[k] = true;
    total += std::min<std::uint64_t>(2 * epsilon, count_new(placement.cached[k], covered));
    for (auto f : placement.cached[k]) covered[f] = true;
  }
  return total;
}

SequenceBound bound_generic_greedy(const Placement& placement, std::uint64_t epsilon) {
  const std::uint64_t two_eps = 2 * epsilon;
  std::vector<bool> used(placement.nodes(), false);
  std::vector<bool> covered(placement.subfiles(), false);
  SequenceBound out;
  while (true) {
    std::optional<std::size_t> pick;
    std::uint64_t pick_term = 0;
    std::size_t pick_new = 0;
    for (std::size_t k = 0; k < placement.nodes(); ++k) {
      if (used[k]) continue;
      const std::size_t fresh = count_new(placement.cached[k], covered);
      const std::uint64_t term = std::min<std::uint64_t>(two_eps, fresh);
      if (term == 0) continue;
      const bool better =
          !pick || term > pick_term ||
          (term == pick_term &&
           (fresh < pick_new ||
            (fresh == pick_new && placement.node_labels[k] < placement.node_labels[*pick])));
      if (better) {
        pick = k;
        pick_term = term;
        pick_new = fresh;
      }
    }
    if (!pick) break;
    used[*pick] = true;
    for (auto f : placement.cached[*pick]) covered[f] = true;
    out.value += pick_term;
    out.sequence.push_back(*pick);
  }
  return out;
}

SequenceBound bound_generic_best(const Placement& placement, std::uint64_t epsilon) {
  if (placement.nodes() > 8) {
    throw BudgetExceeded("exhaustive sequence search limited to 8 nodes, have " +
                         std::to_string(placement.nodes()));
  }
  std::vector<std::size_t> perm(placement.nodes());
  std::iota(perm.begin(), perm.end(), 0);
  SequenceBound best;
  best.sequence = perm;
  best.value = bound_generic(placement, epsilon, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const std::uint64_t v = bound_generic(placement, epsilon, perm);
    if (v > best.value) {
      best.value = v;
      best.sequence = perm;
    }
  }
  return best;
}

std::uint64_t bound_xs(const Placement& placement, std::uint64_t epsilon) {
  std::vector<bool> covered(placement.subfiles(), false);
  for (std::size_t k = 0; k < placement.nodes(); ++k) {
    if (placement.cached[k].size() > 2 * epsilon) continue;
    for (auto f : placement.cached[k]) covered[f] = true;
  }
  const std::uint64_t xs = static_cast<std::uint64_t>(std::count(covered.begin(), covered.end(), true));
  return xs + std::min<std::uint64_t>(2 * epsilon, placement.subfiles() - xs);
}

std::optional<std::uint64_t> smallest_binomial_row(std::uint64_t k, std::uint64_t target) {
  if (target <= 1) return k;
  if (k == 0) return std::nullopt;
  std::uint64_t a = k;
  while (binom(a, k) < target) ++a;
  return a;
}

HypergraphBound bound_hypergraph(std::uint64_t n, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t epsilon) {
  if (a < 1 || b < 1 || a + b > n) {
    throw ParameterError("hypergraph bound needs a, b >= 1 and a + b <= n");
  }
  const std::uint64_t two_eps = 2 * epsilon;
  const std::uint64_t z = binom(n, a) - binom(n - b, a);
  if (z <= two_eps) {
    throw ParameterError("hypergraph bound needs Z >= 2 eps + 1 (Z = " + std::to_string(z) +
                         "); the cost is F");
  }
  HypergraphBound out;
  out.value = two_eps;
  for (std::uint64_t j = 0; j + b < n; ++j) out.value += std::min(two_eps, binom(j, a - 1));
  if (a == 1) {
    out.exact = true;
    require(out.value == two_eps + n - b, "single-element hypergraph window sum");
    return out;
  }
  out.a0 = smallest_binomial_row(a - 1, two_eps);
  if (*out.a0 <= n - b) {
    out.closed_form = two_eps * (n - b - *out.a0 + 1) + binom(*out.a0, a);
    require(*out.closed_form == out.value, "hypergraph window sum equals its closed form");
  }
  return out;
}

MnBound bound_mn(std::uint64_t nodes, std::uint64_t t, std::uint64_t epsilon) {
  if (t < 1 || t > nodes) throw ParameterError("MN bound needs 1 <= t <= K");
  const std::uint64_t two_eps = 2 * epsilon;
  const std::uint64_t f_count = binom(nodes, t);
  const std::uint64_t z = binom(nodes - 1, t - 1);
  MnBound out;
  if (z <= two_eps) {
    out.value = f_count;
    out.exact = true;
    return out;
  }
  const HypergraphBound hb = bound_hypergraph(nodes, t, 1, epsilon);
  out.value = hb.value;
  out.a0 = hb.a0;
  if (two_eps <= t) {
    out.exact = true;
    require(out.a0 == t, "a0 = t when 2 eps <= t");
    require(out.value == two_eps * (nodes - t) + 1, "MN bound meets 2 eps (K - t) + 1");
  }
  if (t >= 2) {
    const double est = static_cast<double>(t - 1) *
                       std::pow(static_cast<double>(two_eps), 1.0 / static_cast<double>(t - 1));
    auto a_prime = static_cast<std::uint64_t>(std::ceil(est - kTol));
    while (binom(a_prime, t - 1) < two_eps) ++a_prime;
    out.relaxed = nodes > 1 + a_prime ? two_eps * (nodes - 1 - a_prime) : 0;
    require(*out.relaxed <= out.value, "relaxed MN bound below the window bound");

    const double k = static_cast<double>(nodes);
    const double beta = static_cast<double>(t) / k;
    const double gamma = std::log2(static_cast<double>(epsilon)) / k;
    const double num = 1.0 - beta + 1.0 / (static_cast<double>(two_eps) * k);
    const double den = 1.0 - 2.0 / k -
                       std::pow(2.0, 1.0 / static_cast<double>(t - 1)) * (beta - 1.0 / k) *
                           std::pow(2.0, gamma * k / static_cast<double>(t - 1));
    out.diagnostics.push_back({"sparse-ratio-bound",
                               den > 0 ? num / den : std::numeric_limits<double>::infinity(),
                               "eps = 2^(gamma K) with K growing"});
  }
  const double alpha = static_cast<double>(epsilon) / static_cast<double>(f_count);
  const double beta = static_cast<double>(t) / static_cast<double>(nodes);
  out.diagnostics.push_back(
      {"dense-ratio-bound", (1.0 - beta + 2 * alpha) / (2 * alpha), "eps = alpha F"});
  return out;
}

UvBound bound_uv(std::uint64_t q, std::uint64_t m, std::uint64_t epsilon) {
  if (q < 2 || m < 2) throw ParameterError("grouping bound needs q >= 2 and m >= 2");
  const std::uint64_t two_eps = 2 * epsilon;
  const std::uint64_t f_count = ipow(q, static_cast<unsigned>(m));
  const std::uint64_t z = ipow(q, static_cast<unsigned>(m - 1));
  UvBound out;
  if (z <= two_eps) {
    out.value = out.closed_form = f_count;
    out.exact = true;
    return out;
  }
  UvProfile p;
  p.q = q;
  p.m = m;
  bool found = false;
  std::uint64_t total = 0;
  for (std::uint64_t v = 0; v < q; ++v) {
    std::uint64_t per_v = 0;
    for (std::uint64_t u = 1; u <= m; ++u) {
      const std::uint64_t x = ipow(q - v - 1, static_cast<unsigned>(u - 1)) *
                              ipow(q - v, static_cast<unsigned>(m - u));
      require(p.x.empty() || x <= p.x.back(), "new-subfile counts are nonincreasing");
      if (!found && x < two_eps) {
        found = true;
        p.u0 = u;
        p.v0 = v;
      }
      p.x.push_back(x);
      per_v += x;
      out.value += std::min(two_eps, x);
    }
    require(per_v == ipow(q - v, static_cast<unsigned>(m)) - ipow(q - v - 1, static_cast<unsigned>(m)),
            "per-value sum telescopes");
    total += per_v;
  }
  require(total == f_count, "new-subfile counts cover every subfile once");
  require(p.at(1, 0) == z, "first node contributes Z new subfiles");
  require(found, "some count falls below 2 eps");
  require(p.u0 > 1, "first small count is not at u = 1");
  const double root = std::pow(static_cast<double>(two_eps), 1.0 / static_cast<double>(m - 1));
  const double v0 = static_cast<double>(p.v0);
  require(static_cast<double>(q) - root - 1.0 < v0 + kTol &&
              v0 <= static_cast<double>(q) - root + kTol,
          "v0 lies in its root window");
  out.closed_form = two_eps * (p.v0 * (m - 1) + p.u0 + q - 2);
  require(out.closed_form <= out.value, "closed form below the full sum");

  const double gamma = std::pow(static_cast<double>(epsilon), 1.0 / static_cast<double>(m));
  const double qd = static_cast<double>(q);
  if (gamma < qd - 1.0) {
    out.diagnostics.push_back(
        {"sparse-ratio-limit", (qd - 1.0) / (qd - 1.0 - gamma), "eps = gamma^m with m growing"});
  }
  if (q == 2 && gamma < 2.0) {
    out.diagnostics.push_back({"sparse-ratio-limit-binary", 1.0 / (1.0 - std::log2(gamma)),
                               "q = 2, eps = gamma^m with m growing"});
  }
  const double alpha = static_cast<double>(epsilon) / static_cast<double>(f_count);
  if (alpha < 1.0 / (2.0 * qd)) {
    out.diagnostics.push_back(
        {"dense-ratio-bound", (1.0 - 1.0 / qd + 2 * alpha) / (2 * alpha * qd), "eps = alpha F"});
  }
  out.profile = std::move(p);
  return out;
}

std::optional<OracleResult> oracle_exhaustive_lopt(const Placement& placement,
                                                   std::size_t epsilon, std::size_t l_max,
                                                   unsigned threads) {
  const std::size_t f_count = placement.subfiles();
  if (f_count > kOracleMaxSubfiles || l_max > kOracleMaxLength) {
    throw BudgetExceeded("exhaustive search limited to F <= " + std::to_string(kOracleMaxSubfiles) +
                         " and l <= " + std::to_string(kOracleMaxLength));
  }
  const Field gf2(1);
  const UpdateProblem problem(placement, epsilon, gf2);
  threads = std::max(1u, threads);

  for (std::size_t l = 1; l <= std::min(l_max, f_count); ++l) {
    std::vector<std::vector<std::size_t>> pivot_sets;
    for (Combinations c(f_count, l); c; c.next()) pivot_sets.push_back(c.current());

    // Build the matrix for pivot set `ps` and free-bit pattern `bits`.
    auto build = [&](const std::vector<std::size_t>& ps, std::uint64_t bits) {
      Matrix h(gf2, l, f_count);
      std::size_t bit = 0;
      for (std::size_t i = 0; i < l; ++i) {
        h.set(i, ps[i], 1);
        for (std::size_t j = ps[i] + 1; j < f_count; ++j) {
          if (std::find(ps.begin(), ps.end(), j) != ps.end()) continue;
          h.set(i, j, static_cast<Field::Value>((bits >> bit++) & 1u));
        }
      }
      return h.with_labels(placement.subfile_labels);
    };
    auto free_bits = [&](const std::vector<std::size_t>& ps) {
      std::size_t n = 0;
      for (std::size_t i = 0; i < l; ++i) n += (f_count - 1 - ps[i]) - (l - 1 - i);
      return n;
    };

    std::atomic<std::size_t> best{pivot_sets.size()};
    std::vector<std::optional<std::uint64_t>> hit(pivot_sets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= pivot_sets.size() || idx > best.load()) return;
        const auto& ps = pivot_sets[idx];
        const std::uint64_t patterns = std::uint64_t{1} << free_bits(ps);
        for (std::uint64_t bits = 0; bits < patterns; ++bits) {
          if (idx > best.load()) return;
          if (validate_encoder(build(ps, bits), problem).valid) {
            hit[idx] = bits;
            std::size_t cur = best.load();
            while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
            }
            break;
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    const std::size_t b = best.load();
    if (b < pivot_sets.size()) return OracleResult{l, build(pivot_sets[b], *hit[b])};
  }
  return std::nullopt;
}

BoundReport report(const UpdateProblem& problem, const FamilyHint& hint) {
  const Placement& pl = problem.placement();
  const std::uint64_t f_count = problem.subfiles();
  const std::uint64_t k_count = problem.nodes();
  const std::uint64_t z = problem.cache_size();
  const std::uint64_t eps = problem.epsilon();
  const std::uint64_t two_eps = 2 * eps;

  auto check_dims = [&](std::uint64_t f, std::uint64_t k, const char* family) {
    if (f != f_count || k != k_count) {
      throw ParameterError(std::string(family) + " parameters give F=" + std::to_string(f) +
                           " K=" + std::to_string(k) + " but the placement has F=" +
                           std::to_string(f_count) + " K=" + std::to_string(k_count));
    }
  };

  BoundReport r;
  r.lower.push_back({"cache-threshold", bound_xs(pl, eps),
                     "subfiles held by small caches plus 2*eps"});
  const SequenceBound greedy = bound_generic_greedy(pl, eps);
  r.lower.push_back({"greedy-sequence", greedy.value, "node sequence sum in greedy order"});
  if (k_count <= 5) {
    r.lower.push_back({"best-sequence", bound_generic_best(pl, eps).value,
                       "node sequence sum maximized over all orders"});
  }
  if (auto ex = exact_cases(f_count, z, eps)) {
    r.lower.push_back({"extreme-cache", *ex, "exact value for Z <= 2*eps or Z >= F-2"});
  }

  switch (hint.kind) {
    case FamilyHint::Kind::kGeneric:
      break;
    case FamilyHint::Kind::kMn: {
      check_dims(binom(hint.p1, hint.p2), hint.p1, "MN");
      const MnBound mb = bound_mn(hint.p1, hint.p2, eps);
      r.lower.push_back({"mn-window", mb.value, "window sum over the MN node order"});
      if (mb.relaxed) r.lower.push_back({"mn-window-relaxed", *mb.relaxed, "window sum with a root estimate of a0"});
      r.diagnostics.insert(r.diagnostics.end(), mb.diagnostics.begin(), mb.diagnostics.end());
      break;
    }
    case FamilyHint::Kind::kHypergraph: {
      check_dims(binom(hint.p1, hint.p2), binom(hint.p1, hint.p3), "hypergraph");
      if (z > two_eps) {
        const HypergraphBound hb = bound_hypergraph(hint.p1, hint.p2, hint.p3, eps);
        r.lower.push_back({"hypergraph-window", hb.value, "window sum over consecutive subsets"});
      }
      break;
    }
    case FamilyHint::Kind::kGrouping: {
      check_dims(ipow(hint.p1, static_cast<unsigned>(hint.p2)), hint.p1 * (hint.p2 + 1), "grouping");
      const UvBound ub = bound_uv(hint.p1, hint.p2, eps);
      r.lower.push_back({"grouping-sum", ub.value, "node sequence sum in (u,v) order"});
      r.lower.push_back({"grouping-closed-form", ub.closed_form, "closed form from the first small count"});
      r.diagnostics.insert(r.diagnostics.end(), ub.diagnostics.begin(), ub.diagnostics.end());
      break;
    }
  }

  r.upper.push_back({"naive", f_count, "identity encoder"});
  r.upper.push_back({"mds", f_count - pos_part(z, two_eps), "Reed-Solomon parity-check encoder"});
  const auto rep = pl.replication();
  if (rep && pl.distinct_supports()) {
    r.upper.push_back({"random-vandermonde", two_eps * (k_count - *rep) + 1,
                       "random product-polynomial encoder"});
  }

  for (const auto& lo : r.lower) {
    for (const auto& up : r.upper) {
      if (lo.value > up.value) {
        throw std::logic_error("lower bound " + lo.name + " = " + std::to_string(lo.value) +
                               " exceeds upper bound " + up.name + " = " + std::to_string(up.value));
      }
    }
  }
  const std::uint64_t lo = r.best_lower();
  const std::uint64_t up = r.best_upper();
  if (lo == up) {
    r.exact = lo;
    for (const auto& e : r.lower) {
      if (e.value == lo) {
        r.exact_basis = e.name;
        break;
      }
    }
  }
  r.gap = make_rational(up, lo);
  return r;
}

std::string report_csv(const BoundReport& r) {
  std::ostringstream os;
  os << "kind,name,value,basis\n";
  for (const auto& e : r.lower) os << "lower," << e.name << ',' << e.value << ',' << csv_field(e.basis) << '\n';
  for (const auto& e : r.upper) os << "upper," << e.name << ',' << e.value << ',' << csv_field(e.basis) << '\n';
  if (r.exact) os << "exact," << r.exact_basis << ',' << *r.exact << ",lower meets upper\n";
  for (const auto& d : r.diagnostics) {
    os << "diagnostic," << d.name << ',' << format_double(d.value) << ',' << csv_field(d.regime) << '\n';
  }
  return os.str();
}

std::string report_table(const BoundReport& r) {
  std::size_t width = 4;
  for (const auto& e : r.lower) width = std::max(width, e.name.size());
  for (const auto& e : r.upper) width = std::max(width, e.name.size());
  for (const auto& d : r.diagnostics) width = std::max(width, d.name.size());
  std::ostringstream os;
  auto row = [&](const std::string& kind, const std::string& name, const std::string& value,
                 const std::string& basis) {
    os << std::left << std::setw(11) << kind << std::setw(static_cast<int>(width) + 2) << name
       << std::setw(10) << value << basis << '\n';
  };
  row("kind", "name", "value", "basis");
  for (const auto& e : r.lower) row("lower", e.name, std::to_string(e.value), e.basis);
  for (const auto& e : r.upper) row("upper", e.name, std::to_string(e.value), e.basis);
  for (const auto& d : r.diagnostics) row("diagnostic", d.name, format_double(d.value), d.regime);
  os << "best lower " << r.best_lower() << ", best upper " << r.best_upper() << ", gap "
     << r.gap.str();
  if (r.exact) os << ", exact l* = " << *r.exact << " (" << r.exact_basis << ")";
  os << '\n';
  return os.str();
}

}  // namespace bcu

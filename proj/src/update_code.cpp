#include "bcu/update_code.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bcu/combinatorics.hpp"
#include "bcu/error.hpp"

namespace bcu {

namespace {

// Uniform integer in [0, n) by rejection on the raw generator output, so the
// stream is the same on every standard library.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Columns added one at a time; each kept vector is reduced against the
// earlier ones and normalized at its pivot.
class IncrementalBasis {
 public:
  explicit IncrementalBasis(const Field& field) : field_(field) {}

  bool push(Vector v) {
    for (std::size_t i = 0; i < vecs_.size(); ++i) {
      const Field::Value c = v[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] ^= field_.mul(c, vecs_[i][j]);
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) return false;
    const Field::Value s = field_.inv(v[p]);
    for (auto& x : v) x = field_.mul(x, s);
    vecs_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  void pop() {
    vecs_.pop_back();
    pivots_.pop_back();
  }

 private:
  const Field& field_;
  std::vector<Vector> vecs_;
  std::vector<std::size_t> pivots_;
};

// H_{X_k} projected onto the complement of span(H_{Y_k}), plus the projector.
struct Projection {
  Matrix left_null;  // rows span { z : z^T H_Y = 0 }
  Matrix cached;     // left_null * H_X
};

Projection project(const Matrix& h, const std::vector<std::size_t>& cols,
                   const Placement& placement, std::size_t node) {
  std::vector<std::size_t> ycols;
  for (auto f : placement.uncached[node]) ycols.push_back(cols[f]);
  std::vector<std::size_t> xcols;
  for (auto f : placement.cached[node]) xcols.push_back(cols[f]);
  Matrix n = left_nullspace(h.select_columns(ycols));
  Matrix m = multiply(n, h.select_columns(xcols));
  return {std::move(n), std::move(m)};
}

class SubsetSearch {
 public:
  SubsetSearch(const Matrix& m, std::size_t size, std::uint64_t* count, std::uint64_t budget)
      : size_(size), basis_(m.field()), count_(count), budget_(budget) {
    for (std::size_t j = 0; j < m.cols(); ++j) columns_.push_back(m.column(j));
  }

  // Returns false and fills `bad` at the first dependent subset.
  bool run(std::vector<std::size_t>& bad) { return dfs(0, bad); }

 private:
  bool dfs(std::size_t start, std::vector<std::size_t>& bad) {
    if (chosen_.size() == size_) {
      ++*count_;
      if (budget_ != 0 && *count_ > budget_) {
        throw BudgetExceeded("validation exceeds " + std::to_string(budget_) + " subset checks");
      }
      return true;
    }
    const std::size_t remaining = size_ - chosen_.size();
    for (std::size_t i = start; i + remaining <= columns_.size(); ++i) {
      if (!basis_.push(columns_[i])) {
        bad = chosen_;
        bad.push_back(i);
        for (std::size_t j = 0; bad.size() < size_; ++j) {
          if (std::find(bad.begin(), bad.end(), j) == bad.end()) bad.push_back(j);
        }
        std::sort(bad.begin(), bad.end());
        return false;
      }
      chosen_.push_back(i);
      const bool ok = dfs(i + 1, bad);
      chosen_.pop_back();
      basis_.pop();
      if (!ok) return false;
    }
    return true;
  }

  std::size_t size_;
  IncrementalBasis basis_;
  std::vector<Vector> columns_;
  std::vector<std::size_t> chosen_;
  std::uint64_t* count_;
  std::uint64_t budget_;
};

void check_field(const Matrix& h, const UpdateProblem& problem) {
  if (!(h.field() == problem.field())) {
    throw FieldMismatch("encoder over " + h.field().descriptor() + ", problem over " +
                        problem.field().descriptor());
  }
}

Matrix labeled(Matrix m, const Placement& placement) {
  return m.with_labels(placement.subfile_labels);
}

}  // namespace

UpdateProblem::UpdateProblem(Placement placement, std::size_t epsilon, Field field)
    : placement_(std::move(placement)), epsilon_(epsilon), field_(std::move(field)) {
  if (epsilon_ == 0) throw ParameterError("epsilon must be at least 1");
  if (placement_.subfiles() == 0 || placement_.nodes() == 0) {
    throw ParameterError("placement needs at least one subfile and one node");
  }
  cache_size_ = placement_.cache_size();
}

std::string_view method_name(EncoderMethod m) {
  switch (m) {
    case EncoderMethod::kNaive: return "naive";
    case EncoderMethod::kMds: return "mds";
    case EncoderMethod::kVandermonde: return "vandermonde";
  }
  return "unknown";
}

EncoderMethod parse_method(std::string_view name) {
  if (name == "naive") return EncoderMethod::kNaive;
  if (name == "mds") return EncoderMethod::kMds;
  if (name == "vandermonde") return EncoderMethod::kVandermonde;
  throw ParameterError("unknown encoder method '" + std::string(name) + "'");
}

Vector VandermondeScalars::roots_for(const Placement& placement, std::size_t f) const {
  Vector out;
  for (auto k : placement.missing_at.at(f)) out.insert(out.end(), a.at(k).begin(), a.at(k).end());
  return out;
}

EncoderMatrix encoder_naive(const UpdateProblem& problem) {
  EncoderMatrix e{labeled(Matrix::identity(problem.field(), problem.subfiles()), problem.placement())};
  e.method = EncoderMethod::kNaive;
  e.epsilon = problem.epsilon();
  return e;
}

EncoderMatrix encoder_mds(const UpdateProblem& problem) {
  const std::size_t f_count = problem.subfiles();
  const Field& field = problem.field();
  if (field.order() < f_count) {
    throw FieldTooSmall("MDS construction needs q >= F = " + std::to_string(f_count) + ", have " +
                        field.descriptor());
  }
  const std::size_t z = problem.cache_size();
  const std::size_t two_eps = 2 * problem.epsilon();
  const std::size_t l = f_count - (z > two_eps ? z - two_eps : 0);
  Matrix h(field, l, f_count);
  for (std::size_t j = 0; j < f_count; ++j) {
    for (std::size_t i = 0; i < l; ++i) h.set(i, j, field.pow(static_cast<Field::Value>(j), i));
  }
  EncoderMatrix e{labeled(std::move(h), problem.placement())};
  e.method = EncoderMethod::kMds;
  e.epsilon = problem.epsilon();
  return e;
}

EncoderMatrix encoder_vandermonde(const UpdateProblem& problem, Rng& rng,
                                  std::size_t max_retries) {
  const Placement& pl = problem.placement();
  const auto r = pl.replication();
  if (!r) throw ParameterError("random construction needs every subfile cached by the same number of nodes");
  if (!pl.distinct_supports()) {
    throw ParameterError("random construction needs distinct caching-node sets for all subfiles");
  }
  if (max_retries == 0) throw ParameterError("max_retries must be at least 1");
  const Field& field = problem.field();
  const std::size_t per_node = 2 * problem.epsilon();
  const std::size_t l = per_node * (pl.nodes() - *r) + 1;

  for (std::size_t draw = 1; draw <= max_retries; ++draw) {
    VandermondeScalars sc;
    sc.a.assign(pl.nodes(), Vector(per_node));
    for (auto& node : sc.a) {
      for (auto& x : node) x = sample_value(field, rng);
    }
    Matrix h(field, l, pl.subfiles());
    bool distinct = true;
    for (std::size_t f = 0; f < pl.subfiles() && distinct; ++f) {
      Vector roots = sc.roots_for(pl, f);
      Vector sorted = roots;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        distinct = false;
        break;
      }
      const Polynomial p = poly_from_roots(field, roots);
      for (std::size_t i = 0; i < l; ++i) h.set(i, f, p.coefficient(i));
    }
    if (!distinct) continue;
    h = labeled(std::move(h), pl);
    if (validate_encoder(h, problem).valid) {
      EncoderMatrix e{std::move(h)};
      e.method = EncoderMethod::kVandermonde;
      e.epsilon = problem.epsilon();
      e.draws = draw;
      e.scalars = std::move(sc);
      return e;
    }
  }
  throw RetryExhausted("no valid random encoder in " + std::to_string(max_retries) +
                       " draws over GF(2^" + std::to_string(field.bits()) + ")");
}

EncoderMatrix encoder_vandermonde(const UpdateProblem& problem, std::uint64_t seed,
                                  std::size_t max_retries) {
  Rng rng(seed);
  EncoderMatrix e = encoder_vandermonde(problem, rng, max_retries);
  e.seed = seed;
  return e;
}

std::vector<std::size_t> column_map(const Matrix& h, const Placement& placement) {
  if (h.labels().size() != placement.subfiles() || h.cols() != placement.subfiles()) {
    throw ValidationError("encoder has " + std::to_string(h.cols()) +
                          " labeled columns, placement has " +
                          std::to_string(placement.subfiles()) + " subfiles");
  }
  std::vector<std::size_t> cols;
  cols.reserve(placement.subfiles());
  for (const auto& l : placement.subfile_labels) cols.push_back(h.column_of(l));
  return cols;
}

std::uint64_t validation_cost(const UpdateProblem& problem) {
  const std::size_t z = problem.cache_size();
  const std::size_t s = std::min(2 * problem.epsilon(), z);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t per_node = 0;
  try {
    per_node = binomial(static_cast<std::int64_t>(z), static_cast<std::int64_t>(s));
  } catch (const std::overflow_error&) {
    return kMax;
  }
  return per_node > kMax / problem.nodes() ? kMax : per_node * problem.nodes();
}

ValidationResult validate_encoder(const Matrix& h, const UpdateProblem& problem,
                                  const ValidationOptions& options) {
  check_field(h, problem);
  const auto cols = column_map(h, problem.placement());
  const Placement& pl = problem.placement();
  const std::size_t s = std::min(2 * problem.epsilon(), problem.cache_size());
  ValidationResult result;
  for (std::size_t k = 0; k < pl.nodes(); ++k) {
    if (s == 0) break;
    const Projection proj = project(h, cols, pl, k);
    std::vector<std::size_t> bad;
    SubsetSearch search(proj.cached, s, &result.subsets_checked, options.max_subsets);
    if (!search.run(bad)) {
      ValidationWitness w;
      w.node = k;
      for (auto i : bad) w.subset.push_back(pl.cached[k][i]);
      result.valid = false;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

Vector encode(const Matrix& h, const UpdateProblem& problem, std::span<const Field::Value> updated) {
  check_field(h, problem);
  if (updated.size() != problem.subfiles()) {
    throw std::invalid_argument("file has " + std::to_string(updated.size()) + " subfiles, expected " +
                                std::to_string(problem.subfiles()));
  }
  const auto cols = column_map(h, problem.placement());
  Vector v(h.cols(), 0);
  for (std::size_t f = 0; f < cols.size(); ++f) v[cols[f]] = updated[f];
  return h.multiply(v);
}

Vector decode_user(const Matrix& h, std::span<const Field::Value> codeword,
                   const UpdateProblem& problem, std::size_t node,
                   std::span<const Field::Value> cached) {
  check_field(h, problem);
  const Placement& pl = problem.placement();
  if (node >= pl.nodes()) throw std::out_of_range("node index");
  if (codeword.size() != h.rows()) throw std::invalid_argument("codeword length does not match encoder");
  const auto& x = pl.cached[node];
  if (cached.size() != x.size()) throw std::invalid_argument("cached content has wrong length");
  const Field& field = h.field();
  const auto cols = column_map(h, pl);

  // Syndrome of the uncached part plus the update on X_k.
  Vector syndrome(codeword.begin(), codeword.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (cached[i] == 0) continue;
    const std::size_t c = cols[x[i]];
    for (std::size_t r = 0; r < h.rows(); ++r) syndrome[r] ^= field.mul(h(r, c), cached[i]);
  }
  const Projection proj = project(h, cols, pl, node);
  const Vector target = proj.left_null.multiply(syndrome);

  // Independent projected columns pin the correction down at any weight.
  if (bcu::rank(proj.cached) == x.size()) {
    const auto sol = solve_consistent(proj.cached, target);
    if (!sol) {
      throw DecodeError(DecodeError::Kind::kNoConsistentSupport,
                        "node " + pl.node_labels[node].str() + ": codeword inconsistent with the cache");
    }
    Vector out(cached.begin(), cached.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= sol->x[i];
    return out;
  }

  std::optional<Vector> found;
  const std::size_t max_weight = std::min(problem.epsilon(), x.size());
  for (std::size_t w = 0; w <= max_weight; ++w) {
    for (Combinations t(x.size(), w); t; t.next()) {
      const Matrix sub = proj.cached.select_columns(t.current());
      const auto sol = solve_consistent(sub, target);
      if (!sol) continue;
      Vector e(x.size(), 0);
      for (std::size_t i = 0; i < w; ++i) e[t.current()[i]] = sol->x[i];
      if (!sol->unique || (found && *found != e)) {
        throw DecodeError(DecodeError::Kind::kAmbiguous,
                          "node " + pl.node_labels[node].str() +
                              ": several updates of weight <= epsilon explain the codeword");
      }
      found = std::move(e);
    }
  }
  if (!found) {
    throw DecodeError(DecodeError::Kind::kNoConsistentSupport,
                      "node " + pl.node_labels[node].str() +
                          ": no update of weight <= epsilon explains the codeword");
  }
  Vector out(cached.begin(), cached.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= (*found)[i];
  return out;
}

Vector bnsi_decode(const Matrix& h, std::span<const Field::Value> codeword,
                   const UpdateProblem& problem, std::size_t node,
                   std::span<const Field::Value> side_info) {
  // The noise plays the role of the update: x = (x + xi) + xi.
  return decode_user(h, codeword, problem, node, side_info);
}

Counterexample counterexample_from_witness(const Matrix& h, const UpdateProblem& problem,
                                           const ValidationWitness& witness) {
  check_field(h, problem);
  const Placement& pl = problem.placement();
  const auto cols = column_map(h, pl);
  const auto& y = pl.uncached.at(witness.node);
  std::vector<std::size_t> picked;
  for (auto f : witness.subset) picked.push_back(cols[f]);
  for (auto f : y) picked.push_back(cols[f]);
  const Matrix ns = nullspace(h.select_columns(picked));
  const std::size_t a = witness.subset.size();
  for (std::size_t j = 0; j < ns.cols(); ++j) {
    bool hits_a = false;
    for (std::size_t i = 0; i < a; ++i) hits_a |= ns(i, j) != 0;
    if (!hits_a) continue;
    Counterexample ce;
    ce.node = witness.node;
    const std::size_t f_count = pl.subfiles();
    ce.w1.assign(f_count, 0);
    ce.e1.assign(f_count, 0);
    ce.w2.assign(f_count, 0);
    ce.e2.assign(f_count, 0);
    std::size_t used = 0;
    for (std::size_t i = 0; i < a; ++i) {
      const auto v = ns(i, j);
      if (v == 0) continue;
      (used++ < problem.epsilon() ? ce.e1 : ce.e2)[witness.subset[i]] = v;
    }
    for (std::size_t i = 0; i < y.size(); ++i) ce.w2[y[i]] = ns(a + i, j);
    return ce;
  }
  throw std::logic_error("witness subset is independent modulo the uncached columns");
}

bool RoundReport::all_ok() const {
  return std::all_of(user_ok.begin(), user_ok.end(), [](bool b) { return b; });
}

namespace {

// Sparse vector of length n with a uniform support and nonzero values.
Vector draw_sparse(const Field& field, std::size_t n, std::size_t epsilon, Rng& rng,
                   const RoundOptions& options, std::size_t* weight_out) {
  const std::size_t cap = std::min(epsilon, n);
  const std::size_t weight = options.exact_weight ? cap : uniform_below(rng, cap + 1);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Vector e(n, 0);
  for (std::size_t i = 0; i < weight; ++i) {
    std::swap(idx[i], idx[i + uniform_below(rng, n - i)]);
    Field::Value v = 0;
    while (v == 0) v = sample_value(field, rng);
    e[idx[i]] = v;
  }
  if (weight_out) *weight_out = weight;
  return e;
}

RoundReport start_report(const EncoderMatrix& encoder, const Field& field) {
  RoundReport report;
  report.length = encoder.length();
  report.cost_bits = static_cast<std::uint64_t>(encoder.length()) * field.bits();
  return report;
}

}  // namespace

RoundReport simulate_round(const EncoderMatrix& encoder, const UpdateProblem& problem, Rng& rng,
                           const RoundOptions& options) {
  const Field& field = problem.field();
  const std::size_t f_count = problem.subfiles();
  Vector w(f_count);
  for (auto& v : w) v = sample_value(field, rng);
  RoundReport report = start_report(encoder, field);
  const Vector e = draw_sparse(field, f_count, problem.epsilon(), rng, options, &report.update_weight);
  Vector updated(f_count);
  for (std::size_t f = 0; f < f_count; ++f) updated[f] = w[f] ^ e[f];

  const Vector c = encode(encoder.h, problem, updated);
  const Placement& pl = problem.placement();
  for (std::size_t k = 0; k < pl.nodes(); ++k) {
    Vector cached;
    Vector expected;
    for (auto f : pl.cached[k]) {
      cached.push_back(w[f]);
      expected.push_back(updated[f]);
    }
    report.user_ok.push_back(decode_user(encoder.h, c, problem, k, cached) == expected);
  }
  return report;
}

RoundReport simulate_bnsi_round(const EncoderMatrix& encoder, const UpdateProblem& problem,
                                Rng& rng, const RoundOptions& options) {
  const Field& field = problem.field();
  Vector x(problem.subfiles());
  for (auto& v : x) v = sample_value(field, rng);
  const Vector c = encode(encoder.h, problem, x);
  RoundReport report = start_report(encoder, field);
  const Placement& pl = problem.placement();
  for (std::size_t k = 0; k < pl.nodes(); ++k) {
    const auto& xs = pl.cached[k];
    std::size_t weight = 0;
    const Vector noise = draw_sparse(field, xs.size(), problem.epsilon(), rng, options, &weight);
    report.update_weight = std::max(report.update_weight, weight);
    Vector side(xs.size());
    Vector expected(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      expected[i] = x[xs[i]];
      side[i] = x[xs[i]] ^ noise[i];
    }
    report.user_ok.push_back(bnsi_decode(encoder.h, c, problem, k, side) == expected);
  }
  return report;
}

RoundReport simulate_round(const UpdateProblem& problem, EncoderMethod method, Rng& rng,
                           const RoundOptions& options) {
  switch (method) {
    case EncoderMethod::kNaive: return simulate_round(encoder_naive(problem), problem, rng, options);
    case EncoderMethod::kMds: return simulate_round(encoder_mds(problem), problem, rng, options);
    case EncoderMethod::kVandermonde:
      return simulate_round(encoder_vandermonde(problem, rng), problem, rng, options);
  }
  throw ParameterError("unknown encoder method");
}

std::string encoder_to_text(const EncoderMatrix& encoder) {
  std::string out = matrix_to_text(encoder.h);
  out += "method=" + std::string(method_name(encoder.method)) +
         " epsilon=" + std::to_string(encoder.epsilon) +
         " seed=" + (encoder.seed ? std::to_string(*encoder.seed) : std::string("none")) + "\n";
  return out;
}

EncoderMatrix encoder_from_text(std::string_view text) {
  EncoderMatrix e{matrix_from_text(text)};
  std::istringstream is{std::string(text)};
  std::string line;
  bool seen = false;
  while (std::getline(is, line)) {
    if (line.rfind("method=", 0) != 0) continue;
    seen = true;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ValidationError("bad encoder metadata '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      auto number = [&](const std::string& s) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
          throw ValidationError("bad encoder metadata '" + tok + "'");
        }
        return v;
      };
      if (key == "method") {
        try {
          e.method = parse_method(val);
        } catch (const ParameterError& ex) {
          throw ValidationError(ex.what());
        }
      } else if (key == "epsilon") {
        e.epsilon = static_cast<std::size_t>(number(val));
      } else if (key == "seed") {
        if (val != "none") e.seed = number(val);
      } else {
        throw ValidationError("unknown encoder metadata key '" + key + "'");
      }
    }
  }
  if (!seen) throw ValidationError("encoder file lacks the method= metadata line");
  return e;
}

}  // namespace bcu

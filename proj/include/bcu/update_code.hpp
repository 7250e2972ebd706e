#pragma once

// Linear update codes: encoder constructions, the validity check, and
// syndrome decoding for both the cache-update and the noisy side information
// views of the problem.
//
// A round: the server holds w + e with wt(e) <= epsilon and broadcasts
// c = H (w + e). Node k knows w on X_k and must recover (w + e) on X_k.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcu/galois.hpp"
#include "bcu/matrix.hpp"
#include "bcu/pda.hpp"

namespace bcu {

using Vector = std::vector<Field::Value>;

class UpdateProblem {
 public:
  // Throws ParameterError for epsilon == 0 and ValidationError when the
  // caches differ in size.
  UpdateProblem(Placement placement, std::size_t epsilon, Field field = Field());

  const Placement& placement() const noexcept { return placement_; }
  std::size_t epsilon() const noexcept { return epsilon_; }
  const Field& field() const noexcept { return field_; }
  std::size_t subfiles() const noexcept { return placement_.subfiles(); }
  std::size_t nodes() const noexcept { return placement_.nodes(); }
  std::size_t cache_size() const noexcept { return cache_size_; }

 private:
  Placement placement_;
  std::size_t epsilon_;
  Field field_;
  std::size_t cache_size_;
};

enum class EncoderMethod { kNaive, kMds, kVandermonde };

std::string_view method_name(EncoderMethod m);
EncoderMethod parse_method(std::string_view name);  // throws ParameterError

// a[k][m] for node k and m < 2 epsilon.
struct VandermondeScalars {
  std::vector<Vector> a;

  // A_{I_f}: the scalars of every node missing subfile f, node-major.
  Vector roots_for(const Placement& placement, std::size_t f) const;
};

struct EncoderMatrix {
  explicit EncoderMatrix(Matrix matrix) : h(std::move(matrix)) {}

  Matrix h;  // l x F, columns labeled by subfile
  EncoderMethod method = EncoderMethod::kNaive;
  std::size_t epsilon = 1;
  std::optional<std::uint64_t> seed;
  std::size_t draws = 1;  // scalar draws consumed by the random construction
  std::optional<VandermondeScalars> scalars;

  std::size_t length() const noexcept { return h.rows(); }
};

EncoderMatrix encoder_naive(const UpdateProblem& problem);

// Parity-check matrix of a Reed-Solomon code, l = F - (Z - 2 epsilon)^+.
// Throws FieldTooSmall when the field has fewer than F elements.
EncoderMatrix encoder_mds(const UpdateProblem& problem);

inline constexpr std::size_t kDefaultMaxRetries = 32;

// Random construction with l = 2 epsilon (K - r) + 1. Column f holds the
// coefficients of prod over A_{I_f} of (x + a). Draws fresh scalars until the
// matrix validates. Throws ParameterError when rows are irregular or two rows
// share a support, RetryExhausted after max_retries failed draws.
EncoderMatrix encoder_vandermonde(const UpdateProblem& problem, Rng& rng,
                                  std::size_t max_retries = kDefaultMaxRetries);
// Seeds a fresh Rng and records the seed on the result.
EncoderMatrix encoder_vandermonde(const UpdateProblem& problem, std::uint64_t seed,
                                  std::size_t max_retries = kDefaultMaxRetries);

struct ValidationWitness {
  std::size_t node = 0;
  std::vector<std::size_t> subset;  // subfile indices inside X_node, sorted
};

struct ValidationResult {
  bool valid = true;
  std::optional<ValidationWitness> witness;
  std::uint64_t subsets_checked = 0;

  explicit operator bool() const noexcept { return valid; }
};

struct ValidationOptions {
  // Upper limit on the subset checks; 0 means unlimited. Exceeding it throws
  // BudgetExceeded.
  std::uint64_t max_subsets = 0;
};

// Number of subset checks a full validation performs, saturating at the
// largest uint64_t.
std::uint64_t validation_cost(const UpdateProblem& problem);

// H is valid iff for every node k and every A in X_k with |A| = min(2 eps, Z)
// the columns of H_A stay independent modulo the span of H_{Y_k}. Throws
// ValidationError when H's column labels are not the subfile labels.
ValidationResult validate_encoder(const Matrix& h, const UpdateProblem& problem,
                                  const ValidationOptions& options = {});

// Column of H holding each subfile, by label.
std::vector<std::size_t> column_map(const Matrix& h, const Placement& placement);

// c = H v, with v indexed like the subfiles.
Vector encode(const Matrix& h, const UpdateProblem& problem, std::span<const Field::Value> updated);

// Recovers (w + e) on X_k from c and w on X_k (cached, in X_k order). When
// H_{X_k} has full rank modulo span(H_{Y_k}) the correction is solved for
// directly; otherwise every support of size <= epsilon is tried. Throws
// DecodeError when nothing fits or two fits disagree.
Vector decode_user(const Matrix& h, std::span<const Field::Value> codeword,
                   const UpdateProblem& problem, std::size_t node,
                   std::span<const Field::Value> cached);

// Noisy side information view: returns x on X_k from c = H x and the side
// information x_{X_k} + xi with wt(xi) <= epsilon.
Vector bnsi_decode(const Matrix& h, std::span<const Field::Value> codeword,
                   const UpdateProblem& problem, std::size_t node,
                   std::span<const Field::Value> side_info);

// Two rounds that a single decoder at witness.node cannot both serve: equal
// codewords and equal cached content, different required outputs.
struct Counterexample {
  std::size_t node = 0;
  Vector w1, e1;
  Vector w2, e2;
};
Counterexample counterexample_from_witness(const Matrix& h, const UpdateProblem& problem,
                                           const ValidationWitness& witness);

struct RoundOptions {
  // When false the update weight is uniform in 0..epsilon.
  bool exact_weight = true;
};

struct RoundReport {
  std::vector<bool> user_ok;
  std::size_t length = 0;
  std::uint64_t cost_bits = 0;  // l * b
  std::size_t update_weight = 0;

  bool all_ok() const;
};

// Draws w and e, encodes, and decodes at every node.
RoundReport simulate_round(const EncoderMatrix& encoder, const UpdateProblem& problem, Rng& rng,
                           const RoundOptions& options = {});
// Builds the encoder first (the random construction draws from rng too).
RoundReport simulate_round(const UpdateProblem& problem, EncoderMethod method, Rng& rng,
                           const RoundOptions& options = {});

// Noisy side information round: draws x, then for every node an independent
// noise vector on X_k of weight epsilon (capped at Z), and decodes.
RoundReport simulate_bnsi_round(const EncoderMatrix& encoder, const UpdateProblem& problem,
                                Rng& rng, const RoundOptions& options = {});

// Matrix text followed by "method=<m> epsilon=<eps> seed=<s|none>".
std::string encoder_to_text(const EncoderMatrix& encoder);
EncoderMatrix encoder_from_text(std::string_view text);

}  // namespace bcu

#pragma once

#include <cstdint>
#include <span>

#include "mrceval/corpus.hpp"
#include "mrceval/tokenization.hpp"

namespace mrceval {

/// How scores against several references are reduced to one.
enum class ReferenceSelection {
  independent_max,  // max precision and max recall, taken separately
  best_reference,   // max of the per-reference combined scores
};

struct RougeParams {
  double gamma = 1.2;
  double alpha = 2.0;
  double beta = 1.0;
  bool adapted = true;
  // Combine P and R with the plain harmonic mean instead of the gamma form.
  bool harmonic = false;
  ReferenceSelection selection = ReferenceSelection::independent_max;

  /// Throws std::invalid_argument on gamma <= 0 or negative weights.
  void validate() const;

  friend bool operator==(const RougeParams&, const RougeParams&) = default;
};

struct LcsResult {
  std::int64_t length = 0;
  std::int64_t cand_len = 0;
  std::int64_t ref_len = 0;
};

/// Longest common (not necessarily contiguous) token subsequence.
LcsResult lcs_length(const TokenSequence& cand, const TokenSequence& ref);

/// Sum of token lengths of the entities that occur contiguously in `cand`.
/// Each entity counts at most once.
std::int64_t entity_bonus_length(const TokenSequence& cand, std::span<const TokenSequence> entities);

/// (1 + gamma^2) R P / (R + gamma^2 P), or 0 when both are 0.
double rouge_f(double precision, double recall, double gamma);

struct RougeScore {
  double value = 0.0;
  double precision = 0.0;  // selected (possibly bonused) P_LCS
  double recall = 0.0;     // selected (possibly bonused) R_LCS
  bool empty_candidate = false;
};

RougeScore rouge_l_sample(const QuestionSample& sample, const RougeParams& params,
                          const TokenizerConfig& tok = {});

/// Mean of the per-sample scores. Throws std::invalid_argument when empty.
double corpus_rouge_l(std::span<const QuestionSample> samples, const RougeParams& params,
                      const TokenizerConfig& tok = {});

/// Mean of precomputed per-sample values, summed in input order.
double mean_score(std::span<const double> values);

}  // namespace mrceval

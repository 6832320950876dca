#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mrceval/corpus.hpp"
#include "mrceval/ngram.hpp"
#include "mrceval/tokenization.hpp"

namespace mrceval {

struct BleuParams {
  int max_order = 4;
  double alpha = 2.0;  // yes-no bonus weight
  double beta = 1.0;   // entity bonus weight
  bool adapted = true;
  EntityClip entity_clip = EntityClip::max_per_string;
  // Replaces a zero precision numerator when > 0. Off by default.
  double smoothing = 0.0;

  /// Throws std::invalid_argument on n < 1, negative weights or smoothing.
  void validate() const;

  friend bool operator==(const BleuParams&, const BleuParams&) = default;
};

/// Numerator/denominator bookkeeping for the clipped precisions of one
/// sample or a whole corpus.
///
/// Counts are kept as integers per order and the bonus weights are applied
/// on read, so summing ledgers is exact and independent of order.
class PrecisionLedger {
 public:
  struct OrderCounts {
    std::int64_t hits = 0;
    std::int64_t total = 0;
    std::int64_t opinion_bonus_hits = 0;
    std::int64_t entity_bonus_hits = 0;

    friend bool operator==(const OrderCounts&, const OrderCounts&) = default;
  };

  PrecisionLedger() = default;
  PrecisionLedger(int max_order, double alpha, double beta);

  int max_order() const { return static_cast<int>(orders_.size()); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  /// order is 1-based.
  OrderCounts& at(int order) { return orders_.at(static_cast<std::size_t>(order - 1)); }
  const OrderCounts& at(int order) const { return orders_.at(static_cast<std::size_t>(order - 1)); }

  double bonus(int order) const;
  double numerator(int order) const;
  double denominator(int order) const;

  std::int64_t ref_len = 0;
  std::int64_t cand_len = 0;

  /// Element-wise sum. Throws std::invalid_argument if orders or weights differ.
  PrecisionLedger& operator+=(const PrecisionLedger& other);

  friend bool operator==(const PrecisionLedger&, const PrecisionLedger&) = default;

 private:
  std::vector<OrderCounts> orders_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

enum class BleuDegeneracy {
  none,
  empty_candidate,   // c = 0, BP undefined
  zero_denominator,  // some order has no candidate i-grams
  zero_overlap,      // some order has no clipped hits, unsmoothed
};

std::string_view to_string(BleuDegeneracy d);

struct BleuScore {
  double value = 0.0;
  double brevity_penalty = 0.0;
  BleuDegeneracy degeneracy = BleuDegeneracy::none;

  bool degenerate() const { return degeneracy != BleuDegeneracy::none; }
};

/// Reference length whose distance to `cand_len` is smallest; ties go to
/// the shorter reference.
std::int64_t closest_ref_length(std::span<const TokenSequence> refs, std::int64_t cand_len);

PrecisionLedger sample_ledger(const QuestionSample& sample, const BleuParams& params,
                              const TokenizerConfig& tok = {});

/// exp(min(1 - r/c, 0)); 0 when cand_len is 0.
double brevity_penalty(std::int64_t ref_len, std::int64_t cand_len);

/// BP * geometric mean of the first n precisions.
BleuScore bleu_from_ledger(const PrecisionLedger& ledger, int n, double smoothing = 0.0);

BleuScore sentence_bleu(const QuestionSample& sample, const BleuParams& params,
                        const TokenizerConfig& tok = {});

struct CorpusBleu {
  PrecisionLedger ledger;
  BleuScore score;
};

/// Sums all sample ledgers and evaluates the total once.
/// Throws std::invalid_argument on an empty corpus.
CorpusBleu corpus_bleu(std::span<const QuestionSample> samples, const BleuParams& params,
                       const TokenizerConfig& tok = {});

/// Same, from precomputed per-sample ledgers.
CorpusBleu corpus_bleu(std::span<const PrecisionLedger> ledgers, const BleuParams& params);

}  // namespace mrceval

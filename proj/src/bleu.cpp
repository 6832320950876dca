#include "mrceval/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrceval {

void BleuParams::validate() const {
  if (max_order < 1) throw std::invalid_argument("BLEU max order must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  if (!(smoothing >= 0.0)) throw std::invalid_argument("smoothing must be non-negative");
}

PrecisionLedger::PrecisionLedger(int max_order, double alpha, double beta)
    : orders_(static_cast<std::size_t>(max_order)), alpha_(alpha), beta_(beta) {}

double PrecisionLedger::bonus(int order) const {
  const auto& o = at(order);
  return alpha_ * static_cast<double>(o.opinion_bonus_hits) +
         beta_ * static_cast<double>(o.entity_bonus_hits);
}

double PrecisionLedger::numerator(int order) const {
  return static_cast<double>(at(order).hits) + bonus(order);
}

double PrecisionLedger::denominator(int order) const {
  return static_cast<double>(at(order).total) + bonus(order);
}

PrecisionLedger& PrecisionLedger::operator+=(const PrecisionLedger& other) {
  if (orders_.size() != other.orders_.size() || alpha_ != other.alpha_ || beta_ != other.beta_) {
    throw std::invalid_argument("cannot sum ledgers built with different parameters");
  }
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    orders_[i].hits += other.orders_[i].hits;
    orders_[i].total += other.orders_[i].total;
    orders_[i].opinion_bonus_hits += other.orders_[i].opinion_bonus_hits;
    orders_[i].entity_bonus_hits += other.orders_[i].entity_bonus_hits;
  }
  ref_len += other.ref_len;
  cand_len += other.cand_len;
  return *this;
}

std::string_view to_string(BleuDegeneracy d) {
  switch (d) {
    case BleuDegeneracy::none: return "none";
    case BleuDegeneracy::empty_candidate: return "empty candidate";
    case BleuDegeneracy::zero_denominator: return "candidate shorter than BLEU order";
    case BleuDegeneracy::zero_overlap: return "zero n-gram overlap";
  }
  return "none";
}

std::int64_t closest_ref_length(std::span<const TokenSequence> refs, std::int64_t cand_len) {
  std::int64_t best = -1;
  for (const auto& r : refs) {
    const auto len = static_cast<std::int64_t>(r.size());
    if (best < 0) {
      best = len;
      continue;
    }
    const auto d = std::llabs(len - cand_len);
    const auto best_d = std::llabs(best - cand_len);
    if (d < best_d || (d == best_d && len < best)) best = len;
  }
  return std::max<std::int64_t>(best, 0);
}

PrecisionLedger sample_ledger(const QuestionSample& sample, const BleuParams& params,
                              const TokenizerConfig& tok) {
  params.validate();
  const bool opinion_bonus =
      params.adapted && params.alpha > 0.0 && sample.qtype == QuestionType::yes_no;
  const bool entity_bonus =
      params.adapted && params.beta > 0.0 && sample.qtype == QuestionType::entity;

  PrecisionLedger ledger(params.max_order, params.adapted ? params.alpha : 0.0,
                         params.adapted ? params.beta : 0.0);

  const TokenSequence cand = tokenize(sample.candidate.text, tok);
  std::vector<TokenSequence> refs;
  refs.reserve(sample.references.size());
  for (const auto& r : sample.references) refs.push_back(tokenize(r.text, tok));
  std::vector<TokenSequence> entities;
  if (entity_bonus) {
    for (const auto& e : sample.entities) entities.push_back(tokenize(e, tok));
  }

  ledger.cand_len = static_cast<std::int64_t>(cand.size());
  ledger.ref_len = closest_ref_length(refs, ledger.cand_len);

  for (int order = 1; order <= params.max_order; ++order) {
    const NGramCounts cand_counts = count_ngrams(cand, order);
    std::vector<NGramCounts> ref_counts;
    std::vector<LabeledCounts> labeled;
    ref_counts.reserve(refs.size());
    for (std::size_t k = 0; k < refs.size(); ++k) {
      ref_counts.push_back(count_ngrams(refs[k], order));
      if (opinion_bonus) labeled.push_back({ref_counts.back(), sample.references[k].opinion});
    }

    auto& slot = ledger.at(order);
    slot.total = cand_counts.total();
    slot.hits = clipped_hits(cand_counts, ref_counts);
    if (opinion_bonus) {
      slot.opinion_bonus_hits =
          clipped_hits_same_opinion(cand_counts, labeled, sample.candidate.opinion);
    }
    if (entity_bonus) {
      slot.entity_bonus_hits = clipped_hits_entities(cand_counts, entities, params.entity_clip);
    }
  }
  return ledger;
}

double brevity_penalty(std::int64_t ref_len, std::int64_t cand_len) {
  if (cand_len <= 0) return 0.0;
  const double ratio = static_cast<double>(ref_len) / static_cast<double>(cand_len);
  return std::exp(std::min(1.0 - ratio, 0.0));
}

BleuScore bleu_from_ledger(const PrecisionLedger& ledger, int n, double smoothing) {
  if (n < 1 || n > ledger.max_order()) {
    throw std::invalid_argument("ledger does not cover orders 1.." + std::to_string(n));
  }
  BleuScore out;
  if (ledger.cand_len == 0) {
    out.degeneracy = BleuDegeneracy::empty_candidate;
    return out;
  }
  out.brevity_penalty = brevity_penalty(ledger.ref_len, ledger.cand_len);

  double log_sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double den = ledger.denominator(i);
    if (den <= 0.0) {
      out.degeneracy = BleuDegeneracy::zero_denominator;
      return out;
    }
    double num = ledger.numerator(i);
    if (num <= 0.0) {
      if (smoothing <= 0.0) {
        out.degeneracy = BleuDegeneracy::zero_overlap;
        return out;
      }
      num = smoothing;
    }
    log_sum += std::log(num / den);
  }
  out.value = std::min(1.0, out.brevity_penalty * std::exp(log_sum / n));
  return out;
}

BleuScore sentence_bleu(const QuestionSample& sample, const BleuParams& params,
                        const TokenizerConfig& tok) {
  return bleu_from_ledger(sample_ledger(sample, params, tok), params.max_order, params.smoothing);
}

CorpusBleu corpus_bleu(std::span<const PrecisionLedger> ledgers, const BleuParams& params) {
  if (ledgers.empty()) throw std::invalid_argument("corpus_bleu: empty corpus");
  CorpusBleu out{ledgers.front(), {}};
  for (std::size_t i = 1; i < ledgers.size(); ++i) out.ledger += ledgers[i];
  out.score = bleu_from_ledger(out.ledger, params.max_order, params.smoothing);
  return out;
}

CorpusBleu corpus_bleu(std::span<const QuestionSample> samples, const BleuParams& params,
                       const TokenizerConfig& tok) {
  if (samples.empty()) throw std::invalid_argument("corpus_bleu: empty corpus");
  std::vector<PrecisionLedger> ledgers;
  ledgers.reserve(samples.size());
  for (const auto& s : samples) ledgers.push_back(sample_ledger(s, params, tok));
  return corpus_bleu(ledgers, params);
}

}  // namespace mrceval

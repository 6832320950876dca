#include "mrceval/ngram.hpp"

#include <algorithm>
#include <stdexcept>

namespace mrceval {

std::int64_t NGramCounts::total() const {
  std::int64_t sum = 0;
  for (const auto& [gram, n] : counts) sum += n;
  return sum;
}

std::int64_t NGramCounts::count(const NGram& gram) const {
  auto it = counts.find(gram);
  return it == counts.end() ? 0 : it->second;
}

NGramCounts count_ngrams(const TokenSequence& seq, int order) {
  if (order < 1) throw std::invalid_argument("count_ngrams: order must be >= 1");
  NGramCounts out;
  out.order = order;
  const auto n = static_cast<std::size_t>(order);
  if (seq.size() < n) return out;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    ++out.counts[NGram(seq.tokens.begin() + i, seq.tokens.begin() + i + n)];
  }
  return out;
}

namespace {

void require_order(const NGramCounts& cand, const NGramCounts& ref) {
  if (cand.order != ref.order) {
    throw std::invalid_argument("n-gram order mismatch: candidate " + std::to_string(cand.order) +
                                " vs reference " + std::to_string(ref.order));
  }
}

template <class BoundFn>
std::int64_t clip_against(const NGramCounts& cand, BoundFn bound) {
  std::int64_t hits = 0;
  for (const auto& [gram, n] : cand.counts) hits += std::min(n, bound(gram));
  return hits;
}

}  // namespace

std::int64_t clipped_hits(const NGramCounts& cand, std::span<const NGramCounts> refs) {
  for (const auto& r : refs) require_order(cand, r);
  return clip_against(cand, [&](const NGram& g) {
    std::int64_t best = 0;
    for (const auto& r : refs) best = std::max(best, r.count(g));
    return best;
  });
}

std::int64_t clipped_hits_same_opinion(const NGramCounts& cand,
                                       std::span<const LabeledCounts> refs,
                                       std::optional<OpinionLabel> cand_opinion) {
  for (const auto& r : refs) require_order(cand, r.counts);
  if (!cand_opinion) return 0;
  return clip_against(cand, [&](const NGram& g) {
    std::int64_t best = 0;
    for (const auto& r : refs) {
      if (r.opinion == cand_opinion) best = std::max(best, r.counts.count(g));
    }
    return best;
  });
}

std::int64_t clipped_hits_entities(const NGramCounts& cand,
                                   std::span<const TokenSequence> entities, EntityClip mode) {
  if (entities.empty()) return 0;
  std::vector<NGramCounts> entity_counts;
  entity_counts.reserve(entities.size());
  for (const auto& e : entities) entity_counts.push_back(count_ngrams(e, cand.order));

  return clip_against(cand, [&](const NGram& g) {
    std::int64_t bound = 0;
    for (const auto& ec : entity_counts) {
      const auto c = ec.count(g);
      bound = mode == EntityClip::max_per_string ? std::max(bound, c) : bound + c;
    }
    return bound;
  });
}

}  // namespace mrceval

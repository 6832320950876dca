#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrceval/corpus.hpp"
#include "mrceval/tokenization.hpp"

namespace mrceval {

using NGram = std::vector<std::string>;

/// Multiset of the contiguous i-grams of one token sequence.
struct NGramCounts {
  int order = 1;
  std::map<NGram, std::int64_t> counts;

  std::int64_t total() const;
  std::int64_t count(const NGram& gram) const;
};

/// A reference's i-gram counts together with its opinion label.
struct LabeledCounts {
  NGramCounts counts;
  std::optional<OpinionLabel> opinion;
};

/// How the entity clip bound combines occurrences across entity strings.
enum class EntityClip {
  max_per_string,      // max over entity strings of the occurrences in that string
  sum_across_strings,  // total occurrences over all entity strings
};

/// Throws std::invalid_argument when order < 1.
NGramCounts count_ngrams(const TokenSequence& seq, int order);

/// Sum over candidate i-grams of min(count, max count in any one reference).
/// Throws std::invalid_argument if any reference has a different order.
std::int64_t clipped_hits(const NGramCounts& cand, std::span<const NGramCounts> refs);

/// clipped_hits restricted to references whose label equals `cand_opinion`.
/// Zero when the candidate has no label.
std::int64_t clipped_hits_same_opinion(const NGramCounts& cand,
                                       std::span<const LabeledCounts> refs,
                                       std::optional<OpinionLabel> cand_opinion);

/// Candidate i-gram counts clipped by their occurrences in the gold entity
/// strings. Entities must be tokenized with the candidate's configuration.
std::int64_t clipped_hits_entities(const NGramCounts& cand,
                                   std::span<const TokenSequence> entities,
                                   EntityClip mode = EntityClip::max_per_string);

}  // namespace mrceval

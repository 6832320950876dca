#include "mrceval/rouge.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace mrceval {

void RougeParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
}

LcsResult lcs_length(const TokenSequence& cand, const TokenSequence& ref) {
  LcsResult out{0, static_cast<std::int64_t>(cand.size()), static_cast<std::int64_t>(ref.size())};
  if (cand.empty() || ref.empty()) return out;

  std::vector<std::int64_t> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      cur[j + 1] = cand[i] == ref[j] ? prev[j] + 1 : std::max(prev[j + 1], cur[j]);
    }
    std::swap(prev, cur);
  }
  out.length = prev[ref.size()];
  return out;
}

namespace {

bool contains_contiguous(const TokenSequence& haystack, const TokenSequence& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

std::int64_t entity_bonus_length(const TokenSequence& cand,
                                 std::span<const TokenSequence> entities) {
  std::int64_t sum = 0;
  for (const auto& e : entities) {
    if (contains_contiguous(cand, e)) sum += static_cast<std::int64_t>(e.size());
  }
  return sum;
}

double rouge_f(double precision, double recall, double gamma) {
  if (precision <= 0.0 && recall <= 0.0) return 0.0;
  const double g2 = gamma * gamma;
  const double den = recall + g2 * precision;
  return den > 0.0 ? (1.0 + g2) * recall * precision / den : 0.0;
}

RougeScore rouge_l_sample(const QuestionSample& sample, const RougeParams& params,
                          const TokenizerConfig& tok) {
  params.validate();
  const double gamma = params.harmonic ? 1.0 : params.gamma;
  const bool opinion_bonus =
      params.adapted && params.alpha > 0.0 && sample.qtype == QuestionType::yes_no;
  const bool entity_bonus =
      params.adapted && params.beta > 0.0 && sample.qtype == QuestionType::entity;

  const TokenSequence cand = tokenize(sample.candidate.text, tok);
  RougeScore out;
  out.empty_candidate = cand.empty();

  // The entity bonus depends only on the candidate, so it is shared by all references.
  double entity_term = 0.0;
  if (entity_bonus) {
    std::vector<TokenSequence> entities;
    for (const auto& e : sample.entities) entities.push_back(tokenize(e, tok));
    entity_term = params.beta * static_cast<double>(entity_bonus_length(cand, entities));
  }

  bool first = true;
  for (const auto& ref_answer : sample.references) {
    const TokenSequence ref = tokenize(ref_answer.text, tok);
    const LcsResult lcs = lcs_length(cand, ref);
    const double l = static_cast<double>(lcs.length);

    double bonus = entity_term;
    if (opinion_bonus && sample.candidate.opinion && ref_answer.opinion == sample.candidate.opinion) {
      bonus = params.alpha * l;
    }
    const double p = ratio(l + bonus, static_cast<double>(lcs.cand_len) + bonus);
    const double r = ratio(l + bonus, static_cast<double>(lcs.ref_len) + bonus);

    if (params.selection == ReferenceSelection::independent_max) {
      out.precision = std::max(out.precision, p);
      out.recall = std::max(out.recall, r);
    } else {
      const double f = rouge_f(p, r, gamma);
      if (first || f > out.value) {
        out.value = f;
        out.precision = p;
        out.recall = r;
      }
    }
    first = false;
  }
  if (params.selection == ReferenceSelection::independent_max) {
    out.value = rouge_f(out.precision, out.recall, gamma);
  }
  return out;
}

double mean_score(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty score list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double corpus_rouge_l(std::span<const QuestionSample> samples, const RougeParams& params,
                      const TokenizerConfig& tok) {
  if (samples.empty()) throw std::invalid_argument("corpus_rouge_l: empty corpus");
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (const auto& s : samples) scores.push_back(rouge_l_sample(s, params, tok).value);
  return mean_score(scores);
}

}  // namespace mrceval

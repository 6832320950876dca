#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mrceval/bleu.hpp"
#include "oracles.hpp"

using namespace mrceval;

namespace {

QuestionSample example1() {
  QuestionSample s;
  s.id = "ex1";
  s.qtype = QuestionType::yes_no;
  s.candidate = {"Skipping rope is an aerobic exercise.", OpinionLabel::yes};
  s.references = {{"Skipping rope is a kind of aerobic exercise with low intensity.", OpinionLabel::yes},
                  {"Skipping rope can be regarded as an aerobic exercise only when skipping for a long time.",
                   OpinionLabel::depends}};
  return s;
}

QuestionSample example2() {
  QuestionSample s;
  s.id = "ex2";
  s.qtype = QuestionType::entity;
  s.candidate = {"Qin unified China in 221 BC after the war against other kingdoms which lasted ten years.",
                 std::nullopt};
  s.references = {{"Qin unified China in ten years, from 230 BC to 221 BC.", std::nullopt}};
  s.entities = {"ten years", "230 BC", "221 BC"};
  return s;
}

BleuParams params(int n, double alpha, double beta, bool adapted = true) {
  BleuParams p;
  p.max_order = n;
  p.alpha = alpha;
  p.beta = beta;
  p.adapted = adapted;
  return p;
}

}  // namespace

TEST(SampleLedger, ExampleOneAdapted) {
  const auto l = sample_ledger(example1(), params(2, 1.0, 1.0));
  EXPECT_EQ(l.at(2).total, 6);
  EXPECT_EQ(l.at(2).hits, 4);
  EXPECT_EQ(l.at(2).opinion_bonus_hits, 3);
  EXPECT_EQ(l.numerator(2), 7.0);
  EXPECT_EQ(l.denominator(2), 9.0);
  EXPECT_NEAR(l.numerator(2) / l.denominator(2), 0.78, 0.005);
  EXPECT_EQ(l.cand_len, 7);
  EXPECT_EQ(l.ref_len, 12);
}

TEST(SampleLedger, ExampleOneVanilla) {
  const auto l = sample_ledger(example1(), params(2, 1.0, 1.0, false));
  EXPECT_EQ(l.numerator(2), 4.0);
  EXPECT_EQ(l.denominator(2), 6.0);
  EXPECT_EQ(l.at(2).opinion_bonus_hits, 0);
}

TEST(SampleLedger, ExampleTwoAdapted) {
  const auto l = sample_ledger(example2(), params(2, 1.0, 1.0));
  EXPECT_EQ(l.at(2).total, 16);
  EXPECT_EQ(l.at(2).hits, 5);
  EXPECT_EQ(l.at(2).entity_bonus_hits, 2);
  EXPECT_EQ(l.numerator(2), 7.0);
  EXPECT_EQ(l.denominator(2), 18.0);
  EXPECT_EQ(l.ref_len, 14);
  EXPECT_EQ(l.cand_len, 17);
}

TEST(SampleLedger, MissingCandidateLabelForfeitsBonus) {
  auto s = example1();
  s.candidate.opinion.reset();
  const auto l = sample_ledger(s, params(2, 1.0, 1.0));
  EXPECT_EQ(l.numerator(2), 4.0);
}

TEST(SampleLedger, DescriptionGetsNoBonus) {
  auto s = example2();
  s.qtype = QuestionType::description;
  s.entities.clear();
  const auto adapted = sample_ledger(s, params(4, 5.0, 5.0));
  const auto vanilla = sample_ledger(s, params(4, 5.0, 5.0, false));
  for (int i = 1; i <= 4; ++i) {
    EXPECT_EQ(adapted.bonus(i), 0.0);
    EXPECT_EQ(adapted.numerator(i), vanilla.numerator(i));
    EXPECT_EQ(adapted.denominator(i), vanilla.denominator(i));
  }
}

TEST(SampleLedger, RejectsBadParams) {
  EXPECT_THROW(sample_ledger(example1(), params(0, 1, 1)), std::invalid_argument);
  EXPECT_THROW(sample_ledger(example1(), params(4, -1, 1)), std::invalid_argument);
}

TEST(ClosestRefLength, TiesGoToShorter) {
  const std::vector<TokenSequence> refs = {tokenize("a b c d e f"), tokenize("a b")};
  EXPECT_EQ(closest_ref_length(refs, 4), 2);
  EXPECT_EQ(closest_ref_length(refs, 5), 6);
  EXPECT_EQ(closest_ref_length({}, 5), 0);
}

TEST(BrevityPenalty, Values) {
  EXPECT_EQ(brevity_penalty(10, 10), 1.0);
  EXPECT_EQ(brevity_penalty(10, 20), 1.0);
  EXPECT_NEAR(brevity_penalty(12, 7), 0.489541659556953, 1e-12);
  EXPECT_EQ(brevity_penalty(5, 0), 0.0);
}

TEST(BleuFromLedger, PerfectMatch) {
  PrecisionLedger l(2, 0, 0);
  l.at(1) = {5, 5, 0, 0};
  l.at(2) = {4, 4, 0, 0};
  l.ref_len = l.cand_len = 5;
  const auto s = bleu_from_ledger(l, 2);
  EXPECT_EQ(s.value, 1.0);
  EXPECT_FALSE(s.degenerate());
}

TEST(BleuFromLedger, GeometricMean) {
  PrecisionLedger l(2, 0, 0);
  l.at(1) = {8, 10, 0, 0};
  l.at(2) = {5, 10, 0, 0};
  l.ref_len = 10;
  l.cand_len = 11;
  EXPECT_NEAR(bleu_from_ledger(l, 2).value, 0.632455532033676, 1e-12);
}

TEST(BleuFromLedger, DegenerateCases) {
  PrecisionLedger l(2, 0, 0);
  l.at(1) = {3, 3, 0, 0};
  l.at(2) = {0, 2, 0, 0};
  l.ref_len = l.cand_len = 3;
  auto s = bleu_from_ledger(l, 2);
  EXPECT_EQ(s.value, 0.0);
  EXPECT_EQ(s.degeneracy, BleuDegeneracy::zero_overlap);

  // Smoothing replaces the zero numerator.
  s = bleu_from_ledger(l, 2, 0.1);
  EXPECT_NEAR(s.value, std::sqrt(1.0 * 0.1 / 2.0), 1e-12);

  l.at(2) = {0, 0, 0, 0};
  EXPECT_EQ(bleu_from_ledger(l, 2).degeneracy, BleuDegeneracy::zero_denominator);

  PrecisionLedger empty(2, 0, 0);
  empty.ref_len = 4;
  s = bleu_from_ledger(empty, 2);
  EXPECT_EQ(s.degeneracy, BleuDegeneracy::empty_candidate);
  EXPECT_EQ(s.brevity_penalty, 0.0);
  EXPECT_THROW(bleu_from_ledger(empty, 3), std::invalid_argument);
}

TEST(CorpusBleu, SingleSampleEqualsSentence) {
  const std::vector<QuestionSample> one = {example2()};
  const auto p = params(2, 1.0, 1.0);
  EXPECT_EQ(corpus_bleu(one, p).score.value, sentence_bleu(example2(), p).value);
}

TEST(CorpusBleu, ExactMatchesScoreOne) {
  std::vector<QuestionSample> corpus;
  for (auto s : {example1(), example2()}) {
    s.candidate.text = s.references.front().text;
    s.references.resize(1);
    corpus.push_back(s);
  }
  EXPECT_EQ(corpus_bleu(corpus, params(4, 2.0, 1.0)).score.value, 1.0);
}

// Ledger summed by hand: order 1 (7+9+6+4)/(7+17+6+4), order 2 (4+5+3+2)/(6+16+3+2),
// r = 12 + 14, c = 7 + 17.
TEST(CorpusBleu, TwoSamplesMatchHandSummedLedger) {
  const std::vector<QuestionSample> corpus = {example1(), example2()};
  const auto adapted = corpus_bleu(corpus, params(2, 1.0, 1.0));
  EXPECT_EQ(adapted.ledger.numerator(1), 26.0);
  EXPECT_EQ(adapted.ledger.denominator(1), 34.0);
  EXPECT_EQ(adapted.ledger.numerator(2), 14.0);
  EXPECT_EQ(adapted.ledger.denominator(2), 27.0);
  EXPECT_EQ(adapted.ledger.ref_len, 26);
  EXPECT_EQ(adapted.ledger.cand_len, 24);
  EXPECT_NEAR(adapted.score.value, 0.579346175557496, 1e-12);

  const auto vanilla = corpus_bleu(corpus, params(2, 1.0, 1.0, false));
  EXPECT_NEAR(vanilla.score.value, 0.480477525221414, 1e-12);
}

TEST(CorpusBleu, EmptyCorpus) {
  EXPECT_THROW(corpus_bleu(std::vector<QuestionSample>{}, params(4, 2, 1)), std::invalid_argument);
}

TEST(PrecisionLedger, SumRequiresMatchingParameters) {
  PrecisionLedger a(2, 1.0, 1.0), b(2, 2.0, 1.0), c(3, 1.0, 1.0);
  EXPECT_THROW(a += b, std::invalid_argument);
  EXPECT_THROW(a += c, std::invalid_argument);
}

TEST(SentenceBleu, ExampleOneBleu2) {
  EXPECT_NEAR(sentence_bleu(example1(), params(2, 1.0, 0.0)).value, 0.431735162531181, 1e-12);
  EXPECT_NEAR(sentence_bleu(example1(), params(2, 1.0, 0.0, false)).value, 0.399709091249937, 1e-12);
}

namespace {

QuestionSample random_sample(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> type(0, 2), label(0, 2), nrefs(1, 3), coin(0, 3), nent(0, 3);
  QuestionSample s;
  s.id = "r";
  s.qtype = static_cast<QuestionType>(type(rng));
  s.candidate.text = oracle::join(oracle::random_tokens(rng, 0, 12, 5));
  if (coin(rng)) s.candidate.opinion = static_cast<OpinionLabel>(label(rng));
  for (int k = nrefs(rng); k > 0; --k) {
    ReferenceAnswer r{oracle::join(oracle::random_tokens(rng, 1, 12, 5)), std::nullopt};
    if (s.qtype == QuestionType::yes_no) r.opinion = static_cast<OpinionLabel>(label(rng));
    s.references.push_back(r);
  }
  if (s.qtype == QuestionType::entity) {
    for (int k = nent(rng); k > 0; --k) s.entities.push_back(oracle::join(oracle::random_tokens(rng, 1, 3, 5)));
  }
  return s;
}

}  // namespace

TEST(BleuProperty, BoundedAndZeroWeightsEqualVanilla) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  std::uniform_int_distribution<int> n(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_sample(rng);
    const int order = n(rng);
    const auto adapted = sentence_bleu(s, params(order, w(rng), w(rng)));
    EXPECT_GE(adapted.value, 0.0);
    EXPECT_LE(adapted.value, 1.0);

    const auto zero = sample_ledger(s, params(order, 0.0, 0.0));
    const auto vanilla = sample_ledger(s, params(order, 3.0, 3.0, false));
    EXPECT_EQ(zero, vanilla);
    for (int i = 1; i <= order; ++i) EXPECT_LE(zero.numerator(i), zero.denominator(i));
  }
}

TEST(BleuProperty, CorpusLedgerIsOrderIndependent) {
  std::mt19937_64 rng(5);
  std::vector<QuestionSample> corpus;
  for (int i = 0; i < 40; ++i) corpus.push_back(random_sample(rng));
  const auto p = params(4, 0.37, 1.91);
  const auto reference = corpus_bleu(corpus, p);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    const std::size_t cut = 1 + rng() % (corpus.size() - 1);
    const std::span<const QuestionSample> all(corpus);
    auto right = corpus_bleu(all.subspan(cut), p).ledger;
    right += corpus_bleu(all.first(cut), p).ledger;
    EXPECT_EQ(right, reference.ledger);
    EXPECT_EQ(bleu_from_ledger(right, 4).value, reference.score.value);
  }
}

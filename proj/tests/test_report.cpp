#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mrceval/report.hpp"
#include "oracles.hpp"

using namespace mrceval;

namespace {

struct Setup {
  BleuParams bleu;
  RougeParams rouge;
};

Setup unit_weights(int order = 2) {
  Setup s;
  s.bleu.max_order = order;
  s.bleu.alpha = 1.0;
  s.bleu.beta = 1.0;
  s.rouge.alpha = 1.0;
  s.rouge.beta = 1.0;
  s.rouge.harmonic = true;
  return s;
}

std::vector<QuestionSample> fixture() { return load_corpus(MRCEVAL_FIXTURES "/examples.jsonl"); }

std::vector<QuestionSample> random_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<QuestionSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    QuestionSample s;
    s.id = "r" + std::to_string(i);
    s.qtype = i % 3 == 0 ? QuestionType::yes_no : i % 3 == 1 ? QuestionType::entity : QuestionType::description;
    s.candidate.text = oracle::join(oracle::random_tokens(rng, 1, 12, 6));
    const std::size_t refs = 1 + rng() % 3;
    for (std::size_t k = 0; k < refs; ++k) {
      ReferenceAnswer ref{oracle::join(oracle::random_tokens(rng, 1, 12, 6)), std::nullopt};
      if (s.qtype == QuestionType::yes_no) ref.opinion = static_cast<OpinionLabel>(rng() % 3);
      s.references.push_back(ref);
    }
    if (s.qtype == QuestionType::yes_no) s.candidate.opinion = static_cast<OpinionLabel>(rng() % 3);
    if (s.qtype == QuestionType::entity) s.entities = {oracle::join(oracle::random_tokens(rng, 1, 2, 6))};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST(MetricNames, FollowOrder) {
  BleuParams p;
  p.max_order = 2;
  EXPECT_EQ(metric_names(p), (std::vector<std::string>{"bleu2", "bleu2_adapted", "rougeL", "rougeL_adapted"}));
}

TEST(ScoreCorpus, FixtureValues) {
  const auto cfg = unit_weights();
  const auto report = score_corpus(fixture(), cfg.bleu, cfg.rouge);
  ASSERT_EQ(report.per_question.size(), 4u);
  EXPECT_EQ(report.per_question[0].id, "ex1");
  EXPECT_EQ(report.per_question[1].qtype, QuestionType::entity);
  EXPECT_NEAR(report.per_question[2].scores.at("rougeL_adapted"), 24.0 / 31.0, 1e-12);
  EXPECT_NEAR(report.per_question[2].scores.at("rougeL"), 12.0 / 19.0, 1e-12);
  EXPECT_NEAR(report.per_question[0].scores.at("bleu2_adapted"), 0.431735162531181, 1e-12);
  EXPECT_NEAR(report.per_question[0].scores.at("bleu2"), 0.399709091249937, 1e-12);
  // Duplicated samples leave every ratio of the summed ledger unchanged.
  EXPECT_NEAR(report.corpus_scores.at("bleu2_adapted"), 0.579346175557496, 1e-12);
  EXPECT_NEAR(report.corpus_scores.at("bleu2"), 0.480477525221414, 1e-12);
  EXPECT_TRUE(report.degenerate_flags.empty());
  EXPECT_EQ(report.params_used.bleu, cfg.bleu);
}

TEST(ScoreCorpus, CorpusAggregation) {
  const auto corpus = random_corpus(60, 1);
  const auto cfg = unit_weights(4);
  const auto report = score_corpus(corpus, cfg.bleu, cfg.rouge);

  std::vector<double> rouge;
  for (const auto& q : report.per_question) rouge.push_back(q.scores.at("rougeL_adapted"));
  EXPECT_NEAR(report.corpus_scores.at("rougeL_adapted"), mean_score(rouge), 1e-12);
  EXPECT_NEAR(report.corpus_scores.at("rougeL_adapted"), corpus_rouge_l(corpus, cfg.rouge), 1e-12);

  std::vector<PrecisionLedger> ledgers;
  for (const auto& s : corpus) ledgers.push_back(sample_ledger(s, cfg.bleu));
  EXPECT_EQ(report.corpus_scores.at("bleu4_adapted"), corpus_bleu(ledgers, cfg.bleu).score.value);
}

TEST(ScoreCorpus, ExactMatchScoresOne) {
  auto corpus = random_corpus(20, 2);
  for (auto& s : corpus) {
    s.candidate.text = s.references[0].text + " x y z w";
    s.references = {{s.candidate.text, s.references[0].opinion}};
    s.candidate.opinion = s.references[0].opinion;
    s.entities.clear();
    if (s.qtype == QuestionType::entity) s.entities = {"x y"};
  }
  const auto cfg = unit_weights(4);
  const auto report = score_corpus(corpus, cfg.bleu, cfg.rouge);
  for (const auto& [name, v] : report.corpus_scores) EXPECT_DOUBLE_EQ(v, 1.0) << name;
  for (const auto& q : report.per_question)
    for (const auto& [name, v] : q.scores) EXPECT_DOUBLE_EQ(v, 1.0) << q.id << " " << name;
}

TEST(ScoreCorpus, ThreadCountDoesNotChangeResult) {
  const auto corpus = random_corpus(200, 3);
  const auto cfg = unit_weights(4);
  const auto one = score_corpus(corpus, cfg.bleu, cfg.rouge, {}, 1);
  const auto many = score_corpus(corpus, cfg.bleu, cfg.rouge, {}, 7);
  EXPECT_EQ(one, many);
  EXPECT_EQ(render(one, ReportFormat::json), render(many, ReportFormat::json));
}

TEST(ScoreCorpus, DegenerateFlags) {
  QuestionSample empty;
  empty.id = "e";
  empty.candidate.text = "";
  empty.references = {{"some answer", std::nullopt}};
  QuestionSample shorty;
  shorty.id = "s";
  shorty.candidate.text = "one";
  shorty.references = {{"one two three", std::nullopt}};
  const std::vector<QuestionSample> corpus = {empty, shorty};
  BleuParams bleu;
  const auto report = score_corpus(corpus, bleu, RougeParams{});
  ASSERT_GE(report.degenerate_flags.size(), 3u);
  EXPECT_EQ(report.degenerate_flags[0], (DegenerateFlag{"e", "empty candidate"}));
  EXPECT_EQ(report.degenerate_flags[1].id, "s");
  EXPECT_EQ(report.degenerate_flags.back().id, "<corpus>");
  EXPECT_EQ(report.per_question[0].scores.at("rougeL"), 0.0);
  EXPECT_THROW(score_corpus(std::vector<QuestionSample>{}, bleu, RougeParams{}), std::invalid_argument);
}

TEST(Render, JsonRoundTripIsByteIdentical) {
  const auto cfg = unit_weights();
  const auto report = score_corpus(random_corpus(15, 4), cfg.bleu, cfg.rouge);
  const auto text = render(report, ReportFormat::json);
  const auto back = report_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(render(back, ReportFormat::json), text);
  EXPECT_EQ(back.params_used, report.params_used);
  EXPECT_EQ(render(report, ReportFormat::json), text);
}

TEST(Render, EmptyPerQuestionIsValidJson) {
  ScoreReport r;
  r.corpus_scores = {{"bleu4", 0.0}};
  const auto text = render(r, ReportFormat::json);
  const auto j = nlohmann::json::parse(text);
  EXPECT_TRUE(j.at("per_question").empty());
  EXPECT_EQ(report_from_json(j), r);
}

TEST(Render, TsvHasHeaderPlusOneRowPerQuestion) {
  const auto cfg = unit_weights();
  const auto report = score_corpus(fixture(), cfg.bleu, cfg.rouge);
  std::istringstream in(render(report, ReportFormat::tsv));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "id\ttype\tbleu2\tbleu2_adapted\trougeL\trougeL_adapted");
  EXPECT_EQ(lines[1].substr(0, 11), "ex1\tYES_NO\t");
}

TEST(Render, TextMentionsEveryQuestion) {
  const auto cfg = unit_weights();
  const auto text = render(score_corpus(fixture(), cfg.bleu, cfg.rouge), ReportFormat::text);
  for (const char* id : {"ex1", "ex2", "ex3", "ex4"}) EXPECT_NE(text.find(id), std::string::npos);
  EXPECT_NE(text.find("0.77"), std::string::npos);
}

TEST(CanonicalJson, SortedKeysAndFixedDecimals) {
  nlohmann::json j = {{"b", 0.1234567}, {"a", {{"z", 1}, {"y", 1.0 / 3.0}}}, {"params_used", {{"alpha", 0.1}}}};
  const auto text = canonical_json(j);
  EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
  EXPECT_LT(text.find("\"y\""), text.find("\"z\""));
  EXPECT_NE(text.find("0.123457"), std::string::npos);
  EXPECT_NE(text.find("0.333333"), std::string::npos);
  EXPECT_NE(text.find("\"alpha\": 0.1\n"), std::string::npos);
  EXPECT_NE(canonical_json(nlohmann::json{{"x", std::nan("")}}).find("null"), std::string::npos);
  EXPECT_THROW(report_format_from_string("xml"), std::invalid_argument);
}

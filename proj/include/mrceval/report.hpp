#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mrceval/bleu.hpp"
#include "mrceval/corpus.hpp"
#include "mrceval/rouge.hpp"
#include "mrceval/tokenization.hpp"

namespace mrceval {

struct QuestionScores {
  std::string id;
  QuestionType qtype = QuestionType::description;
  std::map<std::string, double> scores;

  friend bool operator==(const QuestionScores&, const QuestionScores&) = default;
};

struct DegenerateFlag {
  std::string id;
  std::string reason;

  friend bool operator==(const DegenerateFlag&, const DegenerateFlag&) = default;
};

struct ParamsUsed {
  BleuParams bleu;
  RougeParams rouge;
  TokenizerConfig tokenizer;

  friend bool operator==(const ParamsUsed&, const ParamsUsed&) = default;
};

struct ScoreReport {
  std::map<std::string, double> corpus_scores;
  std::vector<QuestionScores> per_question;  // input order
  ParamsUsed params_used;
  std::vector<DegenerateFlag> degenerate_flags;

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

/// Metric column names: "bleu<n>", "bleu<n>_adapted", "rougeL", "rougeL_adapted".
std::vector<std::string> metric_names(const BleuParams& bleu);

/// Scores every sample with vanilla and adapted BLEU-n and ROUGE-L.
/// The adapted columns use the given params as-is, so `adapted = false`
/// makes them equal the vanilla ones. Per-question work is spread over
/// `threads` workers; results keep input order.
///
/// Throws std::invalid_argument on an empty corpus.
ScoreReport score_corpus(std::span<const QuestionSample> samples, const BleuParams& bleu,
                         const RougeParams& rouge, const TokenizerConfig& tok = {},
                         unsigned threads = 1);

enum class ReportFormat { json, tsv, text };

ReportFormat report_format_from_string(std::string_view s);

std::string render(const ScoreReport& report, ReportFormat format);

nlohmann::json to_json(const ScoreReport& report);
ScoreReport report_from_json(const nlohmann::json& j);

/// Canonical JSON text: sorted keys, two-space indent, floats printed with
/// six decimals except inside the subtrees named by `exact_keys`, which use
/// the shortest round-trip form.
std::string canonical_json(const nlohmann::json& j,
                           const std::vector<std::string>& exact_keys = {"params_used"});

}  // namespace mrceval

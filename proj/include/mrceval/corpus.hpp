#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mrceval/tokenization.hpp"

namespace mrceval {

enum class OpinionLabel { yes, no, depends };
enum class QuestionType { yes_no, entity, description };

std::string_view to_string(OpinionLabel label);
std::string_view to_string(QuestionType type);
OpinionLabel opinion_from_string(std::string_view s);
QuestionType question_type_from_string(std::string_view s);

struct CandidateAnswer {
  std::string text;
  std::optional<OpinionLabel> opinion;  // absent: the system did not predict one

  friend bool operator==(const CandidateAnswer&, const CandidateAnswer&) = default;
};

struct ReferenceAnswer {
  std::string text;
  std::optional<OpinionLabel> opinion;

  friend bool operator==(const ReferenceAnswer&, const ReferenceAnswer&) = default;
};

struct QuestionSample {
  std::string id;
  QuestionType qtype = QuestionType::description;
  CandidateAnswer candidate;
  std::vector<ReferenceAnswer> references;
  std::vector<std::string> entities;
  std::optional<std::vector<int>> human_scores;

  /// Arithmetic mean of the annotator scores; nullopt when there are none.
  std::optional<double> mean_human_score() const;

  friend bool operator==(const QuestionSample&, const QuestionSample&) = default;
};

struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// One entry per violated invariant; empty iff the sample is well formed.
std::vector<Violation> validate_sample(const QuestionSample& sample);

/// Like validate_sample, and additionally checks that every text field
/// tokenizes under `config` (well-formed UTF-8, entities non-empty).
std::vector<Violation> validate_sample(const QuestionSample& sample,
                                       const TokenizerConfig& config);

/// Error located at one line of a JSON-lines corpus.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, std::string field, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string field_;
  std::string detail_;
};

struct CorpusReadResult {
  std::vector<QuestionSample> samples;
  std::vector<CorpusError> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses every line, collecting samples and located errors. Blank lines
/// are not samples and are skipped; any other line yields exactly one
/// sample or at least one error.
CorpusReadResult read_corpus(std::istream& in, const TokenizerConfig& config = {});

/// Loads a corpus file, throwing the first CorpusError encountered.
/// An unreadable file throws std::runtime_error naming the path.
std::vector<QuestionSample> load_corpus(const std::filesystem::path& path,
                                        const TokenizerConfig& config = {});

nlohmann::json to_json(const QuestionSample& sample);

/// Throws CorpusError (line 0) naming the offending field.
QuestionSample sample_from_json(const nlohmann::json& j, std::size_t line = 0);

}  // namespace mrceval

#include "mrceval/corpus.hpp"

#include <fstream>
#include <istream>
#include <numeric>

namespace mrceval {

using nlohmann::json;

std::string_view to_string(OpinionLabel label) {
  switch (label) {
    case OpinionLabel::yes: return "Yes";
    case OpinionLabel::no: return "No";
    case OpinionLabel::depends: return "Depends";
  }
  return "Depends";
}

std::string_view to_string(QuestionType type) {
  switch (type) {
    case QuestionType::yes_no: return "YES_NO";
    case QuestionType::entity: return "ENTITY";
    case QuestionType::description: return "DESCRIPTION";
  }
  return "DESCRIPTION";
}

OpinionLabel opinion_from_string(std::string_view s) {
  if (s == "Yes") return OpinionLabel::yes;
  if (s == "No") return OpinionLabel::no;
  if (s == "Depends") return OpinionLabel::depends;
  throw std::invalid_argument("unknown opinion label: " + std::string(s));
}

QuestionType question_type_from_string(std::string_view s) {
  if (s == "YES_NO") return QuestionType::yes_no;
  if (s == "ENTITY") return QuestionType::entity;
  if (s == "DESCRIPTION") return QuestionType::description;
  throw std::invalid_argument("unknown question type: " + std::string(s));
}

std::optional<double> QuestionSample::mean_human_score() const {
  if (!human_scores || human_scores->empty()) return std::nullopt;
  const double sum = std::accumulate(human_scores->begin(), human_scores->end(), 0.0);
  return sum / static_cast<double>(human_scores->size());
}

std::vector<Violation> validate_sample(const QuestionSample& sample) {
  std::vector<Violation> out;
  if (sample.references.empty()) {
    out.push_back({"references", "at least one reference answer is required"});
  }
  if (!sample.entities.empty() && sample.qtype != QuestionType::entity) {
    out.push_back({"entities", "entity list given for a " +
                                   std::string(to_string(sample.qtype)) + " question"});
  }
  if (sample.qtype == QuestionType::yes_no) {
    for (std::size_t i = 0; i < sample.references.size(); ++i) {
      if (!sample.references[i].opinion) {
        out.push_back({"references[" + std::to_string(i) + "].opinion",
                       "every YES_NO reference needs an opinion label"});
      }
    }
  }
  if (sample.human_scores) {
    for (std::size_t i = 0; i < sample.human_scores->size(); ++i) {
      const int s = (*sample.human_scores)[i];
      if (s < 1 || s > 5) {
        out.push_back({"human_scores[" + std::to_string(i) + "]",
                       "score " + std::to_string(s) + " outside [1, 5]"});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_sample(const QuestionSample& sample,
                                       const TokenizerConfig& config) {
  auto out = validate_sample(sample);
  auto check = [&](const std::string& text, const std::string& field, bool non_empty) {
    try {
      if (tokenize(text, config).empty() && non_empty) {
        out.push_back({field, "tokenizes to an empty sequence"});
      }
    } catch (const std::invalid_argument& e) {
      out.push_back({field, e.what()});
    }
  };
  check(sample.candidate.text, "candidate.text", false);
  for (std::size_t i = 0; i < sample.references.size(); ++i) {
    check(sample.references[i].text, "references[" + std::to_string(i) + "].text", false);
  }
  for (std::size_t i = 0; i < sample.entities.size(); ++i) {
    check(sample.entities[i], "entities[" + std::to_string(i) + "]", true);
  }
  return out;
}

CorpusError::CorpusError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + field + ": " + message),
      line_(line),
      field_(std::move(field)),
      detail_(message) {}

namespace {

const json& require(const json& obj, const char* key, std::size_t line,
                    const std::string& prefix = "") {
  auto it = obj.find(key);
  if (it == obj.end()) throw CorpusError(line, prefix + key, "missing field");
  return *it;
}

std::string require_string(const json& v, const std::string& field, std::size_t line) {
  if (!v.is_string()) throw CorpusError(line, field, "expected a string");
  return v.get<std::string>();
}

std::optional<OpinionLabel> read_opinion(const json& obj, const std::string& field,
                                         std::size_t line) {
  auto it = obj.find("opinion");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw CorpusError(line, field, "expected \"Yes\", \"No\" or \"Depends\"");
  try {
    return opinion_from_string(it->get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw CorpusError(line, field, e.what());
  }
}

}  // namespace

QuestionSample sample_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw CorpusError(line, "<root>", "expected a JSON object");
  QuestionSample s;
  s.id = require_string(require(j, "id", line), "id", line);

  try {
    s.qtype = question_type_from_string(
        require_string(require(j, "question_type", line), "question_type", line));
  } catch (const std::invalid_argument& e) {
    throw CorpusError(line, "question_type", e.what());
  }

  const json& cand = require(j, "candidate", line);
  if (!cand.is_object()) throw CorpusError(line, "candidate", "expected an object");
  s.candidate.text = require_string(require(cand, "text", line, "candidate."), "candidate.text", line);
  s.candidate.opinion = read_opinion(cand, "candidate.opinion", line);

  const json& refs = require(j, "references", line);
  if (!refs.is_array()) throw CorpusError(line, "references", "expected an array");
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::string prefix = "references[" + std::to_string(i) + "]";
    if (!refs[i].is_object()) throw CorpusError(line, prefix, "expected an object");
    ReferenceAnswer r;
    r.text = require_string(require(refs[i], "text", line, prefix + "."), prefix + ".text", line);
    r.opinion = read_opinion(refs[i], prefix + ".opinion", line);
    s.references.push_back(std::move(r));
  }

  if (auto it = j.find("entities"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw CorpusError(line, "entities", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      s.entities.push_back(require_string((*it)[i], "entities[" + std::to_string(i) + "]", line));
    }
  }

  if (auto it = j.find("human_scores"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw CorpusError(line, "human_scores", "expected an array");
    std::vector<int> scores;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& v = (*it)[i];
      if (!v.is_number_integer()) {
        throw CorpusError(line, "human_scores[" + std::to_string(i) + "]", "expected an integer");
      }
      scores.push_back(v.get<int>());
    }
    s.human_scores = std::move(scores);
  }
  return s;
}

json to_json(const QuestionSample& sample) {
  auto opinion = [](const std::optional<OpinionLabel>& o) -> json {
    return o ? json(std::string(to_string(*o))) : json(nullptr);
  };
  json refs = json::array();
  for (const auto& r : sample.references) {
    refs.push_back({{"text", r.text}, {"opinion", opinion(r.opinion)}});
  }
  json j = {
      {"id", sample.id},
      {"question_type", std::string(to_string(sample.qtype))},
      {"candidate", {{"text", sample.candidate.text}, {"opinion", opinion(sample.candidate.opinion)}}},
      {"references", refs},
      {"entities", sample.entities},
  };
  if (sample.human_scores) j["human_scores"] = *sample.human_scores;
  return j;
}

CorpusReadResult read_corpus(std::istream& in, const TokenizerConfig& config) {
  CorpusReadResult result;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;

    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      result.errors.emplace_back(line, "<json>", e.what());
      continue;
    }
    try {
      QuestionSample sample = sample_from_json(j, line);
      auto violations = validate_sample(sample, config);
      if (violations.empty()) {
        result.samples.push_back(std::move(sample));
      } else {
        for (auto& v : violations) result.errors.emplace_back(line, v.field, v.message);
      }
    } catch (const CorpusError& e) {
      result.errors.push_back(e);
    }
  }
  return result;
}

std::vector<QuestionSample> load_corpus(const std::filesystem::path& path,
                                        const TokenizerConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
  auto result = read_corpus(in, config);
  if (!result.ok()) throw result.errors.front();
  return std::move(result.samples);
}

}  // namespace mrceval

#include "mrceval/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mrceval {

using nlohmann::json;

std::vector<std::string> metric_names(const BleuParams& bleu) {
  const std::string b = "bleu" + std::to_string(bleu.max_order);
  return {b, b + "_adapted", "rougeL", "rougeL_adapted"};
}

namespace {

struct QuestionResult {
  PrecisionLedger vanilla_ledger;
  PrecisionLedger adapted_ledger;
  BleuScore bleu;
  BleuScore bleu_adapted;
  RougeScore rouge;
  RougeScore rouge_adapted;
};

QuestionResult score_one(const QuestionSample& s, const BleuParams& bleu_vanilla,
                         const BleuParams& bleu, const RougeParams& rouge_vanilla,
                         const RougeParams& rouge, const TokenizerConfig& tok) {
  QuestionResult r;
  r.vanilla_ledger = sample_ledger(s, bleu_vanilla, tok);
  r.adapted_ledger = sample_ledger(s, bleu, tok);
  r.bleu = bleu_from_ledger(r.vanilla_ledger, bleu.max_order, bleu.smoothing);
  r.bleu_adapted = bleu_from_ledger(r.adapted_ledger, bleu.max_order, bleu.smoothing);
  r.rouge = rouge_l_sample(s, rouge_vanilla, tok);
  r.rouge_adapted = rouge_l_sample(s, rouge, tok);
  return r;
}

}  // namespace

ScoreReport score_corpus(std::span<const QuestionSample> samples, const BleuParams& bleu,
                         const RougeParams& rouge, const TokenizerConfig& tok, unsigned threads) {
  if (samples.empty()) throw std::invalid_argument("score_corpus: empty corpus");
  bleu.validate();
  rouge.validate();

  BleuParams bleu_vanilla = bleu;
  bleu_vanilla.adapted = false;
  RougeParams rouge_vanilla = rouge;
  rouge_vanilla.adapted = false;

  std::vector<QuestionResult> results(samples.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(samples.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      results[i] = score_one(samples[i], bleu_vanilla, bleu, rouge_vanilla, rouge, tok);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < samples.size(); i = next++) {
            results[i] = score_one(samples[i], bleu_vanilla, bleu, rouge_vanilla, rouge, tok);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const auto names = metric_names(bleu);
  ScoreReport report;
  report.params_used = {bleu, rouge, tok};

  std::vector<PrecisionLedger> vanilla_ledgers, adapted_ledgers;
  std::vector<double> rouge_values, rouge_adapted_values;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto& r = results[i];
    report.per_question.push_back({s.id,
                                   s.qtype,
                                   {{names[0], r.bleu.value},
                                    {names[1], r.bleu_adapted.value},
                                    {names[2], r.rouge.value},
                                    {names[3], r.rouge_adapted.value}}});
    if (r.rouge.empty_candidate) {
      report.degenerate_flags.push_back({s.id, "empty candidate"});
    } else if (r.bleu.degenerate()) {
      report.degenerate_flags.push_back({s.id, "bleu: " + std::string(to_string(r.bleu.degeneracy))});
    }
    vanilla_ledgers.push_back(r.vanilla_ledger);
    adapted_ledgers.push_back(r.adapted_ledger);
    rouge_values.push_back(r.rouge.value);
    rouge_adapted_values.push_back(r.rouge_adapted.value);
  }

  const auto corpus_vanilla = corpus_bleu(vanilla_ledgers, bleu_vanilla);
  const auto corpus_adapted = corpus_bleu(adapted_ledgers, bleu);
  report.corpus_scores[names[0]] = corpus_vanilla.score.value;
  report.corpus_scores[names[1]] = corpus_adapted.score.value;
  report.corpus_scores[names[2]] = mean_score(rouge_values);
  report.corpus_scores[names[3]] = mean_score(rouge_adapted_values);
  if (corpus_vanilla.score.degenerate()) {
    report.degenerate_flags.push_back(
        {"<corpus>", "bleu: " + std::string(to_string(corpus_vanilla.score.degeneracy))});
  }
  return report;
}

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "tsv") return ReportFormat::tsv;
  if (s == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown report format: " + std::string(s));
}

namespace {

std::string_view to_string(EntityClip c) {
  return c == EntityClip::max_per_string ? "max_per_string" : "sum_across_strings";
}

EntityClip entity_clip_from_string(std::string_view s) {
  if (s == "max_per_string") return EntityClip::max_per_string;
  if (s == "sum_across_strings") return EntityClip::sum_across_strings;
  throw std::invalid_argument("unknown entity clip mode: " + std::string(s));
}

std::string_view to_string(ReferenceSelection s) {
  return s == ReferenceSelection::independent_max ? "independent_max" : "best_reference";
}

ReferenceSelection selection_from_string(std::string_view s) {
  if (s == "independent_max") return ReferenceSelection::independent_max;
  if (s == "best_reference") return ReferenceSelection::best_reference;
  throw std::invalid_argument("unknown reference selection: " + std::string(s));
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_canonical(const json& j, std::string& out, int depth, bool exact_floats,
                     const std::vector<std::string>& exact_keys) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        const bool exact = exact_floats || std::find(exact_keys.begin(), exact_keys.end(),
                                                    it.key()) != exact_keys.end();
        write_canonical(it.value(), out, depth + 1, exact, exact_keys);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_canonical(j[i], out, depth + 1, exact_floats, exact_keys);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      if (!std::isfinite(j.get<double>())) {
        out += "null";
        return;
      }
      out += exact_floats ? shortest(j.get<double>()) : fixed6(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string tsv_field(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::string canonical_json(const json& j, const std::vector<std::string>& exact_keys) {
  std::string out;
  write_canonical(j, out, 0, false, exact_keys);
  out += "\n";
  return out;
}

json to_json(const ScoreReport& report) {
  const auto& p = report.params_used;
  json params = {
      {"bleu",
       {{"max_order", p.bleu.max_order},
        {"alpha", p.bleu.alpha},
        {"beta", p.bleu.beta},
        {"adapted", p.bleu.adapted},
        {"entity_clip", std::string(to_string(p.bleu.entity_clip))},
        {"smoothing", p.bleu.smoothing}}},
      {"rouge",
       {{"gamma", p.rouge.gamma},
        {"alpha", p.rouge.alpha},
        {"beta", p.rouge.beta},
        {"adapted", p.rouge.adapted},
        {"harmonic", p.rouge.harmonic},
        {"selection", std::string(to_string(p.rouge.selection))}}},
      {"tokenizer",
       {{"mode", std::string(to_string(p.tokenizer.mode))}, {"lowercase", p.tokenizer.lowercase}}},
  };
  json per_question = json::array();
  for (const auto& q : report.per_question) {
    per_question.push_back({{"id", q.id}, {"type", std::string(to_string(q.qtype))}, {"scores", q.scores}});
  }
  json flags = json::array();
  for (const auto& f : report.degenerate_flags) flags.push_back({{"id", f.id}, {"reason", f.reason}});
  return {{"corpus_scores", report.corpus_scores},
          {"per_question", per_question},
          {"params_used", params},
          {"degenerate_flags", flags}};
}

ScoreReport report_from_json(const json& j) {
  ScoreReport r;
  r.corpus_scores = j.at("corpus_scores").get<std::map<std::string, double>>();
  for (const auto& q : j.at("per_question")) {
    r.per_question.push_back({q.at("id").get<std::string>(),
                              question_type_from_string(q.at("type").get<std::string>()),
                              q.at("scores").get<std::map<std::string, double>>()});
  }
  const auto& p = j.at("params_used");
  const auto& b = p.at("bleu");
  r.params_used.bleu.max_order = b.at("max_order").get<int>();
  r.params_used.bleu.alpha = b.at("alpha").get<double>();
  r.params_used.bleu.beta = b.at("beta").get<double>();
  r.params_used.bleu.adapted = b.at("adapted").get<bool>();
  r.params_used.bleu.entity_clip = entity_clip_from_string(b.at("entity_clip").get<std::string>());
  r.params_used.bleu.smoothing = b.at("smoothing").get<double>();
  const auto& g = p.at("rouge");
  r.params_used.rouge.gamma = g.at("gamma").get<double>();
  r.params_used.rouge.alpha = g.at("alpha").get<double>();
  r.params_used.rouge.beta = g.at("beta").get<double>();
  r.params_used.rouge.adapted = g.at("adapted").get<bool>();
  r.params_used.rouge.harmonic = g.at("harmonic").get<bool>();
  r.params_used.rouge.selection = selection_from_string(g.at("selection").get<std::string>());
  const auto& t = p.at("tokenizer");
  r.params_used.tokenizer.mode = tokenizer_mode_from_string(t.at("mode").get<std::string>());
  r.params_used.tokenizer.lowercase = t.at("lowercase").get<bool>();
  for (const auto& f : j.at("degenerate_flags")) {
    r.degenerate_flags.push_back({f.at("id").get<std::string>(), f.at("reason").get<std::string>()});
  }
  return r;
}

std::string render(const ScoreReport& report, ReportFormat format) {
  const auto names = metric_names(report.params_used.bleu);
  switch (format) {
    case ReportFormat::json:
      return canonical_json(to_json(report));

    case ReportFormat::tsv: {
      std::string out = "id\ttype";
      for (const auto& n : names) out += "\t" + n;
      out += "\n";
      for (const auto& q : report.per_question) {
        out += tsv_field(q.id) + "\t" + std::string(to_string(q.qtype));
        for (const auto& n : names) {
          auto it = q.scores.find(n);
          out += "\t" + (it == q.scores.end() ? std::string("nan") : fixed6(it->second));
        }
        out += "\n";
      }
      return out;
    }

    case ReportFormat::text: {
      std::ostringstream os;
      char buf[128];
      os << "Corpus scores\n";
      for (const auto& n : names) {
        auto it = report.corpus_scores.find(n);
        std::snprintf(buf, sizeof buf, "  %-16s %.2f\n", n.c_str(),
                      it == report.corpus_scores.end() ? 0.0 : it->second);
        os << buf;
      }
      os << "\nQuestions: " << report.per_question.size()
         << "  degenerate: " << report.degenerate_flags.size() << "\n\n";
      std::snprintf(buf, sizeof buf, "%-24s %-12s", "id", "type");
      os << buf;
      for (const auto& n : names) {
        std::snprintf(buf, sizeof buf, " %14s", n.c_str());
        os << buf;
      }
      os << "\n";
      for (const auto& q : report.per_question) {
        std::snprintf(buf, sizeof buf, "%-24s %-12s", tsv_field(q.id).c_str(),
                      std::string(to_string(q.qtype)).c_str());
        os << buf;
        for (const auto& n : names) {
          auto it = q.scores.find(n);
          std::snprintf(buf, sizeof buf, " %14.2f", it == q.scores.end() ? 0.0 : it->second);
          os << buf;
        }
        os << "\n";
      }
      for (const auto& f : report.degenerate_flags) os << "! " << f.id << ": " << f.reason << "\n";
      return os.str();
    }
  }
  return {};
}

}  // namespace mrceval

#include "mrceval/sweep.hpp"

#include <cmath>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "mrceval/stats.hpp"

namespace mrceval {

Metric metric_from_string(std::string_view s) {
  if (s == "bleu") return Metric::bleu;
  if (s == "rouge" || s == "rougeL" || s == "rouge-l") return Metric::rouge_l;
  throw std::invalid_argument("unknown metric: " + std::string(s));
}

SweepWeight sweep_weight_from_string(std::string_view s) {
  if (s == "alpha") return SweepWeight::alpha;
  if (s == "beta") return SweepWeight::beta;
  throw std::invalid_argument("unknown sweep weight: " + std::string(s));
}

std::vector<SweepRow> weight_sweep(std::span<const QuestionSample> samples,
                                   const SweepConfig& config, const TokenizerConfig& tok) {
  if (config.grid.empty()) throw std::invalid_argument("weight_sweep: empty grid");
  const QuestionType wanted =
      config.vary == SweepWeight::alpha ? QuestionType::yes_no : QuestionType::entity;

  std::vector<const QuestionSample*> subset;
  std::vector<double> human;
  for (const auto& s : samples) {
    if (s.qtype != wanted) continue;
    if (auto h = s.mean_human_score()) {
      subset.push_back(&s);
      human.push_back(*h);
    }
  }
  if (subset.empty()) {
    throw std::invalid_argument("weight_sweep: no " + std::string(to_string(wanted)) +
                                " question carries human scores");
  }

  std::vector<SweepRow> rows;
  rows.reserve(config.grid.size());
  std::vector<double> metric(subset.size());
  for (double w : config.grid) {
    if (!(w >= 0.0)) throw std::invalid_argument("weight_sweep: negative grid weight");
    const double alpha = config.vary == SweepWeight::alpha ? w : config.fixed_other;
    const double beta = config.vary == SweepWeight::beta ? w : config.fixed_other;

    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (config.metric == Metric::bleu) {
        BleuParams p = config.bleu;
        p.adapted = true;
        p.alpha = alpha;
        p.beta = beta;
        metric[i] = sentence_bleu(*subset[i], p, tok).value;
      } else {
        RougeParams p = config.rouge;
        p.adapted = true;
        p.alpha = alpha;
        p.beta = beta;
        metric[i] = rouge_l_sample(*subset[i], p, tok).value;
      }
    }
    rows.push_back({w, pearson(metric, human, "metric score", "human score").pcc});
  }
  return rows;
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("invalid number in grid: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string_view::npos) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
      throw std::invalid_argument("grid must be start:end:step");
    }
    const double start = parse_double(spec.substr(0, first));
    const double end = parse_double(spec.substr(first + 1, second - first - 1));
    const double step = parse_double(spec.substr(second + 1));
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (end < start) throw std::invalid_argument("grid end precedes start");
    for (std::size_t k = 0;; ++k) {
      const double v = start + static_cast<double>(k) * step;
      if (v > end + 1e-9 * step) break;
      out.push_back(v);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const auto item = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_double(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string render_sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "weight,pcc\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", r.weight, r.pcc);
    out += buf;
  }
  return out;
}

}  // namespace mrceval

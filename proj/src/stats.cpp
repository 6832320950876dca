#include "mrceval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mrceval/random.hpp"

namespace mrceval {

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  return h;
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("student_t_two_sided_p: dof must be positive");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t)), 0.0, 1.0);
}

CorrelationReport pearson(std::span<const double> x, std::span<const double> y,
                          const char* x_name, const char* y_name) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 pairs");
  if (constant(x)) throw DegenerateDataError(std::string("pearson: ") + x_name + " has zero variance");
  if (constant(y)) throw DegenerateDataError(std::string("pearson: ") + y_name + " has zero variance");

  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }

  CorrelationReport out;
  out.n = n;
  out.pcc = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus = 1.0 - out.pcc * out.pcc;
  if (one_minus <= 0.0) {
    out.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), out.pcc);
    out.p_value = 0.0;
  } else {
    out.t_statistic = out.pcc * std::sqrt(dof / one_minus);
    out.p_value = student_t_two_sided_p(out.t_statistic, dof);
  }
  return out;
}

CorrelationReport pearson(std::span<const ScorePair> pairs) {
  std::vector<double> metric, human;
  metric.reserve(pairs.size());
  human.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!(p.metric_score >= 0.0 && p.metric_score <= 1.0)) {
      throw std::invalid_argument("metric score outside [0, 1]: " + std::to_string(p.metric_score));
    }
    if (!(p.human_score >= 1.0 && p.human_score <= 5.0)) {
      throw std::invalid_argument("human score outside [1, 5]: " + std::to_string(p.human_score));
    }
    metric.push_back(p.metric_score);
    human.push_back(p.human_score);
  }
  return pearson(metric, human, "metric score", "human score");
}

BootstrapReport paired_bootstrap(std::span<const double> metric_a, std::span<const double> metric_b,
                                 std::span<const double> human, std::size_t iterations,
                                 std::uint64_t seed, double threshold) {
  if (metric_a.size() != human.size() || metric_b.size() != human.size()) {
    throw std::invalid_argument("paired_bootstrap: score lists differ in length");
  }
  if (human.size() < 3) throw std::invalid_argument("paired_bootstrap: need at least 3 questions");
  if (iterations < 1) throw std::invalid_argument("paired_bootstrap: iterations must be >= 1");

  BootstrapReport out;
  out.iterations = iterations;
  out.threshold = threshold;

  const std::size_t n = human.size();
  std::vector<double> a(n), b(n), h(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    const auto idx = resample_indices(n, seed, it);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = metric_a[idx[i]];
      b[i] = metric_b[idx[i]];
      h[i] = human[idx[i]];
    }
    try {
      const double pa = pearson(a, h).pcc;
      const double pb = pearson(b, h).pcc;
      if (pa > pb) {
        ++out.wins_a;
      } else if (pb > pa) {
        ++out.wins_b;
      } else {
        ++out.ties;
      }
    } catch (const DegenerateDataError&) {
      ++out.ties;
    }
  }
  const double total = static_cast<double>(iterations);
  out.significant = static_cast<double>(out.wins_a) / total >= threshold ||
                    static_cast<double>(out.wins_b) / total >= threshold;
  return out;
}

OverallLevelResult overall_level_protocol(
    const std::map<std::string, std::vector<QuestionScore>>& per_question_scores,
    const OverallLevelOptions& options, const SubsetScorer& scorer) {
  if (per_question_scores.empty()) throw std::invalid_argument("overall_level_protocol: no systems");
  const std::size_t questions = per_question_scores.begin()->second.size();
  for (const auto& [name, scores] : per_question_scores) {
    if (scores.size() != questions) {
      throw std::invalid_argument("overall_level_protocol: system " + name +
                                  " has a different question count");
    }
  }
  if (options.group_size == 0 || options.group_size > questions) {
    throw std::invalid_argument("overall_level_protocol: group size " +
                                std::to_string(options.group_size) + " exceeds question count " +
                                std::to_string(questions));
  }
  if (options.rounds == 0) throw std::invalid_argument("overall_level_protocol: rounds must be >= 1");

  OverallLevelResult out;
  out.pairs.reserve(options.rounds * per_question_scores.size());
  for (std::size_t round = 0; round < options.rounds; ++round) {
    std::vector<std::size_t> subset;
    if (options.with_replacement) {
      CounterRng rng(options.seed, round);
      subset.resize(options.group_size);
      for (auto& i : subset) i = static_cast<std::size_t>(rng.below(questions));
    } else {
      subset = sample_without_replacement(questions, options.group_size, options.seed, round);
    }
    for (const auto& [name, scores] : per_question_scores) {
      double metric_sum = 0.0, human_sum = 0.0;
      for (std::size_t i : subset) {
        metric_sum += scores[i].metric;
        human_sum += scores[i].human;
      }
      const double k = static_cast<double>(subset.size());
      const double metric = scorer ? scorer(name, subset) : metric_sum / k;
      out.pairs.push_back({metric, human_sum / k});
    }
  }
  out.correlation = pearson(out.pairs);
  return out;
}

}  // namespace mrceval

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrceval {

/// Thrown when a statistic is undefined for the data (e.g. zero variance).
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScorePair {
  double metric_score = 0.0;  // in [0, 1]
  double human_score = 0.0;   // mean annotator score, in [1, 5]
};

struct CorrelationReport {
  double pcc = 0.0;
  std::size_t n = 0;
  double t_statistic = 0.0;
  double p_value = 1.0;  // two-sided, t distribution with n - 2 degrees of freedom
};

/// Regularized incomplete beta I_x(a, b) by continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Product-moment correlation of x and y with its t-test.
/// Throws std::invalid_argument on length mismatch or n < 3, and
/// DegenerateDataError naming the variable that has zero variance.
CorrelationReport pearson(std::span<const double> x, std::span<const double> y,
                          const char* x_name = "x", const char* y_name = "y");

/// Correlation of metric scores against human scores. Validates the
/// ScorePair ranges.
CorrelationReport pearson(std::span<const ScorePair> pairs);

struct BootstrapReport {
  std::size_t iterations = 0;
  std::size_t wins_a = 0;
  std::size_t wins_b = 0;
  std::size_t ties = 0;
  double threshold = 0.95;
  bool significant = false;
};

/// Paired bootstrap comparison of two metrics' correlation with human
/// judgments. Iteration k resamples question indices with
/// resample_indices(n, seed, k) and compares PCC(a, human) to
/// PCC(b, human); a resample on which either PCC is undefined counts as a
/// tie. Significant when either side wins at least `threshold` of the
/// iterations.
BootstrapReport paired_bootstrap(std::span<const double> metric_a, std::span<const double> metric_b,
                                 std::span<const double> human, std::size_t iterations,
                                 std::uint64_t seed, double threshold = 0.95);

struct QuestionScore {
  double metric = 0.0;
  double human = 0.0;
};

struct OverallLevelOptions {
  std::size_t group_size = 30;
  std::size_t rounds = 100;
  std::uint64_t seed = 0;
  bool with_replacement = false;
};

/// Overall score of one system on a subset of question indices.
using SubsetScorer = std::function<double(const std::string& system, std::span<const std::size_t> indices)>;

struct OverallLevelResult {
  std::vector<ScorePair> pairs;  // round-major, systems in key order
  CorrelationReport correlation;
};

/// Overall-score-level correlation. Each round draws one question subset
/// (stream = round index) shared by all systems; every system contributes
/// one (overall metric, mean human) pair per round. The overall metric is
/// the mean per-question metric, or `scorer` when given.
///
/// Throws std::invalid_argument when systems disagree on question count or
/// group_size exceeds it.
OverallLevelResult overall_level_protocol(
    const std::map<std::string, std::vector<QuestionScore>>& per_question_scores,
    const OverallLevelOptions& options, const SubsetScorer& scorer = {});

}  // namespace mrceval

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrceval/bleu.hpp"
#include "mrceval/corpus.hpp"
#include "mrceval/rouge.hpp"
#include "mrceval/tokenization.hpp"

namespace mrceval {

enum class Metric { bleu, rouge_l };
enum class SweepWeight { alpha, beta };

Metric metric_from_string(std::string_view s);
SweepWeight sweep_weight_from_string(std::string_view s);

struct SweepConfig {
  Metric metric = Metric::rouge_l;
  SweepWeight vary = SweepWeight::alpha;
  std::vector<double> grid;
  double fixed_other = 1.0;  // beta when varying alpha, alpha when varying beta
  BleuParams bleu;           // max_order and clipping mode are taken from here
  RougeParams rouge;         // gamma and selection mode are taken from here
};

struct SweepRow {
  double weight = 0.0;
  double pcc = 0.0;
};

/// Single-question-level PCC of the adapted metric against mean human
/// scores, for each weight in the grid. Only YES_NO questions take part
/// when varying alpha and only ENTITY questions when varying beta.
///
/// Throws std::invalid_argument on an empty grid, a negative weight, or
/// when no question of the relevant type carries human scores.
std::vector<SweepRow> weight_sweep(std::span<const QuestionSample> samples,
                                   const SweepConfig& config, const TokenizerConfig& tok = {});

/// Parses "start:end:step" (start + k*step for k = 0, 1, ... while the
/// value does not exceed end by more than 1e-9*step) or a comma list.
std::vector<double> parse_grid(std::string_view spec);

/// "weight,pcc" header then one row per grid point, 6 decimal places.
std::string render_sweep_csv(std::span<const SweepRow> rows);

}  // namespace mrceval

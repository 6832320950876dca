#include "mrceval/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mrceval/bleu.hpp"
#include "mrceval/corpus.hpp"
#include "mrceval/report.hpp"
#include "mrceval/rouge.hpp"
#include "mrceval/stats.hpp"
#include "mrceval/sweep.hpp"

namespace mrceval::cli {

namespace {

using nlohmann::json;

// Reported to the caller as exit code 1 after its message is printed.
struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScoringOptions {
  double alpha = 2.0;
  double beta = 1.0;
  double gamma = 1.2;
  int bleu_n = 4;
  std::string tokenizer = "whitespace";
  bool lowercase = false;
  bool adapted = true;
  bool harmonic = false;
  std::string entity_clip = "max_per_string";
  std::string selection = "independent_max";
  double smoothing = 0.0;

  TokenizerConfig tokenizer_config() const {
    return {tokenizer_mode_from_string(tokenizer), lowercase};
  }

  BleuParams bleu() const {
    BleuParams p;
    p.max_order = bleu_n;
    p.alpha = alpha;
    p.beta = beta;
    p.adapted = adapted;
    p.entity_clip = entity_clip == "sum_across_strings" ? EntityClip::sum_across_strings
                                                        : EntityClip::max_per_string;
    p.smoothing = smoothing;
    return p;
  }

  RougeParams rouge() const {
    RougeParams p;
    p.gamma = gamma;
    p.alpha = alpha;
    p.beta = beta;
    p.adapted = adapted;
    p.harmonic = harmonic;
    p.selection = selection == "best_reference" ? ReferenceSelection::best_reference
                                                : ReferenceSelection::independent_max;
    return p;
  }
};

void add_tokenizer_flags(CLI::App* app, ScoringOptions& o) {
  app->add_option("--tokenizer", o.tokenizer, "Tokenizer mode")
      ->check(CLI::IsMember({"whitespace", "char"}))
      ->capture_default_str();
  app->add_flag("--lowercase", o.lowercase, "Case-fold text before tokenizing");
}

void add_scoring_flags(CLI::App* app, ScoringOptions& o) {
  app->add_option("--alpha", o.alpha, "Yes-no bonus weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--beta", o.beta, "Entity bonus weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--gamma", o.gamma, "ROUGE-L recall weight")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--bleu-n", o.bleu_n, "Cumulative BLEU order")->check(CLI::Range(1, 16))->capture_default_str();
  add_tokenizer_flags(app, o);
  app->add_flag("--adapted,!--no-adapted", o.adapted, "Apply the yes-no and entity bonuses")->capture_default_str();
  app->add_flag("--harmonic-rouge", o.harmonic, "Combine ROUGE-L P and R by plain harmonic mean");
  app->add_option("--entity-clip", o.entity_clip, "Entity clip bound for BLEU")
      ->check(CLI::IsMember({"max_per_string", "sum_across_strings"}))
      ->capture_default_str();
  app->add_option("--rouge-selection", o.selection, "Multi-reference ROUGE-L selection")
      ->check(CLI::IsMember({"independent_max", "best_reference"}))
      ->capture_default_str();
  app->add_option("--smoothing", o.smoothing, "Epsilon for zero BLEU precisions (0 = off)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

std::vector<QuestionSample> read_samples(const std::string& path, const TokenizerConfig& tok,
                                         std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw InputFailure("cannot open corpus file: " + path);
  auto result = read_corpus(in, tok);
  if (!result.ok()) {
    for (const auto& e : result.errors) {
      err << path << ":" << e.line() << ": " << e.field() << ": " << e.detail() << "\n";
    }
    throw InputFailure(path + ": " + std::to_string(result.errors.size()) + " invalid line(s)");
  }
  if (result.samples.empty()) throw InputFailure(path + ": corpus is empty");
  return std::move(result.samples);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InputFailure("cannot write output file: " + out_path);
  f << text;
}

json correlation_json(const CorrelationReport& c) {
  return {{"pcc", c.pcc}, {"n", c.n}, {"t_statistic", c.t_statistic}, {"p_value", c.p_value}};
}

json bootstrap_json(const BootstrapReport& b) {
  return {{"iterations", b.iterations}, {"wins_a", b.wins_a},       {"wins_b", b.wins_b},
          {"ties", b.ties},             {"threshold", b.threshold}, {"significant", b.significant}};
}

const std::vector<std::string> kExactKeys = {"params_used", "p_value", "t_statistic"};

// --- score -------------------------------------------------------------------

struct ScoreCommand {
  ScoringOptions opts;
  std::string corpus;
  std::string format = "json";
  std::string out_path;
  unsigned threads = 1;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("score", "Score a corpus with vanilla and adapted BLEU and ROUGE-L");
    sub->add_option("--corpus", corpus, "JSON-lines corpus")->required();
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "tsv", "text"}))
        ->capture_default_str();
    sub->add_option("--out", out_path, "Write output here instead of stdout");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    add_scoring_flags(sub, opts);
  }

  void run(std::ostream& out, std::ostream& err) const {
    const auto tok = opts.tokenizer_config();
    const auto samples = read_samples(corpus, tok, err);
    const auto report = score_corpus(samples, opts.bleu(), opts.rouge(), tok, threads);
    emit(render(report, report_format_from_string(format)), out_path, out);
  }
};

// --- sweep -------------------------------------------------------------------

struct SweepCommand {
  ScoringOptions opts;
  std::string corpus;
  std::string metric = "rouge";
  std::string vary = "alpha";
  std::string grid = "0:5:0.5";
  std::optional<double> fixed;
  std::string out_path;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("sweep", "Correlation with human scores across a bonus-weight grid");
    sub->add_option("--corpus", corpus, "JSON-lines corpus with human scores")->required();
    sub->add_option("--metric", metric, "Metric to sweep")
        ->check(CLI::IsMember({"bleu", "rouge"}))
        ->capture_default_str();
    sub->add_option("--vary", vary, "Weight to vary")->check(CLI::IsMember({"alpha", "beta"}))->capture_default_str();
    sub->add_option("--grid", grid, "start:end:step or a comma list")->capture_default_str();
    sub->add_option("--fixed", fixed, "Value of the other weight (default: --beta or --alpha)");
    sub->add_option("--out", out_path, "Write output here instead of stdout");
    add_scoring_flags(sub, opts);
  }

  void run(std::ostream& out, std::ostream& err) const {
    const auto tok = opts.tokenizer_config();
    const auto samples = read_samples(corpus, tok, err);
    SweepConfig cfg;
    cfg.metric = metric_from_string(metric);
    cfg.vary = sweep_weight_from_string(vary);
    cfg.grid = parse_grid(grid);
    cfg.fixed_other = fixed.value_or(cfg.vary == SweepWeight::alpha ? opts.beta : opts.alpha);
    cfg.bleu = opts.bleu();
    cfg.rouge = opts.rouge();
    const auto rows = weight_sweep(samples, cfg, tok);
    emit(render_sweep_csv(rows), out_path, out);
  }
};

// --- correlate ---------------------------------------------------------------

struct ScoreFileRow {
  std::string id;
  double metric = 0.0;
  double human = 0.0;
};

std::vector<ScoreFileRow> read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFailure("cannot open score file: " + path);
  std::vector<ScoreFileRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "id,metric,human") throw InputFailure(path + ":1: expected header id,metric,human");
      continue;
    }
    std::stringstream ss(line);
    ScoreFileRow row;
    std::string metric, human;
    if (!std::getline(ss, row.id, ',') || !std::getline(ss, metric, ',') || !std::getline(ss, human)) {
      throw InputFailure(path + ":" + std::to_string(lineno) + ": expected id,metric,human");
    }
    try {
      row.metric = std::stod(metric);
      row.human = std::stod(human);
    } catch (const std::exception&) {
      throw InputFailure(path + ":" + std::to_string(lineno) + ": non-numeric score");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CorrelateCommand {
  ScoringOptions opts;
  std::vector<std::string> corpora;
  std::string scores_a;
  std::string scores_b;
  std::string metric = "rouge";
  std::string level = "question";
  std::string qtype = "all";
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
  std::size_t group_size = 30;
  std::size_t rounds = 100;
  bool with_replacement = false;
  std::string out_path;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("correlate", "Correlate metric scores with human judgments");
    sub->add_option("--corpus", corpora, "Corpus per system (repeat for the overall level)");
    sub->add_option("--scores-a", scores_a, "CSV id,metric,human for metric A");
    sub->add_option("--scores-b", scores_b, "CSV id,metric,human for metric B");
    sub->add_option("--metric", metric, "Metric for in-line scoring")
        ->check(CLI::IsMember({"bleu", "rouge"}))
        ->capture_default_str();
    sub->add_option("--level", level, "Correlation level")
        ->check(CLI::IsMember({"question", "overall"}))
        ->capture_default_str();
    sub->add_option("--qtype", qtype, "Question type subset")
        ->check(CLI::IsMember({"all", "yes_no", "entity", "description"}))
        ->capture_default_str();
    sub->add_option("--iterations", iterations, "Bootstrap iterations")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--group-size", group_size, "Questions per overall-level round")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--rounds", rounds, "Overall-level rounds")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--with-replacement", with_replacement, "Sample overall-level groups with replacement");
    sub->add_option("--out", out_path, "Write output here instead of stdout");
    add_scoring_flags(sub, opts);
  }

  bool wanted(const QuestionSample& s) const {
    if (qtype == "all") return true;
    if (qtype == "yes_no") return s.qtype == QuestionType::yes_no;
    if (qtype == "entity") return s.qtype == QuestionType::entity;
    return s.qtype == QuestionType::description;
  }

  double score(const QuestionSample& s, bool adapted, const TokenizerConfig& tok) const {
    if (metric == "bleu") {
      auto p = opts.bleu();
      p.adapted = adapted && opts.adapted;
      return sentence_bleu(s, p, tok).value;
    }
    auto p = opts.rouge();
    p.adapted = adapted && opts.adapted;
    return rouge_l_sample(s, p, tok).value;
  }

  std::string metric_name() const {
    return metric == "bleu" ? "bleu" + std::to_string(opts.bleu_n) : "rougeL";
  }

  json params_json() const {
    ScoreReport dummy;
    dummy.params_used = {opts.bleu(), opts.rouge(), opts.tokenizer_config()};
    return to_json(dummy).at("params_used");
  }

  json run_scores_files() const {
    const auto a = read_score_file(scores_a);
    const auto b = read_score_file(scores_b);
    if (a.size() != b.size()) throw InputFailure("score files differ in length");
    std::vector<double> ma, mb, human;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].id != b[i].id || a[i].human != b[i].human) {
        throw InputFailure("score files disagree at row " + std::to_string(i + 1) + " (id " + a[i].id + ")");
      }
      ma.push_back(a[i].metric);
      mb.push_back(b[i].metric);
      human.push_back(a[i].human);
    }
    return {{"level", "question"},
            {"metric_a", scores_a},
            {"metric_b", scores_b},
            {"a", correlation_json(pearson(ma, human, "metric A", "human score"))},
            {"b", correlation_json(pearson(mb, human, "metric B", "human score"))},
            {"bootstrap", bootstrap_json(paired_bootstrap(ma, mb, human, iterations, seed))}};
  }

  json run_question_level(std::ostream& err) const {
    if (corpora.size() != 1) throw InputFailure("question level takes exactly one --corpus");
    const auto tok = opts.tokenizer_config();
    const auto samples = read_samples(corpora.front(), tok, err);
    std::vector<double> adapted, vanilla, human;
    for (const auto& s : samples) {
      if (!wanted(s)) continue;
      auto h = s.mean_human_score();
      if (!h) continue;
      adapted.push_back(score(s, true, tok));
      vanilla.push_back(score(s, false, tok));
      human.push_back(*h);
    }
    if (human.size() < 3) throw InputFailure("fewer than 3 questions with human scores in the subset");
    const auto name = metric_name();
    return {{"level", "question"},
            {"qtype", qtype},
            {"metric_a", name + "_adapted"},
            {"metric_b", name},
            {"a", correlation_json(pearson(adapted, human, "adapted metric", "human score"))},
            {"b", correlation_json(pearson(vanilla, human, "vanilla metric", "human score"))},
            {"bootstrap", bootstrap_json(paired_bootstrap(adapted, vanilla, human, iterations, seed))},
            {"params_used", params_json()}};
  }

  json run_overall_level(std::ostream& err) const {
    if (corpora.size() < 2) throw InputFailure("overall level needs one --corpus per system (at least 2)");
    const auto tok = opts.tokenizer_config();

    std::map<std::string, std::vector<QuestionSample>> systems;
    std::vector<std::string> ids;
    for (const auto& path : corpora) {
      auto samples = read_samples(path, tok, err);
      std::vector<QuestionSample> kept;
      for (auto& s : samples) {
        if (!wanted(s)) continue;
        if (!s.mean_human_score()) throw InputFailure(path + ": question " + s.id + " has no human scores");
        kept.push_back(std::move(s));
      }
      std::vector<std::string> these;
      for (const auto& s : kept) these.push_back(s.id);
      if (systems.empty()) {
        ids = these;
      } else if (these != ids) {
        throw InputFailure(path + ": question ids differ from " + corpora.front());
      }
      if (!systems.emplace(path, std::move(kept)).second) throw InputFailure("duplicate corpus " + path);
    }

    OverallLevelOptions options{group_size, rounds, seed, with_replacement};
    json result = {{"level", "overall"}, {"qtype", qtype}, {"systems", corpora.size()},
                   {"group_size", group_size}, {"rounds", rounds}, {"params_used", params_json()}};

    for (const bool adapted : {true, false}) {
      std::map<std::string, std::vector<QuestionScore>> per_question;
      std::map<std::string, std::vector<PrecisionLedger>> ledgers;
      auto bleu_params = opts.bleu();
      bleu_params.adapted = adapted && opts.adapted;
      for (const auto& [name, samples] : systems) {
        auto& scores = per_question[name];
        for (const auto& s : samples) {
          scores.push_back({score(s, adapted, tok), *s.mean_human_score()});
          if (metric == "bleu") ledgers[name].push_back(sample_ledger(s, bleu_params, tok));
        }
      }
      SubsetScorer scorer;
      if (metric == "bleu") {
        scorer = [&](const std::string& system, std::span<const std::size_t> idx) {
          std::vector<PrecisionLedger> subset;
          for (auto i : idx) subset.push_back(ledgers.at(system)[i]);
          return corpus_bleu(subset, bleu_params).score.value;
        };
      }
      const auto overall = overall_level_protocol(per_question, options, scorer);
      result[adapted ? "a" : "b"] = correlation_json(overall.correlation);
      result["pairs"] = overall.pairs.size();
    }
    result["metric_a"] = metric_name() + "_adapted";
    result["metric_b"] = metric_name();
    return result;
  }

  void run(std::ostream& out, std::ostream& err) const {
    json result;
    if (!scores_a.empty() || !scores_b.empty()) {
      if (scores_a.empty() || scores_b.empty()) throw InputFailure("--scores-a and --scores-b go together");
      result = run_scores_files();
    } else if (corpora.empty()) {
      throw InputFailure("correlate needs --corpus or --scores-a/--scores-b");
    } else if (level == "overall") {
      result = run_overall_level(err);
    } else {
      result = run_question_level(err);
    }
    emit(canonical_json(result, kExactKeys), out_path, out);
  }
};

// --- validate ----------------------------------------------------------------

struct ValidateCommand {
  ScoringOptions opts;
  std::string corpus;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("validate", "Check a corpus file against the data model");
    sub->add_option("--corpus", corpus, "JSON-lines corpus")->required();
    add_tokenizer_flags(sub, opts);
  }

  int run(std::ostream& out, std::ostream& err) const {
    std::ifstream in(corpus);
    if (!in) throw InputFailure("cannot open corpus file: " + corpus);
    const auto result = read_corpus(in, opts.tokenizer_config());
    json violations = json::array();
    for (const auto& e : result.errors) {
      violations.push_back({{"line", e.line()}, {"field", e.field()}, {"message", e.detail()}});
      err << corpus << ":" << e.line() << ": " << e.field() << ": " << e.detail() << "\n";
    }
    out << canonical_json(violations);
    return result.ok() ? 0 : 1;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vanilla and adapted BLEU / ROUGE-L for reading-comprehension answers", "mrceval"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  ScoreCommand score;
  SweepCommand sweep;
  CorrelateCommand correlate;
  ValidateCommand validate;
  score.attach(app);
  sweep.attach(app);
  correlate.attach(app);
  validate.attach(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("score")) {
      score.run(out, err);
    } else if (app.got_subcommand("sweep")) {
      sweep.run(out, err);
    } else if (app.got_subcommand("correlate")) {
      correlate.run(out, err);
    } else {
      return validate.run(out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mrceval::cli

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fraudkit/csv.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/pipeline.hpp"
#include "fraudkit/preprocessing.hpp"
#include "fraudkit/resampling.hpp"
#include "fraudkit/rng.hpp"

namespace fs = std::filesystem;
using namespace fraudkit;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kUsage;
    case ErrorKind::Numerical: return kNumericalError;
    default: return kDataError;
  }
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "json";
  std::string data_path;
};

ExperimentConfig resolve_config(const CommonOptions& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (!o.data_path.empty()) c.csv_path = o.data_path;
  validate(c);
  return c;
}

/// The CSV given by the user, or the configured source.
Dataset load_input(const ExperimentConfig& c) {
  if (c.csv_path) return load_csv_inferred(*c.csv_path);
  auto syn = c.synthetic;
  syn.seed = derive_seed(c.seed, "synthesize");
  return synthesize(syn);
}

fs::path prepare_out(const CommonOptions& o) {
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

Strategy strategy_from_flag(const std::string& name) {
  const auto s = parse_strategy_name(name);
  if (!s) fail(ErrorKind::Config, "unknown strategy '" + name + "' (expected none, undersample or smote)");
  return *s;
}

ResampleOutput apply_strategy(const Dataset& ds, Strategy s, std::size_t k, std::uint64_t seed) {
  const auto derived = derive_seed(seed, "strategy:" + std::string(strategy_name(s)));
  switch (s) {
    case Strategy::Undersample: return random_undersample(ds, derived);
    case Strategy::Smote: {
      SmoteConfig sc;
      sc.k = k;
      sc.seed = derived;
      return smote(ds, sc);
    }
    case Strategy::None: break;
  }
  ResampleOutput out{ds, {}};
  for (std::size_t r = 0; r < ds.size(); ++r) out.provenance.emplace_back(OriginalRow{r});
  return out;
}

void print_summary(const Json& doc, const std::string& format) {
  if (format == "json") {
    std::cout << dump_json(doc);
    return;
  }
  // Flat key,value lines for scalar members.
  std::cout << "key,value\n";
  for (const auto& item : doc.items()) {
    if (item.value().is_structured()) continue;
    std::cout << item.key() << ',' << (item.value().is_string() ? item.value().get<std::string>() : item.value().dump())
              << '\n';
  }
}

int cmd_generate(const CommonOptions& o, std::optional<std::size_t> n, std::optional<double> rate,
                 std::optional<std::size_t> features, std::optional<double> separation) {
  auto c = resolve_config(o);
  if (n) c.synthetic.n_samples = *n;
  if (rate) c.synthetic.fraud_rate = *rate;
  if (features) c.synthetic.n_features = *features;
  if (separation) c.synthetic.class_separation = *separation;
  c.csv_path.reset();
  const Dataset ds = load_input(c);
  const auto path = prepare_out(o) / "synthetic.csv";
  save_csv(path, ds);
  const auto counts = label_distribution(ds);
  print_summary(Json{{"path", path.string()}, {"rows", ds.size()}, {"positives", counts.positive}}, o.format);
  return kOk;
}

int cmd_analyze(const CommonOptions& o) {
  const auto c = resolve_config(o);
  const Dataset ds = load_input(c);
  const auto dir = prepare_out(o);
  const auto counts = label_distribution(ds);
  write_file_atomic(dir / "label_distribution.json", dump_json(label_distribution_to_json(counts)));
  write_file_atomic(dir / "correlation_full.csv", correlation_to_csv(pearson_correlation(ds)));
  const auto balanced = random_undersample(ds, derive_seed(c.seed, "balanced-view"));
  write_file_atomic(dir / "correlation_balanced.csv", correlation_to_csv(pearson_correlation(balanced.dataset)));
  auto names = c.summary_features.empty() ? c.outliers.features : c.summary_features;
  write_file_atomic(dir / "class_summary.json",
                    dump_json(class_summary_to_json(class_feature_summary(ds, existing_columns(ds, names)))));
  Json outliers = {{"enabled", c.outliers.enabled}};
  if (c.outliers.enabled) {
    const auto report =
        iqr_filter(ds, existing_columns(ds, c.outliers.features), c.outliers.multiplier, 1).second;
    const Json detail = outlier_report_to_json(report, ds.feature_names());
    for (const auto& item : detail.items()) {
      outliers[item.key()] = item.value();
    }
  }
  write_file_atomic(dir / "outlier_report.json", dump_json(outliers));
  print_summary(Json{{"rows", ds.size()}, {"negative", counts.negative}, {"positive", counts.positive},
                 {"balanced_rows", balanced.dataset.size()}},
                o.format);
  return kOk;
}

int cmd_resample(const CommonOptions& o, const std::string& strategy, std::size_t k) {
  const auto c = resolve_config(o);
  const Dataset ds = load_input(c);
  const auto s = strategy_from_flag(strategy);
  const auto out = apply_strategy(ds, s, k, c.seed);
  const auto dir = prepare_out(o);
  save_csv(dir / "resampled.csv", out.dataset);
  write_file_atomic(dir / "provenance.json", dump_json(provenance_to_json(out.provenance)));
  const auto counts = label_distribution(out.dataset);
  print_summary(Json{{"strategy", strategy}, {"rows", out.dataset.size()}, {"negative", counts.negative},
                 {"positive", counts.positive}},
                o.format);
  return kOk;
}

int cmd_embed(const CommonOptions& o) {
  const auto c = resolve_config(o);
  Dataset ds = load_input(c);
  ds = apply_standardizer(ds, fit_standardizer(ds, existing_columns(ds, c.scale_columns)));
  auto view = random_undersample(ds, derive_seed(c.seed, "balanced-view")).dataset;
  auto cfg = c.tsne;
  cfg.seed = derive_seed(c.seed, "tsne");
  if (view.size() > cfg.max_points) {
    std::vector<std::size_t> head(cfg.max_points);
    for (std::size_t i = 0; i < head.size(); ++i) head[i] = i;
    view = view.select_rows(head);
  }
  const auto emb = tsne_embed(view.features(), cfg);
  write_file_atomic(prepare_out(o) / "tsne_embedding.csv", embedding_to_csv(emb, view.labels()));
  print_summary(Json{{"points", view.size()}, {"perplexity", emb.perplexity}, {"kl_initial", emb.kl_history.front()},
                 {"kl_final", emb.kl_history.back()}},
                o.format);
  return kOk;
}

int cmd_train(const CommonOptions& o, const std::string& model, const std::string& strategy, std::size_t k) {
  const auto c = resolve_config(o);
  const auto kind = parse_model_name(model);
  if (!kind) fail(ErrorKind::Config, "unknown model '" + model + "' (expected nn, lr, svm, dt or knn)");
  const auto s = strategy_from_flag(strategy);
  const Dataset raw = load_input(c);
  const auto scaler = fit_standardizer(raw, existing_columns(raw, c.scale_columns));
  Dataset train = apply_standardizer(raw, scaler);
  if (c.outliers.enabled) {
    train = iqr_filter(train, existing_columns(train, c.outliers.features), c.outliers.multiplier, 1).first;
  }
  const auto resampled = apply_strategy(train, s, k, c.seed);
  const auto seed = derive_seed(c.seed, "model:" + model + ":" + strategy);
  ModelArtifact artifact;
  artifact.model = fit_model(*kind, resampled.dataset, c.hyper, seed);
  artifact.hyperparameters = hyperparameters_json(*kind, c.hyper, seed);
  artifact.hyperparameters["strategy"] = strategy;
  artifact.scaler = scaler;
  artifact.feature_names = raw.feature_names();
  artifact.training_seed = seed;
  const auto path = prepare_out(o) / ("model_" + model + "_" + strategy + ".json");
  save_model(artifact, path);
  print_summary(Json{{"path", path.string()}, {"model", model}, {"strategy", strategy},
                 {"train_rows", resampled.dataset.size()}},
                o.format);
  return kOk;
}

Dataset load_for_artifact(const ModelArtifact& artifact, const std::string& data_path) {
  if (data_path.empty()) fail(ErrorKind::Config, "--data is required");
  return load_csv(data_path, CsvSchema{artifact.feature_names, "Class"});
}

std::string artifact_strategy(const ModelArtifact& a) {
  if (a.hyperparameters.contains("strategy") && a.hyperparameters["strategy"].is_string()) {
    return a.hyperparameters["strategy"].get<std::string>();
  }
  return "none";
}

int cmd_evaluate(const CommonOptions& o, const std::string& artifact_path, double threshold) {
  const auto artifact = load_model(artifact_path);
  const Dataset ds = load_for_artifact(artifact, o.data_path);
  const auto metrics = evaluate(ds.labels(), threshold_labels(artifact.predict_proba(ds.features()), threshold));
  const auto dir = prepare_out(o);
  const std::string model(model_name(kind_of(artifact.model)));
  write_file_atomic(dir / ("confusion_" + model + "_" + artifact_strategy(artifact) + ".json"),
                    dump_json(confusion_to_json(metrics.confusion)));
  const Json doc = metric_report_to_json(metrics);
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "precision,recall,f1,accuracy,tp,fp,tn,fn\n"
        << format_double(metrics.precision) << ',' << format_double(metrics.recall) << ','
        << format_double(metrics.f1) << ',' << format_double(metrics.accuracy) << ',' << metrics.confusion.tp << ','
        << metrics.confusion.fp << ',' << metrics.confusion.tn << ',' << metrics.confusion.fn << '\n';
    write_file_atomic(dir / "metrics.csv", csv.str());
    std::cout << csv.str();
  } else {
    write_file_atomic(dir / "metrics.json", dump_json(doc));
    std::cout << dump_json(doc);
  }
  return kOk;
}

int cmd_score(const CommonOptions& o, const std::string& artifact_path, double threshold) {
  const auto artifact = load_model(artifact_path);
  const Dataset ds = load_for_artifact(artifact, o.data_path);
  const auto probs = artifact.predict_proba(ds.features());
  const auto labels = threshold_labels(probs, threshold);
  const auto dir = prepare_out(o);
  if (o.format == "json") {
    Json rows = Json::array();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      rows.push_back({{"row", i}, {"probability", probs[i]}, {"label", labels[i]}});
    }
    write_file_atomic(dir / "scores.json", dump_json(rows));
  } else {
    std::string csv = "row,probability,label\n";
    for (std::size_t i = 0; i < probs.size(); ++i) {
      csv += std::to_string(i) + ',' + format_double(probs[i]) + ',' + std::to_string(labels[i]) + '\n';
    }
    write_file_atomic(dir / "scores.csv", csv);
  }
  std::size_t flagged = 0;
  for (auto l : labels) flagged += l;
  print_summary(Json{{"rows", probs.size()}, {"flagged", flagged}}, o.format == "json" ? "json" : "csv");
  return kOk;
}

int cmd_experiment(const CommonOptions& o, bool balanced_test) {
  auto c = resolve_config(o);
  if (balanced_test) c.evaluate_balanced_test = true;
  c.output_dir = prepare_out(o);
  const auto result = run_pipeline(c);
  if (o.format == "json") {
    std::cout << dump_json(report_to_json(result.report, c.record_timings));
  } else {
    std::cout << report_to_text(result.report);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imbalanced fraud-detection experiments: data, resampling, models, metrics."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  CommonOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "Top-level seed; every stage derives its own from it");
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* generate = app.add_subcommand("generate", "Write a synthetic imbalanced dataset as CSV");
  add_common(generate);
  std::optional<std::size_t> gen_n, gen_features;
  std::optional<double> gen_rate, gen_sep;
  generate->add_option("--n", gen_n, "Number of rows");
  generate->add_option("--fraud-rate", gen_rate, "Positive fraction");
  generate->add_option("--features", gen_features, "Feature count");
  generate->add_option("--separation", gen_sep, "Centroid distance in within-class std units");

  auto* analyze = app.add_subcommand("analyze", "Label distribution, correlations, summaries, outlier fences");
  add_common(analyze);
  analyze->add_option("--data", opts.data_path, "Input CSV (defaults to the configured source)");

  std::string strategy = "smote";
  std::size_t smote_k = 5;
  auto* resample = app.add_subcommand("resample", "Apply one resampling strategy; write CSV + provenance");
  add_common(resample);
  resample->add_option("--data", opts.data_path, "Input CSV");
  resample->add_option("--strategy", strategy, "none | undersample | smote");
  resample->add_option("--k", smote_k, "SMOTE neighbour count");

  auto* embed = app.add_subcommand("embed", "t-SNE of a balanced subsample");
  add_common(embed);
  embed->add_option("--data", opts.data_path, "Input CSV");

  std::string model = "nn";
  auto* train = app.add_subcommand("train", "Fit one model and save it as a JSON artifact");
  add_common(train);
  train->add_option("--data", opts.data_path, "Training CSV");
  train->add_option("--model", model, "nn | lr | svm | dt | knn");
  train->add_option("--strategy", strategy, "none | undersample | smote");
  train->add_option("--k", smote_k, "SMOTE neighbour count");

  std::string artifact;
  double threshold = 0.5;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Metrics of a saved model on a labelled CSV");
  add_common(evaluate_cmd);
  evaluate_cmd->add_option("--model", artifact, "Model artifact")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--data", opts.data_path, "Labelled CSV")->required();
  evaluate_cmd->add_option("--threshold", threshold, "Decision threshold");

  bool balanced_test = false;
  auto* experiment = app.add_subcommand("experiment", "Full model x strategy comparison");
  add_common(experiment);
  experiment->add_option("--data", opts.data_path, "Input CSV (defaults to the configured source)");
  experiment->add_flag("--balanced-test", balanced_test, "Also evaluate on a balanced test subsample");

  auto* score = app.add_subcommand("score", "Per-row probabilities from a saved model");
  add_common(score);
  score->add_option("--model", artifact, "Model artifact")->required()->check(CLI::ExistingFile);
  score->add_option("--data", opts.data_path, "CSV with the model's feature columns")->required();
  score->add_option("--threshold", threshold, "Decision threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return cmd_generate(opts, gen_n, gen_rate, gen_features, gen_sep);
    if (*analyze) return cmd_analyze(opts);
    if (*resample) return cmd_resample(opts, strategy, smote_k);
    if (*embed) return cmd_embed(opts);
    if (*train) return cmd_train(opts, model, strategy, smote_k);
    if (*evaluate_cmd) return cmd_evaluate(opts, artifact, threshold);
    if (*experiment) return cmd_experiment(opts, balanced_test);
    if (*score) return cmd_score(opts, artifact, threshold);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

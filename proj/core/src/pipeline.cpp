#include "fraudkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "fraudkit/csv.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/preprocessing.hpp"
#include "fraudkit/resampling.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

std::string_view strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::None: return "none";
    case Strategy::Undersample: return "undersample";
    case Strategy::Smote: return "smote";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy_name(std::string_view name) noexcept {
  for (auto s : {Strategy::None, Strategy::Undersample, Strategy::Smote}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

// Configuration ----------------------------------------------------------------

namespace {

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
  if (!obj.is_object()) fail(ErrorKind::Config, std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      fail(ErrorKind::Config, "unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->template get<T>();
}

Json strategy_to_json(const StrategySpec& s) {
  if (s.kind == Strategy::Smote) return {{"kind", "smote"}, {"k", s.smote_k}};
  return std::string(strategy_name(s.kind));
}

StrategySpec strategy_from_json(const Json& doc) {
  StrategySpec spec;
  std::string name;
  if (doc.is_string()) {
    name = doc.get<std::string>();
  } else {
    reject_unknown_keys(doc, {"kind", "k"}, "strategy");
    name = doc.at("kind").get<std::string>();
    read(doc, "k", spec.smote_k);
  }
  auto kind = parse_strategy_name(name);
  if (!kind) fail(ErrorKind::Config, "unknown resampling strategy '" + name + "'");
  spec.kind = *kind;
  return spec;
}

}  // namespace

Json config_to_json(const ExperimentConfig& c) {
  Json data;
  if (c.csv_path) {
    data = {{"csv", c.csv_path->string()}};
  } else {
    data = {{"synthetic",
             {{"n_samples", c.synthetic.n_samples},
              {"fraud_rate", c.synthetic.fraud_rate},
              {"n_features", c.synthetic.n_features},
              {"class_separation", c.synthetic.class_separation}}}};
  }
  Json strategies = Json::array();
  for (const auto& s : c.strategies) strategies.push_back(strategy_to_json(s));
  Json models = Json::array();
  for (auto m : c.models) models.push_back(std::string(model_name(m)));
  const auto& h = c.hyper;
  Json hyper = {
      {"nn",
       {{"hidden", h.nn_hidden},
        {"learning_rate", h.nn.learning_rate},
        {"epochs", h.nn.epochs},
        {"batch_size", h.nn.batch_size}}},
      {"lr", {{"learning_rate", h.lr.learning_rate}, {"epochs", h.lr.epochs}, {"l2", h.lr.l2}}},
      {"svm", {{"lambda", h.svm.lambda}, {"iterations", h.svm.iterations}}},
      {"dt",
       {{"max_depth", h.dt.max_depth == kUnlimitedDepth ? Json(nullptr) : Json(h.dt.max_depth)},
        {"min_samples_split", h.dt.min_samples_split}}},
      {"knn", {{"k", h.knn_k}}},
  };
  Json embedding = {{"enabled", c.embed},
                    {"perplexity", c.tsne.perplexity},
                    {"iterations", c.tsne.iterations},
                    {"learning_rate", c.tsne.learning_rate},
                    {"early_exaggeration", c.tsne.early_exaggeration_factor},
                    {"early_exaggeration_iters", c.tsne.early_exaggeration_iters},
                    {"momentum_initial", c.tsne.momentum_initial},
                    {"momentum_final", c.tsne.momentum_final},
                    {"momentum_switch_iter", c.tsne.momentum_switch_iter},
                    {"max_points", c.tsne.max_points}};
  return {{"data", data},
          {"test_fraction", c.test_fraction},
          {"scale_columns", c.scale_columns},
          {"outliers",
           {{"enabled", c.outliers.enabled},
            {"features", c.outliers.features},
            {"multiplier", c.outliers.multiplier}}},
          {"strategies", strategies},
          {"models", models},
          {"hyperparameters", hyper},
          {"embedding", embedding},
          {"summary_features", c.summary_features},
          {"evaluate_balanced_test", c.evaluate_balanced_test},
          {"threshold", c.threshold},
          {"seed", c.seed},
          {"output_dir", c.output_dir.string()},
          {"record_timings", c.record_timings}};
}

ExperimentConfig config_from_json(const Json& doc) {
  ExperimentConfig c;
  try {
    reject_unknown_keys(doc,
                        {"data", "test_fraction", "scale_columns", "outliers", "strategies", "models",
                         "hyperparameters", "embedding", "summary_features", "evaluate_balanced_test",
                         "threshold", "seed", "output_dir", "record_timings"},
                        "experiment config");
    if (auto it = doc.find("data"); it != doc.end()) {
      reject_unknown_keys(*it, {"csv", "synthetic"}, "data");
      if (it->contains("csv") && it->contains("synthetic")) {
        fail(ErrorKind::Config, "data must name either 'csv' or 'synthetic', not both");
      }
      if (auto csv = it->find("csv"); csv != it->end()) c.csv_path = csv->get<std::string>();
      if (auto syn = it->find("synthetic"); syn != it->end()) {
        reject_unknown_keys(*syn, {"n_samples", "fraud_rate", "n_features", "class_separation"}, "data.synthetic");
        read(*syn, "n_samples", c.synthetic.n_samples);
        read(*syn, "fraud_rate", c.synthetic.fraud_rate);
        read(*syn, "n_features", c.synthetic.n_features);
        read(*syn, "class_separation", c.synthetic.class_separation);
      }
    }
    read(doc, "test_fraction", c.test_fraction);
    read(doc, "scale_columns", c.scale_columns);
    if (auto it = doc.find("outliers"); it != doc.end()) {
      reject_unknown_keys(*it, {"enabled", "features", "multiplier"}, "outliers");
      read(*it, "enabled", c.outliers.enabled);
      read(*it, "features", c.outliers.features);
      read(*it, "multiplier", c.outliers.multiplier);
    }
    if (auto it = doc.find("strategies"); it != doc.end()) {
      c.strategies.clear();
      for (const auto& s : *it) c.strategies.push_back(strategy_from_json(s));
    }
    if (auto it = doc.find("models"); it != doc.end()) {
      c.models.clear();
      for (const auto& m : *it) {
        const auto name = m.get<std::string>();
        auto kind = parse_model_name(name);
        if (!kind) fail(ErrorKind::Config, "unknown model '" + name + "' (expected nn, lr, svm, dt or knn)");
        c.models.push_back(*kind);
      }
    }
    if (auto it = doc.find("hyperparameters"); it != doc.end()) {
      reject_unknown_keys(*it, {"nn", "lr", "svm", "dt", "knn"}, "hyperparameters");
      auto& h = c.hyper;
      if (auto nn = it->find("nn"); nn != it->end()) {
        reject_unknown_keys(*nn, {"hidden", "learning_rate", "epochs", "batch_size"}, "hyperparameters.nn");
        read(*nn, "hidden", h.nn_hidden);
        read(*nn, "learning_rate", h.nn.learning_rate);
        read(*nn, "epochs", h.nn.epochs);
        read(*nn, "batch_size", h.nn.batch_size);
      }
      if (auto lr = it->find("lr"); lr != it->end()) {
        reject_unknown_keys(*lr, {"learning_rate", "epochs", "l2"}, "hyperparameters.lr");
        read(*lr, "learning_rate", h.lr.learning_rate);
        read(*lr, "epochs", h.lr.epochs);
        read(*lr, "l2", h.lr.l2);
      }
      if (auto svm = it->find("svm"); svm != it->end()) {
        reject_unknown_keys(*svm, {"lambda", "iterations"}, "hyperparameters.svm");
        read(*svm, "lambda", h.svm.lambda);
        read(*svm, "iterations", h.svm.iterations);
      }
      if (auto dt = it->find("dt"); dt != it->end()) {
        reject_unknown_keys(*dt, {"max_depth", "min_samples_split"}, "hyperparameters.dt");
        if (auto md = dt->find("max_depth"); md != dt->end()) {
          h.dt.max_depth = md->is_null() ? kUnlimitedDepth : md->get<std::size_t>();
        }
        read(*dt, "min_samples_split", h.dt.min_samples_split);
      }
      if (auto knn = it->find("knn"); knn != it->end()) {
        reject_unknown_keys(*knn, {"k"}, "hyperparameters.knn");
        read(*knn, "k", h.knn_k);
      }
    }
    if (auto it = doc.find("embedding"); it != doc.end()) {
      reject_unknown_keys(*it,
                          {"enabled", "perplexity", "iterations", "learning_rate", "early_exaggeration",
                           "early_exaggeration_iters", "momentum_initial", "momentum_final",
                           "momentum_switch_iter", "max_points"},
                          "embedding");
      read(*it, "enabled", c.embed);
      read(*it, "perplexity", c.tsne.perplexity);
      read(*it, "iterations", c.tsne.iterations);
      read(*it, "learning_rate", c.tsne.learning_rate);
      read(*it, "early_exaggeration", c.tsne.early_exaggeration_factor);
      read(*it, "early_exaggeration_iters", c.tsne.early_exaggeration_iters);
      read(*it, "momentum_initial", c.tsne.momentum_initial);
      read(*it, "momentum_final", c.tsne.momentum_final);
      read(*it, "momentum_switch_iter", c.tsne.momentum_switch_iter);
      read(*it, "max_points", c.tsne.max_points);
    }
    read(doc, "summary_features", c.summary_features);
    read(doc, "evaluate_balanced_test", c.evaluate_balanced_test);
    read(doc, "threshold", c.threshold);
    read(doc, "seed", c.seed);
    if (auto it = doc.find("output_dir"); it != doc.end()) c.output_dir = it->get<std::string>();
    read(doc, "record_timings", c.record_timings);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, std::string("invalid experiment config: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, "malformed JSON in '" + path.string() + "': " + e.what());
  }
  return config_from_json(doc);
}

void validate(const ExperimentConfig& c) {
  if (c.models.empty()) fail(ErrorKind::Config, "the experiment needs at least one model");
  if (c.strategies.empty()) fail(ErrorKind::Config, "the experiment needs at least one resampling strategy");
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) fail(ErrorKind::Config, "test_fraction must lie in (0,1)");
  if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) fail(ErrorKind::Config, "threshold must lie in [0,1]");
  if (c.outliers.enabled && !(c.outliers.multiplier > 0.0)) fail(ErrorKind::Config, "outlier multiplier must be > 0");
  std::set<std::string> seen_models;
  for (auto m : c.models) {
    if (!seen_models.insert(std::string(model_name(m))).second) {
      fail(ErrorKind::Config, "model '" + std::string(model_name(m)) + "' listed twice");
    }
  }
  std::set<std::string> seen_strategies;
  for (const auto& s : c.strategies) {
    if (!seen_strategies.insert(std::string(strategy_name(s.kind))).second) {
      fail(ErrorKind::Config, "strategy '" + std::string(strategy_name(s.kind)) + "' listed twice");
    }
  }
}

std::string config_hash(const ExperimentConfig& config) {
  auto doc = config_to_json(config);
  doc.erase("output_dir");  // where results go does not change them
  const std::string text = doc.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// Models -----------------------------------------------------------------------

Model fit_model(ModelKind kind, const Dataset& train, const ModelSettings& settings, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::Mlp: {
      auto cfg = settings.nn;
      cfg.seed = seed;
      return MlpModel{train_mlp(train, settings.nn_hidden, cfg).params};
    }
    case ModelKind::LogisticRegression: {
      auto cfg = settings.lr;
      cfg.seed = seed;
      return fit_logistic_regression(train, cfg);
    }
    case ModelKind::LinearSvm: {
      auto cfg = settings.svm;
      cfg.seed = seed;
      return fit_linear_svm(train, cfg);
    }
    case ModelKind::DecisionTree: {
      auto cfg = settings.dt;
      cfg.seed = seed;
      return fit_decision_tree(train, cfg);
    }
    case ModelKind::Knn:
      return fit_knn(train, settings.knn_k);
  }
  fail(ErrorKind::Config, "unknown model kind");
}

Json hyperparameters_json(ModelKind kind, const ModelSettings& s, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::Mlp:
      return {{"hidden", s.nn_hidden},
              {"learning_rate", s.nn.learning_rate},
              {"epochs", s.nn.epochs},
              {"batch_size", s.nn.batch_size},
              {"seed", seed}};
    case ModelKind::LogisticRegression:
      return {{"learning_rate", s.lr.learning_rate}, {"epochs", s.lr.epochs}, {"l2", s.lr.l2}, {"seed", seed}};
    case ModelKind::LinearSvm:
      return {{"lambda", s.svm.lambda}, {"iterations", s.svm.iterations}, {"seed", seed}};
    case ModelKind::DecisionTree:
      return {{"max_depth", s.dt.max_depth == kUnlimitedDepth ? Json(nullptr) : Json(s.dt.max_depth)},
              {"min_samples_split", s.dt.min_samples_split},
              {"seed", seed}};
    case ModelKind::Knn:
      return {{"k", s.knn_k}};
  }
  return Json::object();
}

// Pipeline ---------------------------------------------------------------------

namespace {

// Runs one stage, prefixing any library error with the stage name.
template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + name + "': " + e.what());
  }
}

std::vector<std::size_t> source_rows(const std::vector<RowProvenance>& provenance,
                                     const std::vector<std::size_t>& origin) {
  std::set<std::size_t> rows;
  for (const auto& p : provenance) {
    if (const auto* o = std::get_if<OriginalRow>(&p)) {
      rows.insert(origin[o->index]);
    } else {
      const auto& s = std::get<SyntheticRow>(p);
      rows.insert(origin[s.base]);
      rows.insert(origin[s.neighbor]);
    }
  }
  return {rows.begin(), rows.end()};
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& config) {
  validate(config);
  PipelineResult result;
  auto& stages = result.stages;
  auto& report = result.report;
  report.config_hash = config_hash(config);
  report.seed = config.seed;
  report.threshold = config.threshold;

  const Dataset data = stage("load", [&] {
    if (config.csv_path) return load_csv(*config.csv_path);
    auto syn = config.synthetic;
    syn.seed = derive_seed(config.seed, "synthesize");
    return synthesize(syn);
  });
  stages.label_counts = label_distribution(data);
  stages.feature_names = data.feature_names();

  const auto split = stage("split", [&] {
    return stratified_split_indices(data.labels(), config.test_fraction, derive_seed(config.seed, "split"));
  });
  stages.test_rows = split.test;

  auto folds = stage("scale", [&] {
    const Dataset raw_train = data.select_rows(split.train);
    const Dataset raw_test = data.select_rows(split.test);
    const auto scaler = fit_standardizer(raw_train, existing_columns(raw_train, config.scale_columns));
    return std::pair{apply_standardizer(raw_train, scaler), apply_standardizer(raw_test, scaler)};
  });
  Dataset train = std::move(folds.first);
  const Dataset test = std::move(folds.second);
  report.train_size = train.size();
  report.test_size = test.size();

  std::vector<std::string> summary_names = config.summary_features;
  if (summary_names.empty()) summary_names = config.outliers.features;
  stage("analyze", [&] {
    stages.correlation_full = pearson_correlation(train);
    stages.class_summary = class_feature_summary(train, existing_columns(train, summary_names));
  });

  // Row numbering of `train` mapped back to the original dataset.
  std::vector<std::size_t> origin = split.train;
  if (config.outliers.enabled) {
    stage("outliers", [&] {
      auto features = existing_columns(train, config.outliers.features);
      auto [filtered, outlier_report] = iqr_filter(train, features, config.outliers.multiplier, 1);
      std::vector<std::size_t> kept;
      kept.reserve(filtered.size());
      std::size_t next_removed = 0;
      for (std::size_t r = 0; r < train.size(); ++r) {
        if (next_removed < outlier_report.removed_row_indices.size() &&
            outlier_report.removed_row_indices[next_removed] == r) {
          ++next_removed;
          continue;
        }
        kept.push_back(origin[r]);
      }
      origin = std::move(kept);
      train = std::move(filtered);
      stages.outlier_report = std::move(outlier_report);
    });
  }

  stage("balanced view", [&] {
    const auto balanced = random_undersample(train, derive_seed(config.seed, "balanced-view"));
    stages.balanced_subsample_size = balanced.dataset.size();
    stages.correlation_balanced = pearson_correlation(balanced.dataset);
    if (config.embed) {
      auto tsne_cfg = config.tsne;
      tsne_cfg.seed = derive_seed(config.seed, "tsne");
      Dataset view = balanced.dataset;
      if (view.size() > tsne_cfg.max_points) {
        std::vector<std::size_t> head(tsne_cfg.max_points);
        for (std::size_t i = 0; i < head.size(); ++i) head[i] = i;
        view = view.select_rows(head);
      }
      stages.embedding = tsne_embed(view.features(), tsne_cfg);
      stages.embedding_labels = view.labels();
    }
  });

  std::optional<Dataset> balanced_test;
  if (config.evaluate_balanced_test) {
    balanced_test = stage("balanced test", [&] {
      return random_undersample(test, derive_seed(config.seed, "balanced-test")).dataset;
    });
  }

  for (const auto& strategy : config.strategies) {
    const std::string sname(strategy_name(strategy.kind));
    const auto resampled = stage(("resample:" + sname).c_str(), [&] {
      const auto seed = derive_seed(config.seed, "strategy:" + sname);
      switch (strategy.kind) {
        case Strategy::Undersample: return random_undersample(train, seed);
        case Strategy::Smote: {
          SmoteConfig sc;
          sc.k = strategy.smote_k;
          sc.seed = seed;
          return smote(train, sc);
        }
        case Strategy::None: break;
      }
      ResampleOutput out{train, {}};
      for (std::size_t r = 0; r < train.size(); ++r) out.provenance.emplace_back(OriginalRow{r});
      return out;
    });
    stages.strategy_names.push_back(sname);
    stages.strategy_source_rows.push_back(source_rows(resampled.provenance, origin));

    for (auto kind : config.models) {
      const std::string mname(model_name(kind));
      const auto started = std::chrono::steady_clock::now();
      const Model model = stage(("fit:" + mname + "+" + sname).c_str(), [&] {
        return fit_model(kind, resampled.dataset, config.hyper, derive_seed(config.seed, "model:" + mname + ":" + sname));
      });
      auto evaluate_on = [&](const Dataset& fold, const char* label) {
        ExperimentRow row;
        row.model = mname;
        row.strategy = sname;
        row.evaluation = label;
        row.train_rows = resampled.dataset.size();
        row.metrics = stage(("evaluate:" + mname + "+" + sname).c_str(), [&] {
          return evaluate(fold.labels(), predict(model, fold.features(), config.threshold));
        });
        return row;
      };
      auto row = evaluate_on(test, "test");
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
      report.rows.push_back(std::move(row));
      if (balanced_test) {
        auto brow = evaluate_on(*balanced_test, "balanced_test");
        brow.wall_time_ms = report.rows.back().wall_time_ms;
        report.rows.push_back(std::move(brow));
      }
    }
  }

  if (!config.output_dir.empty()) {
    stage("emit", [&] { emit_plot_data(result, config, config.output_dir); });
  }
  return result;
}

Json report_to_json(const ExperimentReport& report, bool include_timings) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row = {{"model", r.model}, {"strategy", r.strategy}, {"evaluation", r.evaluation},
                {"train_rows", r.train_rows}};
    const Json metrics = metric_report_to_json(r.metrics);
    for (const auto& item : metrics.items()) row[item.key()] = item.value();
    if (include_timings) row["wall_time_ms"] = r.wall_time_ms;
    rows.push_back(std::move(row));
  }
  return {{"config_hash", report.config_hash},
          {"seed", report.seed},
          {"threshold", report.threshold},
          {"train_size", report.train_size},
          {"test_size", report.test_size},
          {"rows", rows}};
}

std::string report_to_text(const ExperimentReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-12s %-14s %9s %9s %9s %9s %7s %7s %7s %7s\n", "Model", "Strategy",
                "Evaluation", "Precision", "Recall", "F1", "Accuracy", "TP", "FP", "TN", "FN");
  out += line;
  for (const auto& r : report.rows) {
    const auto& m = r.metrics;
    std::snprintf(line, sizeof line, "%-6s %-12s %-14s %9.3f %9.3f %9.3f %9.3f %7zu %7zu %7zu %7zu\n",
                  r.model.c_str(), r.strategy.c_str(), r.evaluation.c_str(), m.precision, m.recall, m.f1,
                  m.accuracy, m.confusion.tp, m.confusion.fp, m.confusion.tn, m.confusion.fn);
    out += line;
  }
  return out;
}

void emit_plot_data(const PipelineResult& result, const ExperimentConfig& config,
                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());

  const auto& s = result.stages;
  write_file_atomic(dir / "label_distribution.json", dump_json(label_distribution_to_json(s.label_counts)));
  write_file_atomic(dir / "correlation_full.csv", correlation_to_csv(s.correlation_full));
  write_file_atomic(dir / "correlation_balanced.csv", correlation_to_csv(s.correlation_balanced));
  write_file_atomic(dir / "class_summary.json", dump_json(class_summary_to_json(s.class_summary)));

  Json outliers = {{"enabled", s.outlier_report.has_value()}};
  if (s.outlier_report) {
    const Json detail = outlier_report_to_json(*s.outlier_report, s.feature_names);
    for (const auto& item : detail.items()) {
      outliers[item.key()] = item.value();
    }
  }
  write_file_atomic(dir / "outlier_report.json", dump_json(outliers));

  if (s.embedding) write_file_atomic(dir / "tsne_embedding.csv", embedding_to_csv(*s.embedding, s.embedding_labels));

  for (const auto& row : result.report.rows) {
    std::string name = "confusion_" + row.model + "_" + row.strategy;
    if (row.evaluation != "test") name += "_" + row.evaluation;
    Json doc = confusion_to_json(row.metrics.confusion);
    write_file_atomic(dir / (name + ".json"), dump_json(doc));
  }
  write_file_atomic(dir / "report.json", dump_json(report_to_json(result.report, config.record_timings)));
  write_file_atomic(dir / "report.txt", report_to_text(result.report));
}

}  // namespace fraudkit

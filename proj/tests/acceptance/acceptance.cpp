// Acceptance harness: one PASS/FAIL line per criterion.
//
// Usage: fraudkit_acceptance [--cli <path to fraudkit>] [--known-fail N]...
// Exit status is 0 when the set of failing criteria equals the set passed via
// --known-fail (each of which must be documented), non-zero otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "fraudkit/csv.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/pipeline.hpp"
#include "fraudkit/preprocessing.hpp"
#include "fraudkit/resampling.hpp"

using namespace fraudkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fraudkit_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Labels random_labels(std::size_t n, Rng& rng) {
  Labels y(n);
  for (auto& l : y) l = static_cast<Label>(rng.index(2));
  return y;
}

// 1 ------------------------------------------------------------------------
Outcome metric_oracle() {
  Rng rng(101);
  double worst = 0.0;
  bool counts_exact = true;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto t = random_labels(200, rng);
    const auto p = random_labels(200, rng);
    const auto r = evaluate(t, p);
    const auto c = oracle::count(t, p);
    counts_exact &= r.confusion.tp == static_cast<std::size_t>(c.tp) &&
                    r.confusion.fp == static_cast<std::size_t>(c.fp) &&
                    r.confusion.tn == static_cast<std::size_t>(c.tn) && r.confusion.fn == static_cast<std::size_t>(c.fn);
    const double pr = oracle::safe_div(c.tp, c.tp + c.fp);
    const double rc = oracle::safe_div(c.tp, c.tp + c.fn);
    worst = std::max({worst, std::abs(r.precision - pr), std::abs(r.recall - rc),
                      std::abs(r.f1 - oracle::safe_div(2 * pr * rc, pr + rc)),
                      std::abs(r.accuracy - static_cast<double>(c.tp + c.tn) / 200.0)});
  }
  return {counts_exact && worst <= 1e-12,
          std::string("counts ") + (counts_exact ? "exact" : "MISMATCH") + ", max metric deviation " + fmt("%.3g", worst)};
}

// 2 ------------------------------------------------------------------------
Outcome f1_table_row() {
  const double f = f1(0.998, 0.999);
  char printed[16];
  std::snprintf(printed, sizeof printed, "%.3f", f);
  const bool value_ok = std::abs(f - 0.998500) <= 1e-6;
  const bool print_ok = std::string(printed) == "0.999";
  return {value_ok && print_ok, "f1 = " + fmt("%.10f", f) + " (within 1e-6 of 0.998500: " + (value_ok ? "yes" : "no") +
                                    "), 3-decimal rendering '" + printed + "' (expected '0.999')"};
}

// 3 ------------------------------------------------------------------------
Outcome gradient_fidelity() {
  Rng rng(303);
  double worst = 0.0;
  for (int net = 0; net < 20; ++net) {
    std::vector<std::size_t> sizes{1 + rng.index(6)};
    const std::size_t hidden = 1 + rng.index(3);
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(1 + rng.index(8));
    sizes.push_back(1);
    MlpParams p = init_mlp(sizes, rng.next_u64());
    for (auto& b : p.biases)
      for (double& v : b) v = rng.normal() * 0.1;
    const std::size_t batch = 1 + rng.index(16);
    Matrix x(batch, sizes[0]);
    for (double& v : x.values()) v = rng.normal();
    const auto y = random_labels(batch, rng);
    const auto g = mlp_backward(p, x, y);
    const auto loss = [&](const MlpParams& q) { return bce_loss(mlp_forward(q, x).output, y); };
    const double h = 1e-5;
    auto check = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + h;
      const double up = loss(p);
      param = saved - h;
      const double down = loss(p);
      param = saved;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(fd - analytic) / std::max({std::abs(fd), std::abs(analytic), 1e-4}));
    };
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
      for (std::size_t i = 0; i < p.weights[l].values().size(); ++i) check(p.weights[l].values()[i], g.weights[l].values()[i]);
      for (std::size_t i = 0; i < p.biases[l].size(); ++i) check(p.biases[l][i], g.biases[l][i]);
    }
  }
  return {worst < 1e-6, "max relative error " + fmt("%.3g", worst) + " over 20 networks"};
}

// 4 ------------------------------------------------------------------------
Outcome smote_geometry() {
  Rng rng(404);
  double worst = 0.0;
  std::size_t synthetic = 0, unbalanced = 0, bad_neighbour = 0;
  for (int cfg_no = 0; cfg_no < 200; ++cfg_no) {
    const std::size_t m = 5 + rng.index(46);
    const std::size_t d = 1 + rng.index(10);
    const std::size_t k = 1 + rng.index(4);
    const std::size_t majority = m + 1 + rng.index(200);
    Matrix x(m + majority, d);
    for (double& v : x.values()) v = rng.normal();
    Labels y(m + majority, 0);
    std::vector<std::size_t> slots(y.size());
    std::iota(slots.begin(), slots.end(), 0);
    rng.shuffle(slots);
    for (std::size_t i = 0; i < m; ++i) y[slots[i]] = 1;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
    const Dataset ds(x, y, names);

    SmoteConfig sc;
    sc.k = k;
    sc.seed = rng.next_u64();
    const auto out = smote(ds, sc);
    if (out.dataset.count(0) != out.dataset.count(1)) ++unbalanced;

    const auto minority_rows = indices_of(ds.labels(), 1);
    const Matrix minority = ds.features().select_rows(minority_rows);
    for (std::size_t r = 0; r < out.dataset.size(); ++r) {
      const auto* s = std::get_if<SyntheticRow>(&out.provenance[r]);
      if (!s) continue;
      ++synthetic;
      const auto local = static_cast<std::size_t>(std::find(minority_rows.begin(), minority_rows.end(), s->base) -
                                                  minority_rows.begin());
      auto nb = oracle::knn_sort_all(minority, oracle::row_vec(minority, local), k, local);
      for (auto& i : nb) i = minority_rows[i];
      if (std::find(nb.begin(), nb.end(), s->neighbor) == nb.end() || s->lambda < 0.0 || s->lambda > 1.0) {
        ++bad_neighbour;
      }
      for (std::size_t c = 0; c < d; ++c) {
        const double xb = ds.features()(s->base, c);
        const double xn = ds.features()(s->neighbor, c);
        worst = std::max(worst, std::abs(out.dataset.features()(r, c) - (xb + s->lambda * (xn - xb))));
      }
    }
  }
  const bool ok = worst < 1e-9 && unbalanced == 0 && bad_neighbour == 0;
  return {ok, std::to_string(synthetic) + " synthetic rows, max residual " + fmt("%.3g", worst) + ", " +
                  std::to_string(bad_neighbour) + " neighbour violations, " + std::to_string(unbalanced) +
                  " unbalanced runs"};
}

// 5 ------------------------------------------------------------------------
Outcome undersampling_exactness() {
  Rng rng(505);
  std::size_t failures = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t pos = 1 + rng.index(40);
    const std::size_t neg = pos + rng.index(400);
    const std::size_t d = 1 + rng.index(5);
    Matrix x(pos + neg, d);
    // Coarse values so duplicate rows occur and the multiset check matters.
    for (double& v : x.values()) v = static_cast<double>(rng.index(4));
    Labels y(pos + neg, 0);
    for (std::size_t i = 0; i < pos; ++i) y[rng.index(y.size())] = 1;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
    const Dataset ds(x, y, names);
    const auto out = random_undersample(ds, rng.next_u64());

    using Row = std::pair<std::vector<double>, Label>;
    std::map<Row, long> input, output;
    for (std::size_t r = 0; r < ds.size(); ++r) ++input[{oracle::row_vec(ds.features(), r), ds.labels()[r]}];
    for (std::size_t r = 0; r < out.dataset.size(); ++r) {
      ++output[{oracle::row_vec(out.dataset.features(), r), out.dataset.labels()[r]}];
    }
    const std::size_t minority = std::min(ds.count(0), ds.count(1));
    const Label minority_label = ds.count(1) <= ds.count(0) ? 1 : 0;
    bool ok = out.dataset.count(0) == minority && out.dataset.count(1) == minority;
    for (const auto& [row, n] : input) {
      const auto it = output.find(row);
      const long got = it == output.end() ? 0 : it->second;
      if (row.second == minority_label) ok &= got == n;  // every minority row kept
      else ok &= got <= n;                              // majority rows drawn without replacement
    }
    for (const auto& [row, n] : output) ok &= input.count(row) > 0;
    failures += !ok;
  }
  return {failures == 0, std::to_string(100 - failures) + "/100 datasets exact"};
}

// 6 ------------------------------------------------------------------------
Outcome quantile_oracle() {
  Rng rng(606);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> v(1 + rng.index(300));
    for (double& x : v) x = rng.normal() * 100.0;
    const auto q = quartiles(v);
    worst = std::max({worst, std::abs(q.q1 - oracle::quantile(v, 0.25)), std::abs(q.q3 - oracle::quantile(v, 0.75))});
  }
  std::vector<double> fixture(100);
  std::iota(fixture.begin(), fixture.end(), 1.0);
  fixture.push_back(1000.0);
  const Dataset ds(Matrix(fixture.size(), 1, fixture), Labels(fixture.size(), 1), {"v"});
  const std::vector<std::size_t> feats{0};
  const auto report = iqr_filter(ds, feats).second;
  const bool fixture_ok = report.removed_row_indices == std::vector<std::size_t>{100};
  return {worst <= 1e-12 && fixture_ok, "max quartile deviation " + fmt("%.3g", worst) + ", fixture removed " +
                                            std::to_string(report.removed_count) + " row(s)" +
                                            (fixture_ok ? " (the 1000 row)" : "")};
}

// 7 ------------------------------------------------------------------------
Outcome table_ordering(const fs::path& out_dir) {
  ExperimentConfig c;  // defaults: n = 20,000, 1% fraud, separation 2.0, seed 42
  c.output_dir = out_dir;
  const auto result = run_pipeline(c);
  const ExperimentRow* nn_smote = nullptr;
  const ExperimentRow* nn_none = nullptr;
  double best_other = 0.0;
  std::string best_name;
  for (const auto& row : result.report.rows) {
    if (row.evaluation != "test") continue;
    if (row.model == "nn" && row.strategy == "smote") {
      nn_smote = &row;
      continue;
    }
    if (row.model == "nn" && row.strategy == "none") nn_none = &row;
    if (row.metrics.f1 > best_other) {
      best_other = row.metrics.f1;
      best_name = row.model + "+" + row.strategy;
    }
  }
  if (!nn_smote || !nn_none) return {false, "missing nn rows"};
  const double gap = nn_smote->metrics.recall - nn_none->metrics.recall;
  const bool top = nn_smote->metrics.f1 >= best_other - 1e-12;
  return {gap >= 0.05 && top, "recall nn+smote " + fmt("%.3f", nn_smote->metrics.recall) + " vs nn+none " +
                                  fmt("%.3f", nn_none->metrics.recall) + " (gap " + fmt("%.3f", gap) +
                                  "); F1 nn+smote " + fmt("%.3f", nn_smote->metrics.f1) + ", best other " +
                                  best_name + " " + fmt("%.3f", best_other)};
}

// 8 ------------------------------------------------------------------------
Outcome tsne_recovery() {
  Rng rng(808);
  const std::size_t per = 50, d = 10;
  const double sep = 10.0;
  Matrix x(3 * per, d);
  std::vector<std::size_t> truth(3 * per);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per; ++i) {
      const std::size_t r = c * per + i;
      truth[r] = c;
      for (std::size_t j = 0; j < d; ++j) x(r, j) = rng.normal() + (j == c ? sep / std::sqrt(2.0) : 0.0);
    }
  }
  TsneConfig cfg;
  cfg.seed = 8;
  const auto emb = tsne_embed(x, cfg);
  const auto cond = conditional_affinities(x, emb.perplexity);
  double worst = 0.0;
  for (std::size_t i = 0; i < cond.rows(); ++i) {
    worst = std::max(worst, std::abs(row_perplexity(cond.row(i)) - emb.perplexity) / emb.perplexity);
  }
  const double purity = oracle::purity(oracle::kmeans(emb.coords, 3, 11), truth, 3, 3);
  const bool kl_ok = emb.kl_history.back() < emb.kl_history.front();
  return {purity >= 0.95 && worst < 1e-4 && kl_ok,
          "purity " + fmt("%.3f", purity) + ", worst perplexity error " + fmt("%.2g", worst) + ", KL " +
              fmt("%.4f", emb.kl_history.front()) + " -> " + fmt("%.4f", emb.kl_history.back())};
}

// 9 ------------------------------------------------------------------------
Dataset separable_blobs(std::size_t n, double sep, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, 2);
  Labels y(n);
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = static_cast<Label>(r % 2);
    const double shift = (y[r] ? 0.5 : -0.5) * sep / std::sqrt(2.0);
    x(r, 0) = rng.normal() + shift;
    x(r, 1) = rng.normal() + shift;
  }
  return Dataset(x, y, {"a", "b"});
}

Outcome baseline_sanity() {
  const auto ds = separable_blobs(400, 10.0, 909);
  const auto [train, test] = stratified_split(ds, 0.25, 9);
  ModelSettings s;
  s.dt.max_depth = 5;
  s.knn_k = 5;
  std::string detail;
  bool ok = true;
  for (auto kind : {ModelKind::LogisticRegression, ModelKind::LinearSvm, ModelKind::DecisionTree, ModelKind::Knn}) {
    const auto model = fit_model(kind, train, s, 9);
    const auto acc = evaluate(test.labels(), predict(model, test.features())).accuracy;
    ok &= acc >= 0.98;
    detail += std::string(detail.empty() ? "" : ", ") + std::string(model_name(kind)) + " " + fmt("%.3f", acc);
  }
  return {ok, "test accuracy " + detail};
}

// 10 -----------------------------------------------------------------------
bool same_directory(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a)) names_a.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) names_b.insert(e.path().filename().string());
  if (names_a != names_b) {
    why = "file sets differ";
    return false;
  }
  for (const auto& n : names_a) {
    if (slurp(a / n) != slurp(b / n)) {
      why = n + " differs";
      return false;
    }
  }
  why = std::to_string(names_a.size()) + " files byte-identical";
  return true;
}

Outcome determinism_and_persistence(const std::string& cli) {
  std::string why;
  bool dirs_ok = false;
  if (cli.empty()) {
    why = "no CLI path given";
  } else {
    const auto work = scratch("determinism");
    fs::create_directories(work);
    write_file_atomic(work / "config.json", dump_json(config_to_json(ExperimentConfig{})));
    const auto run = [&](const char* out) {
      const std::string cmd = "\"" + cli + "\" experiment --config \"" + (work / "config.json").string() +
                              "\" --out \"" + (work / out).string() + "\" > \"" + (work / out).string() + ".log\" 2>&1";
      return std::system(cmd.c_str());
    };
    const int rc_a = run("a");
    const int rc_b = run("b");
    if (rc_a != 0 || rc_b != 0) {
      why = "experiment exited with " + std::to_string(rc_a) + "/" + std::to_string(rc_b);
    } else {
      dirs_ok = same_directory(work / "a", work / "b", why);
    }
  }

  const auto raw = separable_blobs(300, 2.0, 1010);
  const std::vector<std::size_t> scale{1};
  const auto scaler = fit_standardizer(raw, scale);
  const auto train = apply_standardizer(raw, scaler);
  ModelSettings s;
  s.nn.epochs = 20;
  Rng rng(10);
  Matrix queries(100, 2);
  for (double& v : queries.values()) v = rng.normal() * 4.0;
  std::size_t identical = 0;
  for (auto kind : {ModelKind::Mlp, ModelKind::LogisticRegression, ModelKind::LinearSvm, ModelKind::DecisionTree,
                    ModelKind::Knn}) {
    ModelArtifact a;
    a.model = fit_model(kind, train, s, 10);
    a.hyperparameters = hyperparameters_json(kind, s, 10);
    a.scaler = scaler;
    a.feature_names = raw.feature_names();
    a.training_seed = 10;
    const auto path = scratch(std::string("artifact_") + std::string(model_name(kind)) + ".json");
    save_model(a, path);
    const auto pa = a.predict_proba(queries);
    const auto pb = load_model(path).predict_proba(queries);
    identical += pa == pb;
  }
  return {dirs_ok && identical == 5, "two CLI experiment runs: " + why + "; save/load bit-identical for " +
                                         std::to_string(identical) + "/5 model kinds"};
}

// 11 -----------------------------------------------------------------------
std::optional<Outcome> public_csv() {
  const char* path = std::getenv("FRAUDKIT_CREDITCARD_CSV");
  if (!path || !*path) return std::nullopt;
  const auto data = load_csv(path);
  const auto counts = label_distribution(data);
  const bool counts_ok = data.size() == 284807 && counts.positive == 492;
  ExperimentConfig c;
  c.csv_path = path;
  c.output_dir = scratch("creditcard");
  const auto t0 = std::chrono::steady_clock::now();
  run_pipeline(c);
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
  return Outcome{counts_ok && minutes < 15.0, "n = " + std::to_string(data.size()) + ", positives = " +
                                                  std::to_string(counts.positive) + ", pipeline " +
                                                  fmt("%.1f", minutes) + " min"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> known_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
    else if (arg == "--known-fail" && i + 1 < argc) known_fail.insert(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: " << argv[0] << " [--cli PATH] [--known-fail N]...\n";
      return 2;
    }
  }

  std::set<int> failed;
  auto run = [&](int id, const char* name, double budget_s, const std::function<std::optional<Outcome>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<Outcome> out;
    try {
      out = body();
    } catch (const std::exception& e) {
      out = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out) {
      std::printf("criterion %2d SKIP  %-28s (set FRAUDKIT_CREDITCARD_CSV to run)\n", id, name);
      std::fflush(stdout);
      return;
    }
    const bool in_time = secs < budget_s;
    const bool pass = out->pass && in_time;
    if (!pass) failed.insert(id);
    std::printf("criterion %2d %s  %-28s %s [%.2fs / %.0fs budget%s]\n", id, pass ? "PASS" : "FAIL", name,
                out->detail.c_str(), secs, budget_s, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  };

  const auto table_dir = scratch("table");
  run(1, "metric oracle", 1.0, [] { return metric_oracle(); });
  run(2, "F1 of the NN+SMOTE row", 1.0, [] { return f1_table_row(); });
  run(3, "gradient fidelity", 10.0, [] { return gradient_fidelity(); });
  run(4, "SMOTE geometry", 30.0, [] { return smote_geometry(); });
  run(5, "undersampling exactness", 5.0, [] { return undersampling_exactness(); });
  run(6, "quantile / IQR oracle", 5.0, [] { return quantile_oracle(); });
  run(7, "qualitative table ordering", 300.0, [&] { return table_ordering(table_dir); });
  run(8, "t-SNE cluster recovery", 60.0, [] { return tsne_recovery(); });
  run(9, "baseline sanity", 30.0, [] { return baseline_sanity(); });
  run(10, "determinism and persistence", 300.0, [&] { return determinism_and_persistence(cli); });
  run(11, "public dataset (optional)", 900.0, [] { return public_csv(); });

  std::printf("%zu criterion/criteria failed", failed.size());
  if (!known_fail.empty()) {
    std::printf("; documented known failures:");
    for (int k : known_fail) std::printf(" %d", k);
  }
  std::printf("\n");
  if (failed != known_fail) {
    for (int k : known_fail) {
      if (!failed.count(k)) std::printf("criterion %d was listed as a known failure but passed\n", k);
    }
    return 1;
  }
  return 0;
}

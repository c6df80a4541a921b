#include "fraudkit/metrics.hpp"

#include "fraudkit/error.hpp"

namespace fraudkit {

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    fail(ErrorKind::ShapeMismatch, "confusion matrix got " + std::to_string(y_true.size()) +
                                       " true labels and " + std::to_string(y_pred.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] > 1 || y_pred[i] > 1) {
      fail(ErrorKind::LabelDomain, "label outside {0,1} at position " + std::to_string(i));
    }
    if (y_true[i] == 1) {
      (y_pred[i] == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (y_pred[i] == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

namespace {

Ratio ratio(std::size_t num, std::size_t den) noexcept {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

}  // namespace

Ratio precision(const ConfusionMatrix& cm) noexcept { return ratio(cm.tp, cm.tp + cm.fp); }

Ratio recall(const ConfusionMatrix& cm) noexcept { return ratio(cm.tp, cm.tp + cm.fn); }

double f1(double precision, double recall) noexcept {
  const double sum = precision + recall;
  if (sum == 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

MetricReport report_from_confusion(const ConfusionMatrix& cm) {
  MetricReport report;
  report.confusion = cm;
  const Ratio p = precision(cm);
  const Ratio r = recall(cm);
  const Ratio acc = ratio(cm.tp + cm.tn, cm.total());
  report.precision = p.value;
  report.recall = r.value;
  report.f1 = f1(p.value, r.value);
  report.accuracy = acc.value;
  if (p.zero_division) report.zero_division_flags.insert("precision");
  if (r.zero_division) report.zero_division_flags.insert("recall");
  if (p.value + r.value == 0.0) report.zero_division_flags.insert("f1");
  if (acc.zero_division) report.zero_division_flags.insert("accuracy");
  return report;
}

MetricReport evaluate(std::span<const Label> y_true, std::span<const Label> y_pred) {
  return report_from_confusion(confusion(y_true, y_pred));
}

}  // namespace fraudkit

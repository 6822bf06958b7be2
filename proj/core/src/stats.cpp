#include "repopt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace repopt {

double mcnemar_exact_one_sided(int wins, int losses) {
  if (wins < 0 || losses < 0)
    throw std::invalid_argument("mcnemar: counts must be nonnegative");
  const int n = wins + losses;
  if (n == 0) return 1.0;

  // log of C(n, i) * 2^{-n}, accumulated by log-sum-exp over i = wins..n.
  const double log2v = std::log(2.0);
  const double lg_n = std::lgamma(n + 1.0);
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(n - wins + 1);
  for (int i = wins; i <= n; ++i) {
    const double t = lg_n - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * log2v;
    terms.push_back(t);
    max_term = std::max(max_term, t);
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  const double p = std::exp(max_term + std::log(acc));
  return std::min(p, 1.0);
}

const char* paired_label_name(PairedLabel label) {
  switch (label) {
    case PairedLabel::kWin: return "win";
    case PairedLabel::kTie: return "tie";
    case PairedLabel::kLoss: return "loss";
  }
  return "tie";
}

PairedLabel paired_label_from_name(const std::string& name) {
  if (name == "win") return PairedLabel::kWin;
  if (name == "tie") return PairedLabel::kTie;
  if (name == "loss") return PairedLabel::kLoss;
  throw std::invalid_argument("unknown paired label: " + name);
}

DeltaClassification classify_delta(double h_base, double h_aug_median) {
  DeltaClassification out;
  out.delta = h_base - h_aug_median;
  if (out.delta > 1e-12)
    out.label = PairedLabel::kWin;
  else if (out.delta < -1e-12)
    out.label = PairedLabel::kLoss;
  else
    out.label = PairedLabel::kTie;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

int lower_median_index(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("lower_median_index: empty input");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] < values[b]; });
  return order[(values.size() - 1) / 2];
}

}  // namespace repopt

#pragma once

#include <string>
#include <vector>

namespace repopt {

// Exact one-sided McNemar test on discordant pairs: with n = wins + losses
// Bernoulli(1/2) trials under the null, returns
//   p = sum_{i=wins}^{n} C(n, i) * 2^{-n},
// the probability of at least as many wins.  Computed in log space so counts
// up to 10^4 stay accurate.  Returns 1 when there are no discordant pairs.
double mcnemar_exact_one_sided(int wins, int losses);

enum class PairedLabel { kWin, kTie, kLoss };

// Name used in CSV output: "win", "tie" or "loss".
const char* paired_label_name(PairedLabel label);
// Inverse of paired_label_name; throws std::invalid_argument on other input.
PairedLabel paired_label_from_name(const std::string& name);

struct DeltaClassification {
  double delta = 0.0;
  PairedLabel label = PairedLabel::kTie;
};

// Paired improvement delta = h_base - h_aug_median, labeled win / loss when
// it exceeds the 1e-12 equality tolerance in either direction, tie otherwise.
DeltaClassification classify_delta(double h_base, double h_aug_median);

// Median of an unsorted list (averages the middle pair for even sizes).
// Throws std::invalid_argument when empty.
double median(std::vector<double> values);

// Index of the element realizing the lower median (the middle element for odd
// sizes); ties resolve to the earliest index.  Used to pick which augmented
// seed's final iterate gets certified.
int lower_median_index(const std::vector<double>& values);

}  // namespace repopt

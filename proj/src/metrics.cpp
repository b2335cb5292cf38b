#include "foodqa/metrics.hpp"

namespace foodqa {

PRF question_prf(const std::set<std::string>& gold, const std::vector<std::string>& predicted) {
  PRF r;
  if (predicted.empty() || gold.empty()) return r;
  std::set<std::string> seen;
  double hits = 0;
  for (const auto& p : predicted) {
    if (gold.contains(p) && seen.insert(p).second) ++hits;
  }
  r.precision = hits / static_cast<double>(predicted.size());
  r.recall = hits / static_cast<double>(gold.size());
  if (r.precision + r.recall > 0) r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

APAR question_ap_ar(const std::set<std::string>& gold, const std::vector<std::string>& predicted) {
  APAR r;
  if (predicted.empty() || gold.empty()) return r;
  std::set<std::string> seen;
  double hits = 0, ap_sum = 0, ar_sum = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (gold.contains(predicted[i]) && seen.insert(predicted[i]).second) {
      ++hits;
      ap_sum += hits / static_cast<double>(i + 1);
    }
    ar_sum += hits / static_cast<double>(gold.size());
  }
  r.ap = ap_sum / static_cast<double>(gold.size());
  r.ar = ar_sum / static_cast<double>(predicted.size());
  return r;
}

}  // namespace foodqa

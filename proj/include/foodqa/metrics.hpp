#pragma once

#include <set>
#include <string>
#include <vector>

namespace foodqa {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct APAR {
  double ap = 0.0;
  double ar = 0.0;
};

// Set-based precision / recall / F1 of the returned list.
PRF question_prf(const std::set<std::string>& gold, const std::vector<std::string>& predicted);

// AP: sum of precision@rank at each gold hit, divided by |gold|.
// AR: mean of recall@c over cutoffs c = 1..|predicted|.
APAR question_ap_ar(const std::set<std::string>& gold, const std::vector<std::string>& predicted);

}  // namespace foodqa

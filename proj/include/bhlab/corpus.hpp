#pragma once

#include <string>
#include <vector>

namespace bhlab {

struct CorpusOptions {
  long max_group_order = 0;    // 0 = full caps; criteria needing more emit SKIP
  double norm_perturbation = 0.0;  // fault injection added to algebra norms
  bool verbose = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string status;  // "PASS", "FAIL", or "SKIP"
  std::string detail;
  double seconds = 0.0;
};

// Runs the ten self-check criteria with pinned tolerances and returns one
// result per criterion in order.
std::vector<CriterionResult> run_corpus(const CorpusOptions& opts);

}  // namespace bhlab

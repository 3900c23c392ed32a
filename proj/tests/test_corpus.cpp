#include "doctest.h"

#include <string>
#include <vector>

#include "bhlab/corpus.hpp"

using namespace bhlab;

namespace {

const CriterionResult& by_id(const std::vector<CriterionResult>& results, int id) {
  for (const CriterionResult& r : results)
    if (r.id == id) return r;
  FAIL("criterion ", id, " missing");
  return results.front();
}

}  // namespace

TEST_CASE("reduced corpus passes everything it does not skip") {
  CorpusOptions opts;
  opts.max_group_order = 16;
  const auto results = run_corpus(opts);
  REQUIRE(results.size() == 10);
  for (int id = 1; id <= 10; ++id) CHECK(by_id(results, id).id == id);

  // criteria whose pinned instances need groups beyond order 16 skip cleanly
  for (int id : {1, 7, 10}) {
    const CriterionResult& r = by_id(results, id);
    CHECK(r.status == "SKIP");
  }
  for (int id : {2, 3, 4, 5, 6, 8, 9}) {
    const CriterionResult& r = by_id(results, id);
    CHECK(r.status == "PASS");
    CHECK(r.seconds >= 0.0);
    CHECK_FALSE(r.name.empty());
  }
}

TEST_CASE("norm fault injection is detected") {
  // a 1e-3 perturbation of every algebra norm dwarfs the 1e-6 tolerance of
  // the character-sum magnitude criterion, so it must flip to FAIL
  CorpusOptions opts;
  opts.max_group_order = 16;
  opts.norm_perturbation = 1e-3;
  const auto results = run_corpus(opts);
  REQUIRE(results.size() == 10);
  CHECK(by_id(results, 2).status == "FAIL");
  CHECK_FALSE(by_id(results, 2).detail.empty());
}

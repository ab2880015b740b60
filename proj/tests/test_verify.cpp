#include <catch_amalgamated.hpp>

#include "vkit/verify.hpp"

using namespace vkit;

TEST_CASE("randomized suites pass") {
  for (const auto& r : verify::run_all(random::kDefaultSeed, 10)) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.passed());
    CHECK(r.trials > 0);
  }
}

TEST_CASE("zero trials run nothing") {
  for (const auto& r : verify::run_all(1, 0)) {
    CHECK(r.trials == 0);
    CHECK(r.passed());
  }
}

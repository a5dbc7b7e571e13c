#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "masterysim/pool.hpp"
#include "masterysim/rng.hpp"
#include "support/test_util.hpp"

using namespace masterysim;

namespace {

const char* kMinimalPool = R"({
  "skills": ["add/subtr-const", "division-simple"],
  "problems": [
    {"id": "p1", "steps": ["add/subtr-const", "division-simple"]}
  ]
})";

} // namespace

TEST_CASE("minimal well-formed pool loads") {
  const auto dir = test_util::scratch_dir("pool_min");
  const auto path = test_util::write_file(dir, "pool.json", kMinimalPool);
  const SkillModel model = load_skill_model(path);
  CHECK(model.size() == 2);
  CHECK(model.name(0) == "add/subtr-const");

  const ProblemPool pool = load_pool(path, model);
  CHECK(pool.size() == 1);
  CHECK(pool.problem(0).id == "p1");
  CHECK(pool.problem(0).steps.size() == 2);
  CHECK(pool.problem(0).steps[1].skill == 1);
  CHECK(pool.problem(0).pool_order == 0);
  CHECK(pool.available_count() == 1);
}

TEST_CASE("unknown skill name is a schema error naming problem and step") {
  const auto dir = test_util::scratch_dir("pool_bad_skill");
  const auto path = test_util::write_file(dir, "pool.json", R"({
    "skills": ["add/subtr-const"],
    "problems": [{"id": "p9", "steps": ["add/subtr-const", "divide-by-zero"]}]
  })");
  const SkillModel model = load_skill_model(path);
  try {
    load_pool(path, model);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    const std::string message = e.what();
    CHECK(message.find("p9") != std::string::npos);
    CHECK(message.find("step 1") != std::string::npos);
    CHECK(message.find("divide-by-zero") != std::string::npos);
  }
}

TEST_CASE("duplicate problem id is a schema error") {
  const auto dir = test_util::scratch_dir("pool_dup");
  const auto path = test_util::write_file(dir, "pool.json", R"({
    "skills": ["a"],
    "problems": [{"id": "p1", "steps": ["a"]}, {"id": "p1", "steps": ["a"]}]
  })");
  CHECK_THROWS_AS(load_pool(path, load_skill_model(path)), SchemaError);
}

TEST_CASE("empty step list is a schema error") {
  const auto dir = test_util::scratch_dir("pool_empty_steps");
  const auto path = test_util::write_file(dir, "pool.json", R"({
    "skills": ["a"],
    "problems": [{"id": "p1", "steps": []}]
  })");
  CHECK_THROWS_AS(load_pool(path, load_skill_model(path)), SchemaError);
}

TEST_CASE("bundled synthetic pool has the documented shape") {
  const auto path = test_util::fixture_dir() / "pool_synthetic.json";
  const SkillModel model = load_skill_model(path);
  CHECK(model.size() == 9);
  const ProblemPool pool = load_pool(path, model);
  CHECK(pool.size() == 24);
  for (const Problem& problem : pool.problems()) {
    CHECK(problem.steps.size() >= 2);
    CHECK(problem.steps.size() <= 7);
  }
  for (int i = 0; i < pool.size(); ++i) {
    CHECK(pool.problem(i).pool_order == i);
  }
  std::vector<int> counts(9, 0);
  for (const Problem& problem : pool.problems()) {
    for (const Step& step : problem.steps) {
      ++counts[static_cast<std::size_t>(step.skill)];
    }
  }
  for (int c : counts) {
    CHECK(c > 0);
  }
}

TEST_CASE("loading identical bytes yields structurally identical pools") {
  const auto path = test_util::fixture_dir() / "pool_synthetic.json";
  const SkillModel model = load_skill_model(path);
  const ProblemPool a = load_pool(path, model);
  const ProblemPool b = load_pool(path, model);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.problem(i).id == b.problem(i).id);
    CHECK(a.problem(i).pool_order == b.problem(i).pool_order);
    REQUIRE(a.problem(i).steps.size() == b.problem(i).steps.size());
    for (std::size_t s = 0; s < a.problem(i).steps.size(); ++s) {
      CHECK(a.problem(i).steps[s].skill == b.problem(i).steps[s].skill);
    }
  }
}

TEST_CASE("consume and replenish lifecycle") {
  const auto path = test_util::fixture_dir() / "pool_synthetic.json";
  ProblemPool pool = load_pool(path, load_skill_model(path));

  SUBCASE("consume flips exactly one flag") {
    pool.mark_consumed("p01");
    CHECK_FALSE(pool.is_available(0));
    CHECK(pool.is_available(1));
    CHECK(pool.available_count() == 23);
  }

  SUBCASE("double consume is a logic error") {
    pool.mark_consumed("p01");
    CHECK_THROWS_AS(pool.mark_consumed("p01"), std::logic_error);
  }

  SUBCASE("unknown id is a logic error") {
    CHECK_THROWS_AS(pool.mark_consumed("nope"), std::logic_error);
  }

  SUBCASE("consuming all 24 exhausts; replenish restores") {
    for (const Problem& problem : pool.problems()) {
      pool.mark_consumed(problem.id);
    }
    CHECK(pool.exhausted());
    pool.replenish();
    CHECK(pool.available_count() == 24);
    CHECK(pool.replenish_count() == 1);
  }

  SUBCASE("replenish on a non-exhausted pool is a logic error") {
    CHECK_THROWS_AS(pool.replenish(), std::logic_error);
    pool.mark_consumed("p01");
    CHECK_THROWS_AS(pool.replenish(), std::logic_error);
  }
}

TEST_CASE("serving conservation holds along random consume/replenish walks") {
  const auto path = test_util::fixture_dir() / "pool_synthetic.json";
  const SkillModel model = load_skill_model(path);
  RandomStream rng(RandomStream::derive_key({31337}));
  for (int walk = 0; walk < 20; ++walk) {
    ProblemPool pool = load_pool(path, model);
    int served = 0;
    const int moves = 30 + rng.uniform_int(200);
    for (int m = 0; m < moves; ++m) {
      if (pool.exhausted()) {
        pool.replenish();
      }
      int pick = rng.uniform_int(pool.available_count());
      for (int i = 0; i < pool.size(); ++i) {
        if (!pool.is_available(i)) continue;
        if (pick == 0) {
          pool.mark_consumed(pool.problem(i).id);
          ++served;
          break;
        }
        --pick;
      }
      const int consumed_now = pool.size() - pool.available_count();
      CHECK(pool.replenish_count() * pool.size() + consumed_now == served);
      CHECK(pool.total_consumed() == served);
    }
  }
}

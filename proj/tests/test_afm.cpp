#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "masterysim/afm.hpp"
#include "support/test_util.hpp"

#include <cmath>

using namespace masterysim;

namespace {

AfmParams uniform_params(int n_skills, double beta, double gamma) {
  AfmParams params;
  params.beta = Vector::Constant(n_skills, beta);
  params.gamma = Vector::Constant(n_skills, gamma);
  return params;
}

} // namespace

TEST_CASE("p_correct matches the logistic form") {
  const auto params = uniform_params(2, 0.0, 0.1);
  StudentState student = make_student_state(0.0, 2);
  CHECK(p_correct(student, 0, params) == doctest::Approx(0.5).epsilon(1e-12));

  student.opportunities[0] = 10;
  // sigmoid(1.0)
  CHECK(std::abs(p_correct(student, 0, params) - 0.7310585786300049) < 1e-9);
}

TEST_CASE("p_correct tails vanish") {
  const auto params = uniform_params(1, 0.0, 0.1);
  const StudentState weak = make_student_state(-30.0, 1);
  CHECK(p_correct(weak, 0, params) < 1e-12);
  const StudentState strong = make_student_state(30.0, 1);
  CHECK(p_correct(strong, 0, params) > 1.0 - 1e-12);
}

TEST_CASE("p_correct is monotone in opportunities iff gamma is positive") {
  auto params = uniform_params(1, -0.3, 0.2);
  StudentState student = make_student_state(0.1, 1);
  double previous = p_correct(student, 0, params);
  for (int t = 1; t <= 30; ++t) {
    student.opportunities[0] = t;
    const double p = p_correct(student, 0, params);
    CHECK(p > previous);
    previous = p;
  }

  params.gamma[0] = 0.0;
  student.opportunities[0] = 0;
  const double base = p_correct(student, 0, params);
  student.opportunities[0] = 25;
  CHECK(p_correct(student, 0, params) == doctest::Approx(base));
}

TEST_CASE("p_correct ignores other skills' counts") {
  const auto params = uniform_params(3, 0.2, 0.15);
  StudentState student = make_student_state(0.4, 3);
  const double before = p_correct(student, 1, params);
  student.opportunities[0] = 17;
  student.opportunities[2] = 4;
  CHECK(p_correct(student, 1, params) == before);
}

TEST_CASE("record_opportunity increments exactly one count") {
  StudentState student = make_student_state(0.0, 3);
  student = record_opportunity(student, 1);
  CHECK(student.opportunities[0] == 0);
  CHECK(student.opportunities[1] == 1);
  CHECK(student.opportunities[2] == 0);
  student = record_opportunity(student, 2);
  CHECK(student.opportunities[1] == 1);
  CHECK(student.opportunities[2] == 1);
  CHECK(student.theta == 0.0);
}

TEST_CASE("sample_response consumes exactly one draw per call") {
  const auto params = uniform_params(1, 0.0, 0.0);
  const StudentState student = make_student_state(0.0, 1);
  RandomStream rng(RandomStream::derive_key({77}));
  for (int i = 0; i < 100; ++i) {
    const auto before = rng.draws();
    sample_response(student, 0, params, rng);
    CHECK(rng.draws() == before + 1);
  }
}

TEST_CASE("extreme proficiency forces the response") {
  const auto params = uniform_params(1, 0.0, 0.0);
  RandomStream rng(RandomStream::derive_key({78}));
  const StudentState strong = make_student_state(30.0, 1);
  const StudentState weak = make_student_state(-30.0, 1);
  for (int i = 0; i < 10000; ++i) {
    CHECK(sample_response(strong, 0, params, rng));
    CHECK_FALSE(sample_response(weak, 0, params, rng));
  }
}

TEST_CASE("balanced responses have a balanced empirical mean") {
  const auto params = uniform_params(1, 0.0, 0.0);
  const StudentState student = make_student_state(0.0, 1);  // p = 0.5
  RandomStream rng(RandomStream::derive_key({79}));
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    if (sample_response(student, 0, params, rng)) ++hits;
  }
  CHECK(std::abs(static_cast<double>(hits) / n - 0.5) < 0.01);
}

TEST_CASE("draw_student samples the proficiency distribution") {
  AfmParams params = uniform_params(2, 0.0, 0.1);

  SUBCASE("degenerate sd pins theta to the mean") {
    params.theta_mean = 1.25;
    params.theta_sd = 1e-9;
    RandomStream rng(RandomStream::derive_key({80}));
    const StudentState student = draw_student(params, 2, rng);
    CHECK(student.theta == doctest::Approx(1.25).epsilon(1e-6));
    CHECK(student.opportunities.sum() == 0);
  }

  SUBCASE("sample moments match over 1e5 draws") {
    params.theta_mean = 0.0;
    params.theta_sd = 1.0;
    RandomStream rng(RandomStream::derive_key({81}));
    const int n = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = draw_student(params, 2, rng).theta;
      sum += theta;
      sq += theta * theta;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(sd - 1.0) < 0.01);
  }

  SUBCASE("fixed seed reproduces theta") {
    RandomStream a(RandomStream::derive_key({82}));
    RandomStream b(RandomStream::derive_key({82}));
    CHECK(draw_student(params, 2, a).theta == draw_student(params, 2, b).theta);
  }
}

TEST_CASE("parameter file round-trips and validates") {
  const auto dir = test_util::scratch_dir("afm_io");
  const SkillModel model({"alpha", "beta-skill"});

  AfmParams params;
  params.beta = Vector(2);
  params.beta << 0.4, -0.2;
  params.gamma = Vector(2);
  params.gamma << 0.1, 0.05;
  params.theta_mean = 0.1;
  params.theta_sd = 0.9;
  save_afm_params(dir / "params.json", params, model);

  const AfmParams loaded = load_afm_params(dir / "params.json", model);
  CHECK(loaded.beta.isApprox(params.beta));
  CHECK(loaded.gamma.isApprox(params.gamma));
  CHECK(loaded.theta_mean == doctest::Approx(params.theta_mean));
  CHECK(loaded.theta_sd == doctest::Approx(params.theta_sd));

  SUBCASE("negative gamma is rejected") {
    const auto bad = test_util::write_file(
        dir, "bad.json",
        R"({"theta_mean":0,"theta_sd":1,"skills":{"alpha":{"beta":0,"gamma":-0.1},"beta-skill":{"beta":0,"gamma":0}}})");
    CHECK_THROWS_AS(load_afm_params(bad, model), SchemaError);
  }

  SUBCASE("missing skill is rejected") {
    const auto bad = test_util::write_file(
        dir, "missing.json",
        R"({"theta_mean":0,"theta_sd":1,"skills":{"alpha":{"beta":0,"gamma":0}}})");
    CHECK_THROWS_AS(load_afm_params(bad, model), SchemaError);
  }

  SUBCASE("unknown skill is rejected") {
    const auto bad = test_util::write_file(
        dir, "unknown.json",
        R"({"theta_mean":0,"theta_sd":1,"skills":{"alpha":{"beta":0,"gamma":0},"beta-skill":{"beta":0,"gamma":0},"zeta":{"beta":0,"gamma":0}}})");
    CHECK_THROWS_AS(load_afm_params(bad, model), SchemaError);
  }
}

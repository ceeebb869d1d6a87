#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "finprep/error.hpp"
#include "finprep/experiment.hpp"
#include "finprep/model.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace finprep;

namespace {

AlignedDataset dataset_of(std::size_t n) {
  std::vector<AlignedRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({CivilDate::from_ordinal(static_cast<long>(i)), double(i), double(i * i)});
  }
  return AlignedDataset(std::move(rows), "x", "y");
}

}  // namespace

TEST_CASE("shuffle_split sizes follow the ceiling rule") {
  const std::pair<std::size_t, std::size_t> cases[] = {{60, 15}, {5387, 1347}, {42, 11}, {4, 1}, {5, 2}};
  for (const auto& [n, n_test] : cases) {
    const auto s = shuffle_split(dataset_of(n), SplitSpec{});
    CHECK(s.test.size() == n_test);
    CHECK(s.train.size() == n - n_test);
  }
  CHECK_THROWS_AS(shuffle_split(dataset_of(3), SplitSpec{}), NumericError);
}

TEST_CASE("shuffle_split is deterministic and seed-sensitive") {
  const auto ds = dataset_of(100);
  const auto a = shuffle_split(ds, SplitSpec{0.25, 42});
  const auto b = shuffle_split(ds, SplitSpec{0.25, 42});
  const auto c = shuffle_split(ds, SplitSpec{0.25, 43});
  CHECK(a.test == b.test);
  CHECK(a.train == b.train);
  CHECK(a.test != c.test);
}

TEST_CASE("seeded_permutation is a permutation") {
  for (std::size_t n : {1u, 2u, 17u, 500u}) {
    auto p = seeded_permutation(n, 9);
    std::set<std::size_t> seen(p.begin(), p.end());
    CHECK(seen.size() == n);
    CHECK(*seen.rbegin() == n - 1);
  }
}

TEST_CASE("fit_scaler and apply_scaler") {
  const std::vector<double> v{1, 2, 3};
  const auto p = fit_scaler(v);
  CHECK(p.mean == doctest::Approx(2.0));
  CHECK(p.std == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  const std::vector<double> flat{5, 5, 5};
  try {
    fit_scaler(flat);
    FAIL("expected a zero-variance error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("constant column") != std::string::npos);
  }
  CHECK(apply_scaler(ScalerParams{2, 1}, 2.0) == 0.0);
  CHECK(apply_scaler(ScalerParams{0, 2}, 4.0) == 2.0);
  const ScalerParams q{3.7, 0.3};
  CHECK(q.invert(q.apply(12.25)) == doctest::Approx(12.25).epsilon(1e-12));
}

TEST_CASE("expand_poly") {
  CHECK(expand_poly(3.0, 2) == std::vector<double>{1, 3, 9});
  CHECK(expand_poly(2.5, 0) == std::vector<double>{1});
  CHECK(expand_poly(0.0, 4) == std::vector<double>{1, 0, 0, 0, 0});
  CHECK_THROWS_AS(expand_poly(1.0, -1), NumericError);
  const auto m = design_matrix(std::vector<double>{2.0, -1.0}, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 4);
  CHECK(m(0, 3) == 8.0);
  CHECK(m(1, 3) == -1.0);
}

TEST_CASE("fit_ols examples") {
  SUBCASE("exact line") {
    const std::vector<double> x{-1, 0, 0.5, 2, 3}, y{-1, 1, 2, 5, 7};
    const auto fit = fit_ols(design_matrix(x, 1), y);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_FALSE(fit.conditioning_warning);
  }
  SUBCASE("duplicated x averages its targets") {
    const std::vector<double> x{0, 0, 1}, y{0, 2, 5};
    const auto fit = fit_ols(design_matrix(x, 1), y);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("too few rows") {
    const std::vector<double> x{0, 1}, y{0, 1};
    CHECK_THROWS_AS(fit_ols(design_matrix(x, 2), y), NumericError);
  }
}

TEST_CASE("fit_ols matches the normal-equations oracle on 100 random instances") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int degree = 1 + static_cast<int>(rng() % 4);
    const std::size_t n = static_cast<std::size_t>(degree) + 2 + rng() % (49 - degree);
    std::vector<double> x(n), y(n);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng) * 3.0;
      rows.push_back(expand_poly(x[i], degree));
    }
    const auto fit = fit_ols(design_matrix(x, degree), y);
    const auto ref = oracle::normal_equations(rows, y);
    REQUIRE_FALSE(fit.conditioning_warning);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      REQUIRE(std::abs(fit.coefficients[j] - ref[j]) <= 1e-8 * std::max(1.0, std::abs(ref[j])));
    }
    // residual orthogonality
    const auto design = design_matrix(x, degree);
    const auto pred = linalg::times(design, fit.coefficients);
    std::vector<double> resid(n);
    double ymax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      resid[i] = y[i] - pred[i];
      ymax = std::max(ymax, std::abs(y[i]));
    }
    for (double g : linalg::transpose_times(design, resid)) {
      REQUIRE(std::abs(g) <= 1e-8 * design.norm_inf() * ymax);
    }
  }
}

TEST_CASE("predict") {
  FittedModel m;
  m.degree = 1;
  m.coefficients = {0, 1};
  for (double v : {-3.0, 0.0, 7.5}) CHECK(m.predict(v) == v);

  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(i * 0.7 - 2);
    y.push_back(2 * x.back() * x.back() - x.back() + 4);
  }
  const auto fm = fit_model(x, y, 2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(fm.predict(x[i]) == doctest::Approx(y[i]).epsilon(1e-8));
}

TEST_CASE("training MSE does not increase with degree") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> x(200), y(200);
  for (std::size_t i = 0; i < 200; ++i) {
    x[i] = -2.0 + 4.0 * static_cast<double>(i) / 199.0;
    y[i] = std::sin(2 * x[i]) + noise(rng);
  }
  double prev = 1e300;
  for (int d = 1; d <= 12; ++d) {
    const auto m = fit_model(x, y, d);
    REQUIRE_FALSE(m.conditioning_warning);
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = m.predict_scaled(m.x_scaler.apply(x[i])) - m.y_scaler.apply(y[i]);
      sse += e * e;
    }
    const double cur = sse / 200.0;
    CHECK(cur <= prev + 1e-8);
    prev = cur;
  }
}

TEST_CASE("cross_val_neg_mse examples") {
  SUBCASE("line data") {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(i);
      y.push_back(3 * i - 2);
    }
    const double s = cross_val_neg_mse(x, y, 1, 5, 42);
    CHECK(s >= -1e-10);
    CHECK(s <= 0.0);
  }
  SUBCASE("leave-one-out on an exact quadratic") {
    std::vector<double> x{-2, -1, 0, 1, 2, 3}, y;
    for (double v : x) y.push_back(v * v - v);
    const double s = cross_val_neg_mse(x, y, 2, 6, 1);
    CHECK(s <= 0.0);
    CHECK(s >= -1e-20);
  }
  SUBCASE("errors") {
    std::vector<double> x{1, 2, 3}, y{1, 2, 4};
    CHECK_THROWS_AS(cross_val_neg_mse(x, y, 1, 4, 0), NumericError);
    CHECK_THROWS_AS(cross_val_neg_mse(x, y, 1, 1, 0), NumericError);
  }
  SUBCASE("linear-interpolation fixture, degree 2") {
    PreprocessSpec spec;
    spec.technique = Technique::LinearInterp;
    const ExperimentConfig cfg;
    const auto ds = run_preprocess(spec, testutil::income(), testutil::price());
    const auto split = shuffle_split(ds, SplitSpec{cfg.test_fraction, cfg.seed});
    const auto xs = ds.xs(), ys = ds.ys();
    const double score = cross_val_neg_mse(take(xs, split.train), take(ys, split.train), 2,
                                           cfg.cv_folds, cfg.seed);
    CHECK(std::abs(score + 0.249) <= 0.05);
  }
}

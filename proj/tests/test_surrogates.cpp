#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "samadiego/surrogates.hpp"

using namespace samadiego;
using Catch::Approx;

namespace {

struct RandomDataset {
  SearchSpace space;
  std::vector<Design> X;
  std::vector<double> Y;
};

RandomDataset random_dataset(std::mt19937_64& rng, int max_dim = 10, int max_n = 20) {
  std::uniform_int_distribution<int> dim_dist(1, max_dim);
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_int_distribution<int> levels_dist(2, 101);
  const int m = dim_dist(rng);
  std::vector<VariableSpec> vars;
  for (int j = 0; j < m; ++j) {
    if (kind(rng) == 0)
      vars.push_back({VarKind::binary, 2});
    else
      vars.push_back({VarKind::ordinal, levels_dist(rng)});
  }
  RandomDataset ds{SearchSpace(std::move(vars)), {}, {}};

  std::uniform_int_distribution<int> n_dist(4, max_n);
  const int n = n_dist(rng);
  std::set<Design> seen;
  std::normal_distribution<double> noise(0.0, 1.0);
  int guard = 0;
  while (static_cast<int>(ds.X.size()) < n && guard++ < 1000) {
    Design d;
    for (const auto& v : ds.space.variables)
      d.values.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(v.levels)));
    if (!seen.insert(d).second) continue;  // no duplicate designs
    ds.X.push_back(d);
    ds.Y.push_back(noise(rng));
  }
  return ds;
}

}  // namespace

TEST_CASE("rbf_phi kernel menu") {
  CHECK(rbf_phi("linear", 1.0) == 1.0);
  CHECK(rbf_phi("poly5", 2.0) == 32.0);
  CHECK(rbf_phi("poly4", 1.0) == 0.0);
  CHECK(rbf_phi("tps", 0.0) == 0.0);
  CHECK(rbf_phi("tps", 2.0) == Approx(4.0 * std::log(2.0)));
  CHECK(rbf_phi("cubic", 3.0) == 27.0);
  CHECK(rbf_phi("gauss", 0.0) == 1.0);
  CHECK(rbf_phi("gauss", 1.0) == Approx(std::exp(-1.0)));
  CHECK(rbf_phi("mq", 1.0) == Approx(std::sqrt(2.0)));
  CHECK(rbf_phi("imq", 1.0) == Approx(1.0 / std::sqrt(2.0)));
  CHECK(rbf_phi("iq", 1.0) == Approx(0.5));
  CHECK_THROWS(rbf_phi("linear", -0.5));
  CHECK_THROWS(rbf_phi("spline7", 1.0));
}

TEST_CASE("kriging correlations at anchor points") {
  const auto bin2 = SearchSpace::binary(2);
  const Design a({0, 1}), b({0, 1});
  for (const char* kind : {"ou", "sqexp", "matern32", "matern52", "gower"})
    CHECK(kriging_corr(kind, bin2, a, b, {1.0, 1.0}) == Approx(1.0));

  const auto bin1 = SearchSpace::binary(1);
  CHECK(kriging_corr("ou", bin1, Design({0}), Design({1}), {1.0}) == Approx(std::exp(-1.0)));
  CHECK(kriging_corr("matern32", bin1, Design({1}), Design({1}), {1.0}) == 1.0);

  CHECK_THROWS(kriging_corr("ou", bin1, Design({0}), Design({1}), {0.0}));
  CHECK_THROWS(kriging_corr("ou", bin1, Design({0}), Design({1}), {-1.0}));
}

TEST_CASE("kriging correlations are symmetric and decay monotonically") {
  const auto space = SearchSpace::ordinal(1, 101);
  auto rng = make_rng(3);
  for (const char* kind : {"ou", "sqexp", "matern32", "matern52", "gower"}) {
    double prev = 1.0;
    for (int lvl = 0; lvl <= 100; lvl += 5) {
      const double c = kriging_corr(kind, space, Design({0}), Design({lvl}), {2.5});
      CHECK(c <= prev + 1e-15);
      CHECK(c > 0.0);
      CHECK(c <= 1.0);
      if (lvl > 0) CHECK(c < 1.0);
      prev = c;
    }
    // symmetry on random pairs
    for (int rep = 0; rep < 20; ++rep) {
      const Design x({static_cast<int>(rng() % 101)});
      const Design y({static_cast<int>(rng() % 101)});
      CHECK(kriging_corr(kind, space, x, y, {0.7}) ==
            Approx(kriging_corr(kind, space, y, x, {0.7})));
    }
  }
}

TEST_CASE("rbf linear interpolates two points linearly") {
  const auto space = SearchSpace::ordinal(1, 3);
  const std::vector<Design> X{Design({0}), Design({2})};
  const std::vector<double> Y{0.0, 2.0};
  auto res = fit({SurrogateFamily::rbf, "linear", ""}, space, X, Y);
  REQUIRE(res.feasible());
  CHECK(res.model->predict(Design({0})) == Approx(0.0).margin(1e-9));
  CHECK(res.model->predict(Design({2})) == Approx(2.0).margin(1e-9));
  CHECK(res.model->predict(Design({1})) == Approx(1.0).margin(1e-8));
}

TEST_CASE("fit precondition violations throw") {
  const auto space = SearchSpace::binary(2);
  const std::vector<Design> one{Design({0, 1})};
  const std::vector<double> y1{1.0};
  for (const auto& cfg : full_pool()) CHECK_THROWS(fit(cfg, space, one, y1));

  const std::vector<Design> two{Design({0, 1}), Design({1, 0})};
  CHECK_THROWS(fit({SurrogateFamily::rbf, "linear", ""}, space, two, y1));
}

TEST_CASE("degenerate data yields an infeasible verdict, not a crash") {
  const auto space = SearchSpace::binary(2);
  // duplicated design with conflicting responses: singular correlation
  const std::vector<Design> X{Design({0, 1}), Design({0, 1}), Design({1, 0}), Design({1, 1})};
  const std::vector<double> Y{0.0, 1.0, 2.0, 3.0};
  auto kr = fit({SurrogateFamily::kriging, "sqexp", "const"}, space, X, Y);
  CHECK_FALSE(kr.feasible());
  CHECK_FALSE(kr.infeasible_reason.empty());

  auto rb = fit({SurrogateFamily::rbf, "gauss", ""}, space, X, Y);
  CHECK_FALSE(rb.feasible());
}

TEST_CASE("feasible interpolators reproduce training data") {
  auto rng = make_rng(2024);
  std::vector<SurrogateConfig> interpolating;
  for (const auto& c : full_pool())
    if (c.family == SurrogateFamily::rbf || c.family == SurrogateFamily::kriging)
      interpolating.push_back(c);

  int feasible_fits = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto ds = random_dataset(rng);
    for (const auto& cfg : interpolating) {
      auto res = fit(cfg, ds.space, ds.X, ds.Y);
      if (!res.feasible()) continue;
      ++feasible_fits;
      for (std::size_t i = 0; i < ds.X.size(); ++i) {
        CHECK(res.model->predict(ds.X[i]) == Approx(ds.Y[i]).margin(1e-6));
        const auto [mean, sd] = res.model->predict_with_uncertainty(ds.X[i]);
        CHECK(sd <= 1e-6);
      }
    }
  }
  CHECK(feasible_fits > 50);  // the suite must actually exercise fits
}

TEST_CASE("kriging uncertainty is positive away from data") {
  const auto space = SearchSpace::ordinal(1, 101);
  const std::vector<Design> X{Design({0}), Design({40}), Design({100})};
  const std::vector<double> Y{1.0, -1.0, 0.5};
  auto res = fit({SurrogateFamily::kriging, "matern52", "const"}, space, X, Y);
  REQUIRE(res.feasible());
  const auto [m0, s0] = res.model->predict_with_uncertainty(Design({40}));
  CHECK(m0 == Approx(-1.0).margin(1e-6));
  CHECK(s0 <= 1e-6);
  const auto [m1, s1] = res.model->predict_with_uncertainty(Design({70}));
  CHECK(s1 > 1e-4);
}

TEST_CASE("forest predictions stay on the training range and identical data has zero spread") {
  const auto space = SearchSpace::binary(3);
  auto rng = make_rng(5);
  std::vector<Design> X;
  std::vector<double> Y;
  for (int i = 0; i < 12; ++i) {
    X.push_back(Design({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2),
                        static_cast<int>(rng() % 2)}));
    Y.push_back(std::sin(static_cast<double>(i)));
  }
  auto res = fit({SurrogateFamily::forest, "", ""}, space, X, Y, 7);
  REQUIRE(res.feasible());
  const double lo = *std::min_element(Y.begin(), Y.end());
  const double hi = *std::max_element(Y.begin(), Y.end());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double p = res.model->predict(Design({a, b, c}));
        CHECK(p >= lo - 1e-12);
        CHECK(p <= hi + 1e-12);
      }

  // all training rows identical => all trees are the same single leaf
  const std::vector<Design> Xc(6, Design({1, 0, 1}));
  const std::vector<double> Yc(6, 3.0);
  auto flat = fit({SurrogateFamily::forest, "", ""}, space, Xc, Yc, 11);
  REQUIRE(flat.feasible());
  const auto [mean, sd] = flat.model->predict_with_uncertainty(Design({0, 0, 0}));
  CHECK(mean == Approx(3.0));
  CHECK(sd == 0.0);
}

TEST_CASE("forest refits are deterministic in the seed") {
  auto rng = make_rng(17);
  const auto ds = random_dataset(rng, 5, 15);
  auto a = fit({SurrogateFamily::forest, "", ""}, ds.space, ds.X, ds.Y, 99);
  auto b = fit({SurrogateFamily::forest, "", ""}, ds.space, ds.X, ds.Y, 99);
  REQUIRE(a.feasible());
  REQUIRE(b.feasible());
  for (int rep = 0; rep < 20; ++rep) {
    Design d;
    for (const auto& v : ds.space.variables)
      d.values.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(v.levels)));
    CHECK(a.model->predict(d) == b.model->predict(d));
  }
}

TEST_CASE("svr recovers a noiseless linear target") {
  const auto space = SearchSpace::ordinal(3, 101);
  auto rng = make_rng(31);
  std::vector<Design> X;
  std::vector<double> Y;
  auto linear_target = [](const Design& d) {
    double s = 0;
    for (int j = 0; j < d.size(); ++j) s += d[j];
    return 0.02 * s - 1.5;
  };
  for (int i = 0; i < 60; ++i) {
    Design d({static_cast<int>(rng() % 101), static_cast<int>(rng() % 101),
              static_cast<int>(rng() % 101)});
    X.push_back(d);
    Y.push_back(linear_target(d));
  }
  auto res = fit({SurrogateFamily::svr, "linear", ""}, space, X, Y);
  REQUIRE(res.feasible());
  CHECK_FALSE(res.model->supports_uncertainty());

  std::vector<double> y_true, y_pred;
  for (int i = 0; i < 40; ++i) {
    Design d({static_cast<int>(rng() % 101), static_cast<int>(rng() % 101),
              static_cast<int>(rng() % 101)});
    y_true.push_back(linear_target(d));
    y_pred.push_back(res.model->predict(d));
  }
  CHECK(r2_score(y_true, y_pred) >= 0.99);

  CHECK_THROWS(res.model->predict_with_uncertainty(X[0]));
}

TEST_CASE("r2_score matches hand computations") {
  CHECK(r2_score({1, 2, 3}, {1, 2, 3}) == 1.0);
  CHECK(r2_score({1, 2, 3}, {2, 2, 2}) == Approx(0.0));
  CHECK(r2_score({1, 2, 3}, {1, 2, 4}) == Approx(0.5));
  CHECK_THROWS(r2_score({2, 2, 2}, {1, 2, 3}));
  CHECK_THROWS(r2_score({1, 2}, {1, 2, 3}));
  CHECK_THROWS(r2_score({1}, {1}));
}

TEST_CASE("the pool enumerates exactly 31 configurations with stable ids") {
  const auto pool = full_pool();
  REQUIRE(pool.size() == 31);
  int rbf = 0, kriging = 0, forest = 0, svr = 0;
  std::set<std::string> ids;
  for (const auto& c : pool) {
    ids.insert(c.id());
    switch (c.family) {
      case SurrogateFamily::rbf: ++rbf; break;
      case SurrogateFamily::kriging: ++kriging; break;
      case SurrogateFamily::forest: ++forest; break;
      case SurrogateFamily::svr: ++svr; break;
    }
  }
  CHECK(rbf == 9);
  CHECK(kriging == 15);
  CHECK(forest == 1);
  CHECK(svr == 6);
  CHECK(ids.size() == 31);
  CHECK(ids.contains("kriging:matern52:linear"));
  CHECK(ids.contains("rbf:poly5"));
  CHECK(ids.contains("svr:poly3"));
  CHECK(ids.contains("forest"));
  CHECK(config_from_id("kriging:gower:quad").trend == "quad");
  CHECK_THROWS(config_from_id("kriging:cauchy:const"));
}

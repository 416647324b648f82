#include <doctest.h>

#include <cmath>

#include "oversmooth/measures.hpp"
#include "support.hpp"

using namespace oversmooth;

namespace {

Matrix col(std::initializer_list<double> v) {
  Matrix x(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double d : v) x(i++, 0) = d;
  return x;
}

// (2/v) tr(X^T L X) with a dense Laplacian.
double trace_oracle(const Matrix& x, const Graph& g) {
  const Eigen::MatrixXd xd = x;
  return 2.0 / static_cast<double>(g.node_count()) * (xd.transpose() * testing::dense_laplacian(g) * xd).trace();
}

MeasureSeries make_series(const std::vector<double>& values) {
  MeasureSeries s;
  s.measure = "m";
  s.run_id = "r";
  for (std::size_t i = 0; i < values.size(); ++i) s.push(static_cast<double>(i), values[i]);
  return s;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("dirichlet energy hand-evaluated values") {
  CHECK(dirichlet_energy(col({0, 1}), path(2)) == doctest::Approx(1.0));
  CHECK(dirichlet_energy(col({0, 1, 2}), complete(3)) == doctest::Approx(4.0));
  CHECK(dirichlet_measure(col({0, 1, 2}), complete(3)) == doctest::Approx(2.0));
  CHECK(dirichlet_energy(Matrix::Constant(7, 3, 2.5), ring(7)) == 0.0);
  CHECK(dirichlet_measure(Matrix::Constant(7, 3, 2.5), ring(7)) == 0.0);
}

TEST_CASE("dirichlet energy p-norm and degree normalization") {
  // |0 - 1|^3 over both directions, divided by v = 2.
  CHECK(dirichlet_energy(col({0, 2}), path(2), {.p = 3.0}) == doctest::Approx(8.0));
  CHECK(dirichlet_measure(col({0, 2}), path(2), {.p = 3.0}) == doctest::Approx(2.0));
  // Rows proportional to sqrt(1 + d_i) vanish under the normalized variant.
  const Graph s = star(5);
  Matrix x(5, 1);
  for (NodeId i = 0; i < 5; ++i) x(i, 0) = std::sqrt(1.0 + static_cast<double>(s.degree(i)));
  CHECK(dirichlet_energy(x, s, {.p = 2.0, .degree_normalized = true}) == doctest::Approx(0.0));
  CHECK(dirichlet_energy(x, s) > 0.1);
}

TEST_CASE("dirichlet energy matches the Laplacian trace oracle") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t v = 5 + seed % 60;
    const Graph g = testing::random_graph(v, 0.15, seed);
    const Matrix x = testing::random_matrix(static_cast<Eigen::Index>(v), 1 + seed % 5, seed + 1000);
    const double e = dirichlet_energy(x, g);
    const double o = trace_oracle(x, g);
    if (g.edge_count() == 0)
      CHECK(e == 0.0);
    else
      CHECK(testing::rel_err(e, o) <= 1e-10);
  }
}

TEST_CASE("measures are permutation invariant") {
  const Graph g = testing::random_graph(30, 0.2, 11);
  const Matrix x = testing::random_matrix(30, 4, 12);
  const auto perm = testing::random_permutation(30, 13);
  const Graph h = permute(g, perm);
  const Matrix y = testing::permute_rows(x, perm);
  CHECK(dirichlet_energy(y, h) == doctest::Approx(dirichlet_energy(x, g)).epsilon(1e-12));
  CHECK(mad(y, h) == doctest::Approx(mad(x, g)).epsilon(1e-12));
}

TEST_CASE("dirichlet is translation invariant and homogeneous") {
  const Graph g = grid2d(5, 6);
  const Matrix x = testing::random_matrix(30, 3, 2);
  Matrix shifted = x;
  shifted.rowwise() += RowVector::LinSpaced(3, -4.0, 7.0);
  CHECK(dirichlet_measure(shifted, g) == doctest::Approx(dirichlet_measure(x, g)).epsilon(1e-12));
  CHECK(dirichlet_measure(3.5 * x, g) == doctest::Approx(3.5 * dirichlet_measure(x, g)).epsilon(1e-12));
}

TEST_CASE("mad hand-evaluated values") {
  Matrix x(2, 2);
  x << 1, 0, 0, 1;
  CHECK(mad(x, path(2)) == doctest::Approx(1.0));
  CHECK(mad(Matrix::Constant(5, 3, -2.0), ring(5)) == doctest::Approx(0.0).epsilon(1e-15));
  const Matrix pos = (testing::random_matrix(10, 1, 3).array().abs() + 0.1).matrix();
  CHECK(mad(pos, ring(10)) == doctest::Approx(0.0));
}

TEST_CASE("mad is scale invariant and bounded by 4e/v") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = testing::random_graph(40, 0.1, seed + 50);
    const Matrix x = testing::random_matrix(40, 5, seed + 60);
    const double m = mad(x, g);
    CHECK(m >= 0.0);
    CHECK(m <= 4.0 * static_cast<double>(g.edge_count()) / 40.0 + 1e-12);
    CHECK(mad(0.01 * x, g) == doctest::Approx(m).epsilon(1e-12));
    CHECK(mad(1e4 * x, g) == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("mad ignores zero rows") {
  Matrix x(3, 2);
  x << 0, 0, 1, 0, 0, 1;
  // Only the 1-2 edge contributes, once per direction.
  CHECK(mad(x, complete(3)) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("component sum measure") {
  const Graph g = grid2d(3, 3);
  const Matrix x = testing::random_matrix(9, 2, 5);
  const Measure base = [](const Matrix& a, const Graph& b) { return dirichlet_measure(a, b); };
  CHECK(component_sum_measure(x, g, base) == doctest::Approx(base(x, g)));

  const std::vector<Edge> e{{0, 1}, {2, 3}};
  const Graph two = Graph::from_edges(e, 4);
  CHECK(component_sum_measure(col({5, 5, -1, -1}), two, base) == doctest::Approx(0.0));
  CHECK(base(col({5, 5, -1, -1}), two) == 0.0);  // edges never cross components
  CHECK(component_sum_measure(col({0, 1, 7, 7}), two, base) == doctest::Approx(1.0));
}

TEST_CASE("measure registry") {
  for (const auto& name : known_measures())
    if (name.find('<') == std::string::npos) CHECK_NOTHROW(measure_by_name(name));
  CHECK_THROWS(measure_by_name("nosuch"));
  const Matrix x = col({0, 1, 2});
  CHECK(measure_by_name("dirichlet")(x, complete(3)) == doctest::Approx(2.0));
  CHECK(measure_by_name("dirichlet-energy")(x, complete(3)) == doctest::Approx(4.0));
  CHECK(measure_by_name("dirichlet-p2")(x, complete(3)) == doctest::Approx(2.0));
}

TEST_CASE("feature validation") {
  CHECK_THROWS(dirichlet_energy(Matrix::Zero(3, 1), ring(4)));
  Matrix bad = Matrix::Zero(4, 1);
  bad(2, 0) = std::nan("");
  CHECK_THROWS(dirichlet_energy(bad, ring(4)));
  CHECK_THROWS(dirichlet_energy(col({0, 1}), path(2), {.p = 0.5}));
}

TEST_CASE("axiom verification") {
  const Measure dm = [](const Matrix& a, const Graph& b) { return dirichlet_measure(a, b); };
  const auto ok = verify_axioms(dm, complete(4), 1000, 1e-9);
  CHECK(ok.all_pass());
  CHECK_FALSE(ok.counterexample.has_value());

  const Measure m = [](const Matrix& a, const Graph& b) { return mad(a, b); };
  const auto bad = verify_axioms(m, ring(6), 1000, 1e-9, {.width = 1, .positive_features = true});
  CHECK_FALSE(bad.nonconstant_positive);
  REQUIRE(bad.counterexample.has_value());
  CHECK(bad.counterexample->condition == 1);
  // The reported matrix really is non-constant with zero MAD.
  CHECK(dirichlet_measure(bad.counterexample->x, ring(6)) > 0.0);
  CHECK(mad(bad.counterexample->x, ring(6)) <= 1e-9);

  const Measure raw = [](const Matrix& a, const Graph& b) { return dirichlet_energy(a, b); };
  const auto sq = verify_axioms(raw, ring(6), 1000, 1e-9);
  CHECK_FALSE(sq.subadditive);
  REQUIRE(sq.counterexample.has_value());
  CHECK(sq.counterexample->condition == 2);
  REQUIRE(sq.counterexample->y.has_value());
  const Matrix& a = sq.counterexample->x;
  const Matrix& b = *sq.counterexample->y;
  CHECK(raw(a + b, ring(6)) > raw(a, ring(6)) + raw(b, ring(6)));
}

TEST_CASE("fit_decay on constructed series") {
  std::vector<double> v;
  for (int n = 0; n <= 20; ++n) v.push_back(100.0 * std::exp(-0.5 * n));
  auto f = fit_decay(make_series(v));
  CHECK(f.classification == DecayClass::exponential);
  CHECK(f.c1 == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(f.c2 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(f.r2_exp == doctest::Approx(1.0));

  v.clear();
  for (int n = 0; n <= 100; ++n) v.push_back(1.0 / (n + 1));
  f = fit_decay(make_series(v));
  CHECK(f.classification == DecayClass::algebraic);
  CHECK(f.r2_alg > f.r2_exp);
  CHECK(f.alg_exponent == doctest::Approx(1.0).epsilon(1e-9));

  f = fit_decay(make_series(std::vector<double>(30, 3.0)));
  CHECK(f.classification == DecayClass::constant);
  CHECK(f.c2 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit_decay floor truncation") {
  std::vector<double> v;
  for (int n = 0; n <= 40; ++n) v.push_back(std::exp(-1.0 * n));
  v.push_back(0.0);
  v.push_back(0.0);
  const auto f = fit_decay(make_series(v));
  REQUIRE(f.floor_index.has_value());
  CHECK(v[*f.floor_index] < 1e-12);
  for (std::size_t i = 0; i < *f.floor_index; ++i) CHECK(v[i] >= 1e-12);
  CHECK(f.points_used == *f.floor_index);
  CHECK(f.classification == DecayClass::exponential);
  CHECK(f.c2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_decay is invariant to positive scaling") {
  for (double rate : {0.1, 0.7}) {
    std::vector<double> v, w;
    for (int n = 0; n <= 30; ++n) {
      v.push_back(std::exp(-rate * n) * (1.0 + 0.05 * std::sin(n)));
      w.push_back(7.25 * v.back());
    }
    const auto a = fit_decay(make_series(v));
    const auto b = fit_decay(make_series(w));
    CHECK(a.classification == b.classification);
    CHECK(a.c2 == doctest::Approx(b.c2).epsilon(1e-9));
    CHECK(b.c1 == doctest::Approx(7.25 * a.c1).epsilon(1e-9));
    CHECK(a.r2_exp == doctest::Approx(b.r2_exp).epsilon(1e-9));
  }
}

TEST_CASE("fit_decay warmup and errors") {
  std::vector<double> v{50.0, 20.0};
  for (int n = 0; n < 30; ++n) v.push_back(1.0 + 0.01 * (n % 3));
  CHECK(fit_decay(make_series(v)).classification != DecayClass::constant);
  CHECK(fit_decay(make_series(v), {.warmup = 2}).classification == DecayClass::constant);

  CHECK_THROWS(fit_decay(make_series({1.0, 0.5})));
  CHECK_THROWS(fit_decay(make_series({1.0, -0.5, 0.2, 0.1})));
}

TEST_CASE("exponential classification always has a positive rate") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.3, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v;
    double x = 1.0;
    for (int n = 0; n < 25; ++n) {
      x *= std::exp(-u(rng));
      v.push_back(x);
    }
    const auto f = fit_decay(make_series(v));
    if (f.classification == DecayClass::exponential) CHECK(f.c2 > 0.0);
    CHECK(f.r2_exp >= 0.0);
    CHECK(f.r2_exp <= 1.0 + 1e-12);
  }
}

}  // TEST_SUITE

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oversmooth/continuous.hpp"
#include "oversmooth/harness.hpp"
#include "support.hpp"

using namespace oversmooth;

namespace {

// exp(-L t) X0 through the dense eigendecomposition of L.
Eigen::MatrixXd heat_exact(const Graph& g, const Matrix& x0, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::dense_laplacian(g));
  const Eigen::VectorXd decay = (-t * es.eigenvalues().array()).exp();
  return es.eigenvectors() * decay.asDiagonal() * es.eigenvectors().transpose() * Eigen::MatrixXd(x0);
}

double spectral_gap(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::dense_laplacian(g));
  return es.eigenvalues()(1);
}

Matrix final_state(const OdeConfig& c, const Graph& g, const Matrix& x0) {
  Matrix last;
  integrate(c, g, x0, [&](double, const Matrix& x) { last = x; });
  return last;
}

}  // namespace

TEST_SUITE("continuous") {

TEST_CASE("config parsing and validation") {
  for (auto f : {VectorField::heat_diffusion, VectorField::graphcon_ode, VectorField::gcn_field})
    CHECK(parse_vector_field(to_string(f)) == f);
  for (auto i : {Integrator::euler, Integrator::rk4}) CHECK(parse_integrator(to_string(i)) == i);
  CHECK_THROWS(parse_vector_field("wave"));

  OdeConfig c;
  CHECK(step_count(c) == 1000);
  CHECK(effective_stride(c) == 10);
  c.dt = 0.3;
  CHECK_THROWS(validate(c));
  c = {};
  c.dt = 20.0;
  CHECK_THROWS(validate(c));
  c = {};
  c.sample_stride = 3;
  CHECK_THROWS(validate(c));
  c.sample_stride = 4;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("edgeless graph keeps the input and is not over-smoothing") {
  const Graph g = Graph::from_edges({}, 6);
  const Matrix x0 = testing::random_matrix(6, 3, 1);
  OdeConfig c;
  c.t_end = 2.0;
  CHECK((final_state(c, g, x0).array() == x0.array()).all());
  const auto s = integrate_record(c, g, x0);
  CHECK(s.size() == 101);
  for (double v : s.values) CHECK(v == 0.0);
  CHECK(euler_stable_step(g) == std::numeric_limits<double>::infinity());
}

TEST_CASE("heat diffusion matches the matrix exponential") {
  const Graph g = testing::random_graph(20, 0.25, 3);
  const Matrix x0 = testing::random_matrix(20, 2, 4);
  OdeConfig c;
  c.t_end = 1.0;
  c.dt = 1e-2;
  const Eigen::MatrixXd exact = heat_exact(g, x0, 1.0);
  CHECK((Eigen::MatrixXd(final_state(c, g, x0)) - exact).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("integrators converge at their order") {
  const Graph g = ring(10);
  const Matrix x0 = testing::random_matrix(10, 1, 5);
  const Eigen::MatrixXd exact = heat_exact(g, x0, 1.0);
  auto err = [&](Integrator in, double dt) {
    OdeConfig c;
    c.t_end = 1.0;
    c.dt = dt;
    c.integrator = in;
    return (Eigen::MatrixXd(final_state(c, g, x0)) - exact).norm();
  };
  const double euler_ratio = err(Integrator::euler, 0.02) / err(Integrator::euler, 0.01);
  CHECK(euler_ratio == doctest::Approx(2.0).epsilon(0.1));
  const double rk4_ratio = err(Integrator::rk4, 0.1) / err(Integrator::rk4, 0.05);
  CHECK(rk4_ratio == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("rk4 and euler agree to first order in dt") {
  // Euler's global error on mode lambda is about t dt lambda^2 / 2, so the
  // sampled series differ by O(dt); the gap must halve with the step.
  const Graph g = ring(10);
  const Matrix x0 = init_features(10, 8, 1);
  auto worst = [&](double dt) {
    OdeConfig c;
    c.t_end = 2.0;
    c.dt = dt;
    c.sample_stride = static_cast<std::size_t>(0.1 / dt + 0.5);
    c.integrator = Integrator::rk4;
    const auto a = integrate_record(c, g, x0);
    c.integrator = Integrator::euler;
    const auto b = integrate_record(c, g, x0);
    REQUIRE(a.size() == b.size());
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.index[i] == doctest::Approx(b.index[i]));
      w = std::max(w, testing::rel_err(a.values[i], b.values[i]));
    }
    return w;
  };
  const double coarse = worst(2e-3);
  const double fine = worst(1e-3);
  CHECK(fine < 2e-3);
  CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.05));
  CHECK(worst(1e-4) < 1e-4 * 1.5);
}

TEST_CASE("heat diffusion conserves component means") {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 3}};
  const Graph g = Graph::from_edges(e, 6);
  const Matrix x0 = testing::random_matrix(6, 2, 7);
  for (auto in : {Integrator::euler, Integrator::rk4}) {
    OdeConfig c;
    c.t_end = 3.0;
    c.integrator = in;
    integrate(c, g, x0, [&](double, const Matrix& x) {
      CHECK((x.topRows(3).colwise().mean() - x0.topRows(3).colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((x.bottomRows(3).colwise().mean() - x0.bottomRows(3).colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
    });
  }
}

TEST_CASE("heat rate matches the spectral gap") {
  const Graph g = ring(10);
  const double gap = spectral_gap(g);
  OdeConfig c;
  c.t_end = 20.0;
  REQUIRE(c.t_end >= 5.0 / gap);
  c.dt = 1e-2;
  const auto s = integrate_record(c, g, init_features(10, 8, 1));
  const auto f = detect_ct_oversmoothing(s);
  CHECK(f.classification == DecayClass::exponential);
  CHECK(testing::rel_err(f.c2, gap) < 0.1);
}

TEST_CASE("measure series scales with the input") {
  const Graph g = grid2d(3, 3);
  const Matrix x0 = testing::random_matrix(9, 2, 8);
  OdeConfig c;
  c.t_end = 1.0;
  const auto a = integrate_record(c, g, x0);
  const auto b = integrate_record(c, g, 4.0 * x0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b.values[i] == doctest::Approx(4.0 * a.values[i]).epsilon(1e-12));
}

TEST_CASE("undamped graphcon ode is not exponential") {
  OdeConfig c;
  c.field = VectorField::graphcon_ode;
  c.t_end = 20.0;
  c.dt = 1e-2;
  const auto s = integrate_record(c, ring(10), init_features(10, 8, 2));
  CHECK(detect_ct_oversmoothing(s).classification != DecayClass::exponential);
}

TEST_CASE("euler stability bound") {
  const Graph g = ring(10);
  CHECK(euler_stable_step(g) == doctest::Approx(0.25).epsilon(1e-8));
  OdeConfig c;
  c.integrator = Integrator::euler;
  // |1 - 4 dt| = 3 per step overflows a double well within 1000 steps.
  c.t_end = 1000.0;
  c.dt = 1.0;
  CHECK_THROWS_AS(integrate_record(c, g, init_features(10, 2, 3)), BlowUpError);
}

TEST_CASE("gcn field is deterministic in the seed") {
  OdeConfig c;
  c.field = VectorField::gcn_field;
  c.activation = Activation::tanh;
  c.t_end = 1.0;
  const Matrix x0 = init_features(9, 4, 1);
  const auto a = integrate_record(c, grid2d(3, 3), x0);
  const auto b = integrate_record(c, grid2d(3, 3), x0);
  CHECK(a.values == b.values);
  c.seed = 1;
  CHECK(integrate_record(c, grid2d(3, 3), x0).values != a.values);
}

}  // TEST_SUITE

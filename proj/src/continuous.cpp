#include "oversmooth/continuous.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "oversmooth/harness.hpp"
#include "oversmooth/random.hpp"

namespace oversmooth {

std::string to_string(VectorField f) {
  switch (f) {
    case VectorField::heat_diffusion: return "heat";
    case VectorField::graphcon_ode: return "graphcon";
    case VectorField::gcn_field: return "gcn";
  }
  return "heat";
}

VectorField parse_vector_field(const std::string& name) {
  if (name == "heat" || name == "heat_diffusion") return VectorField::heat_diffusion;
  if (name == "graphcon" || name == "graphcon_ode") return VectorField::graphcon_ode;
  if (name == "gcn" || name == "gcn_field") return VectorField::gcn_field;
  throw std::invalid_argument(fmt::format("unknown dynamics '{}'", name));
}

std::string to_string(Integrator i) { return i == Integrator::euler ? "euler" : "rk4"; }

Integrator parse_integrator(const std::string& name) {
  if (name == "euler") return Integrator::euler;
  if (name == "rk4") return Integrator::rk4;
  throw std::invalid_argument(fmt::format("unknown integrator '{}'", name));
}

OdeCoupling parse_ode_coupling(const std::string& name) {
  if (name == "neg-laplacian" || name == "laplacian") return OdeCoupling::neg_laplacian;
  if (name == "gcn") return OdeCoupling::gcn;
  throw std::invalid_argument(fmt::format("unknown coupling '{}'", name));
}

std::size_t step_count(const OdeConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw std::invalid_argument("dt must be positive");
  if (!(c.t_end > c.dt) || !std::isfinite(c.t_end)) throw std::invalid_argument("t_end must exceed dt");
  const double ratio = c.t_end / c.dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * steps)
    throw std::invalid_argument(fmt::format("t_end {} is not a whole number of steps of {}", c.t_end, c.dt));
  return static_cast<std::size_t>(steps);
}

std::size_t effective_stride(const OdeConfig& c) {
  const std::size_t steps = step_count(c);
  if (c.sample_stride) {
    if (*c.sample_stride < 1) throw std::invalid_argument("sample stride must be at least 1");
    if (steps % *c.sample_stride != 0)
      throw std::invalid_argument(fmt::format("stride {} does not divide {} steps", *c.sample_stride, steps));
    return *c.sample_stride;
  }
  for (std::size_t s = std::max<std::size_t>(1, steps / 100); s > 1; --s)
    if (steps % s == 0) return s;
  return 1;
}

void validate(const OdeConfig& c) {
  effective_stride(c);
  if (c.gamma < 0.0 || c.alpha < 0.0) throw std::invalid_argument("gamma and alpha must be non-negative");
  measure_by_name(c.measure);
}

namespace {

// State is [X | Y] for graphcon_ode and X otherwise.
class Field {
 public:
  Field(const OdeConfig& c, const Graph& g, Eigen::Index width)
      : c_(c), width_(width), laplacian_(laplacian(g)), normalized_(normalized_operator(g)) {
    if (c.field == VectorField::gcn_field || (c.field == VectorField::graphcon_ode && c.coupling == OdeCoupling::gcn))
      weight_ = init_weights(static_cast<std::size_t>(width), static_cast<std::size_t>(width),
                             derive_seed(c.seed, {21}));
  }

  Matrix operator()(const Matrix& s) const {
    switch (c_.field) {
      case VectorField::heat_diffusion: return -laplacian_.apply(s);
      case VectorField::gcn_field: return activate(normalized_.apply(s * weight_), c_.activation);
      case VectorField::graphcon_ode: {
        const Matrix x = s.leftCols(width_);
        const Matrix y = s.rightCols(width_);
        const Matrix f = c_.coupling == OdeCoupling::gcn ? Matrix(normalized_.apply(x * weight_))
                                                         : Matrix(-laplacian_.apply(x));
        Matrix out(s.rows(), s.cols());
        out.leftCols(width_) = y;
        out.rightCols(width_) = activate(f, c_.activation) - c_.gamma * x - c_.alpha * y;
        return out;
      }
    }
    return s;
  }

 private:
  const OdeConfig& c_;
  Eigen::Index width_;
  CsrMatrix laplacian_;
  CsrMatrix normalized_;
  Matrix weight_;
};

}  // namespace

void integrate(const OdeConfig& config, const Graph& g, const Matrix& x0,
               const std::function<void(double, const Matrix&)>& sample) {
  validate(config);
  if (static_cast<std::size_t>(x0.rows()) != g.node_count())
    throw std::invalid_argument(fmt::format("features have {} rows but graph has {} nodes", x0.rows(), g.node_count()));
  if (!x0.allFinite()) throw std::invalid_argument("initial features contain non-finite values");
  const std::size_t steps = step_count(config);
  const std::size_t stride = effective_stride(config);
  const Eigen::Index m = x0.cols();
  const Field f(config, g, m);
  const double h = config.dt;

  Matrix s = x0;
  if (config.field == VectorField::graphcon_ode) {
    s = Matrix::Zero(x0.rows(), 2 * m);
    s.leftCols(m) = x0;
  }
  sample(0.0, s.leftCols(m));
  for (std::size_t k = 1; k <= steps; ++k) {
    if (config.integrator == Integrator::euler) {
      s += h * f(s);
    } else {
      const Matrix k1 = f(s);
      const Matrix k2 = f(s + 0.5 * h * k1);
      const Matrix k3 = f(s + 0.5 * h * k2);
      const Matrix k4 = f(s + h * k3);
      s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double t = static_cast<double>(k) * h;
    if (!s.allFinite()) throw BlowUpError(fmt::format("state became non-finite at t = {}", t), t);
    if (k % stride == 0) sample(t, s.leftCols(m));
  }
}

MeasureSeries integrate_record(const OdeConfig& config, const Graph& g, const Matrix& x0) {
  const Measure mu = measure_by_name(config.measure);
  MeasureSeries out{config.measure, fmt::format("ct-{}-{}-s{}", to_string(config.field), to_string(config.integrator),
                                                config.seed),
                    {}, {}};
  integrate(config, g, x0, [&](double t, const Matrix& x) { out.push(t, mu(x, g)); });
  return out;
}

DecayFit detect_ct_oversmoothing(const MeasureSeries& series, const FitOptions& opts) {
  return fit_decay(series, opts);
}

double euler_stable_step(const Graph& g) {
  if (g.edge_count() == 0) return std::numeric_limits<double>::infinity();
  const auto r = power_iteration(laplacian(g));
  return 1.0 / r.eigenvalue;
}

}  // namespace oversmooth

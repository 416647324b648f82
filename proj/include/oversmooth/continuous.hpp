#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "oversmooth/graph.hpp"
#include "oversmooth/layers.hpp"
#include "oversmooth/measures.hpp"

namespace oversmooth {

// heat_diffusion: X' = -L X.
// graphcon_ode:   X' = Y, Y' = act(F(X)) - gamma X - alpha Y, with Y(0) = 0.
// gcn_field:      X' = act(P X W), W fixed and drawn from the seed.
enum class VectorField { heat_diffusion, graphcon_ode, gcn_field };
enum class Integrator { euler, rk4 };
// Coupling F inside graphcon_ode.
enum class OdeCoupling { neg_laplacian, gcn };

std::string to_string(VectorField f);
VectorField parse_vector_field(const std::string& name);
std::string to_string(Integrator i);
Integrator parse_integrator(const std::string& name);
OdeCoupling parse_ode_coupling(const std::string& name);

struct OdeConfig {
  VectorField field = VectorField::heat_diffusion;
  double t_end = 10.0;
  double dt = 1e-2;
  // Unset: the largest divisor of the step count giving at least 100 intervals.
  std::optional<std::size_t> sample_stride;
  Integrator integrator = Integrator::rk4;
  std::uint64_t seed = 0;
  Activation activation = Activation::identity;  // ignored by heat_diffusion
  double gamma = 0.0;
  double alpha = 0.0;
  OdeCoupling coupling = OdeCoupling::neg_laplacian;
  std::string measure = "dirichlet";
};

// Number of integration steps; throws unless t_end / dt is an integer.
std::size_t step_count(const OdeConfig& config);
std::size_t effective_stride(const OdeConfig& config);
void validate(const OdeConfig& config);

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time) : std::runtime_error(what), time(time) {}
  double time;
};

// Calls `sample(t, X)` at t = 0 and every stride steps.
void integrate(const OdeConfig& config, const Graph& g, const Matrix& x0,
               const std::function<void(double, const Matrix&)>& sample);

MeasureSeries integrate_record(const OdeConfig& config, const Graph& g, const Matrix& x0);

// fit_decay on the time axis; exponential means over-smoothing in time.
DecayFit detect_ct_oversmoothing(const MeasureSeries& series, const FitOptions& opts = {});

// 1 / lambda_max(L), the documented forward-Euler step bound for heat diffusion.
// An edgeless graph has no bound and returns +infinity.
double euler_stable_step(const Graph& g);

}  // namespace oversmooth

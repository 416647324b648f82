#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "oversmooth/measures.hpp"

namespace oversmooth {

std::string to_string(DecayClass c) {
  switch (c) {
    case DecayClass::exponential: return "exponential";
    case DecayClass::algebraic: return "algebraic";
    case DecayClass::constant: return "constant";
    case DecayClass::undetermined: return "undetermined";
  }
  return "undetermined";
}

void check_series(const MeasureSeries& s) {
  if (s.index.size() != s.values.size())
    throw std::invalid_argument(fmt::format("series '{}' has {} indices but {} values", s.measure,
                                            s.index.size(), s.values.size()));
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (!(s.values[k] >= 0.0))
      throw std::invalid_argument(fmt::format("series '{}' has invalid value {} at position {}", s.measure,
                                              s.values[k], k));
    if (k > 0 && !(s.index[k] > s.index[k - 1]))
      throw std::invalid_argument(fmt::format("series '{}' index is not strictly increasing at position {}",
                                              s.measure, k));
  }
}

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy <= 0.0) {
    f.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = y[k] - (f.intercept + f.slope * x[k]);
      ss_res += r * r;
    }
    f.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return f;
}

}  // namespace

DecayFit fit_decay(const MeasureSeries& series, const FitOptions& opts) {
  check_series(series);
  DecayFit fit;
  std::vector<double> t, logv;
  for (std::size_t k = opts.warmup; k < series.size(); ++k) {
    if (series.values[k] < opts.floor) {
      fit.floor_index = k;
      break;
    }
    t.push_back(series.index[k]);
    logv.push_back(std::log(series.values[k]));
  }
  fit.points_used = t.size();
  if (t.size() < 4)
    throw std::invalid_argument(
        fmt::format("series '{}' has only {} usable points above the floor {:g}; need at least 4", series.measure,
                    t.size(), opts.floor));

  const LineFit exp_fit = least_squares(t, logv);
  fit.c2 = -exp_fit.slope;
  fit.c1 = std::exp(exp_fit.intercept);
  fit.r2_exp = exp_fit.r2;

  const double origin = t.front();
  const double spacing = t[1] - t[0];
  std::vector<double> logt(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) logt[k] = std::log(t[k] - origin + spacing);
  const LineFit alg_fit = least_squares(logt, logv);
  fit.r2_alg = alg_fit.r2;
  fit.alg_exponent = -alg_fit.slope;

  const auto [lo, hi] = std::minmax_element(logv.begin(), logv.end());
  if (*hi - *lo < opts.constant_band) {
    fit.classification = DecayClass::constant;
  } else if (fit.c2 >= opts.min_rate && fit.r2_exp >= opts.min_r2 && fit.r2_exp >= fit.r2_alg) {
    fit.classification = DecayClass::exponential;
  } else if (fit.r2_alg >= opts.min_r2 && fit.alg_exponent > 0.0) {
    fit.classification = DecayClass::algebraic;
  } else {
    fit.classification = DecayClass::undetermined;
  }
  return fit;
}

}  // namespace oversmooth

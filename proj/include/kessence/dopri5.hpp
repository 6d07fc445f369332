#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "kessence/errors.hpp"

namespace kessence {

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double h_init = 0.0;  // 0 selects a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 10'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with the fourth-order
// continuous extension from Hairer, Norsett & Wanner. Error control uses the
// max norm of err_i / (abs_tol + rel_tol * max(|y_i|, |y_new_i|)).
template <std::size_t N>
class DormandPrince45 {
public:
  using State = std::array<double, N>;

  explicit DormandPrince45(IntegratorOptions options = {}) : options_(options) {}

  const IntegratorStats& stats() const { return stats_; }

  // Integrates y' = rhs(t, y) from t0 to t_end, calling observe(t, y) at each
  // time in `outputs` (ascending, inside [t0, t_end]). rhs may throw to abort.
  template <class Rhs, class Observer>
  State integrate(Rhs&& rhs, double t0, State y, double t_end, std::span<const double> outputs,
                  Observer&& observe) {
    stats_ = {};
    if (!(t_end > t0)) throw StepFailure("integrate: t_end must exceed t0");

    std::size_t next_out = 0;
    while (next_out < outputs.size() && outputs[next_out] <= t0) {
      observe(t0, y);
      ++next_out;
    }

    double t = t0;
    std::array<State, 7> k{};
    k[0] = eval(rhs, t, y);
    double h = options_.h_init > 0.0 ? options_.h_init : initial_step(rhs, t, y, k[0], t_end);
    bool last_rejected = false;

    while (t < t_end) {
      if (stats_.accepted + stats_.rejected >= options_.max_steps) {
        throw StepFailure("integrate: step budget exhausted");
      }
      h = std::min(h, options_.h_max);
      const bool final_step = t + 1.01 * h >= t_end;
      if (final_step) h = t_end - t;
      if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))) {
        throw StepFailure("integrate: step size underflow");
      }

      State tmp;
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * A21 * k[0][i];
      k[1] = eval(rhs, t + C2 * h, tmp);
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
      k[2] = eval(rhs, t + C3 * h, tmp);
      for (std::size_t i = 0; i < N; ++i) {
        tmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
      }
      k[3] = eval(rhs, t + C4 * h, tmp);
      for (std::size_t i = 0; i < N; ++i) {
        tmp[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
      }
      k[4] = eval(rhs, t + C5 * h, tmp);
      for (std::size_t i = 0; i < N; ++i) {
        tmp[i] = y[i] + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] +
                             A65 * k[4][i]);
      }
      const double t_new = final_step ? t_end : t + h;
      k[5] = eval(rhs, t_new, tmp);
      State y_new;
      for (std::size_t i = 0; i < N; ++i) {
        y_new[i] = y[i] + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] +
                               B6 * k[5][i]);
      }
      k[6] = eval(rhs, t_new, y_new);

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] +
                              E6 * k[5][i] + E7 * k[6][i]);
        const double sc =
            options_.abs_tol + options_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / sc);
      }

      if (!std::isfinite(err) || err > 1.0) {
        ++stats_.rejected;
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= fac;
        last_rejected = true;
        continue;
      }

      while (next_out < outputs.size() && outputs[next_out] <= t_new) {
        const double to = outputs[next_out];
        if (to == t_new) {
          observe(to, y_new);
        } else {
          observe(to, dense(y, y_new, k, h, (to - t) / h));
        }
        ++next_out;
      }
      t = t_new;
      y = y_new;
      k[0] = k[6];
      ++stats_.accepted;
      const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, last_rejected ? 1.0 : 5.0);
      last_rejected = false;
    }
    return y;
  }

private:
  static constexpr double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0;
  static constexpr double A21 = 1.0 / 5.0;
  static constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
  static constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
  static constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                          A54 = -212.0 / 729.0;
  static constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                          A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
  static constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                          B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
  static constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                          E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;
  static constexpr double D1 = -12715105075.0 / 11282082432.0,
                          D3 = 87487479700.0 / 32700410799.0,
                          D4 = -10690763975.0 / 1880347072.0,
                          D5 = 701980252875.0 / 199316789632.0,
                          D6 = -1453857185.0 / 822651844.0, D7 = 69997945.0 / 29380423.0;

  template <class Rhs>
  State eval(Rhs& rhs, double t, const State& y) {
    ++stats_.rhs_evals;
    return rhs(t, y);
  }

  static double norm(const State& v, const State& scale) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s = std::max(s, std::abs(v[i]) / scale[i]);
    return s;
  }

  template <class Rhs>
  double initial_step(Rhs& rhs, double t, const State& y, const State& f0, double t_end) {
    State scale;
    for (std::size_t i = 0; i < N; ++i) scale[i] = options_.abs_tol + options_.rel_tol * std::abs(y[i]);
    const double d0 = norm(y, scale);
    const double d1 = norm(f0, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t);
    State y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * f0[i];
    const State f1 = eval(rhs, t + h0, y1);
    State df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
    const double d2 = norm(df, scale) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, t_end - t});
  }

  static State dense(const State& y0, const State& y1, const std::array<State, 7>& k, double h,
                     double theta) {
    const double theta1 = 1.0 - theta;
    State out;
    for (std::size_t i = 0; i < N; ++i) {
      const double diff = y1[i] - y0[i];
      const double bspl = h * k[0][i] - diff;
      const double r4 = diff - h * k[6][i] - bspl;
      const double r5 = h * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] +
                             D6 * k[5][i] + D7 * k[6][i]);
      out[i] = y0[i] + theta * (diff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
    return out;
  }

  IntegratorOptions options_;
  IntegratorStats stats_;
};

}  // namespace kessence

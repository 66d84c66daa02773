#include "driftlab/integrate.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <numbers>

#include "driftlab/pendulum.hpp"

namespace driftlab {

namespace odeint = boost::numeric::odeint;
using Vec = std::vector<double>;

double hamiltonian(const SystemParams& params, const TrigPerturbation& f,
                   const FullState& s) {
  FrequencyVector w = frequency_vector(params);
  double h = 0;
  for (int j = 0; j < params.n(); ++j) h += w.omega[j] * s.I[j];
  h += s.p * s.p / 2 +
       (std::cos(s.q) - 1) * (1 + params.mu * f.value(s.phi));
  return h;
}

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

double wrap_2pi(double x) {
  double y = std::fmod(x, two_pi);
  return y < 0 ? y + two_pi : y;
}

// Generic adaptive dopri5 loop with an explicit step-failure budget.
template <class Sys, class Obs>
void adaptive_run(Sys sys, Vec& x, double t0, double t1,
                  const IntegrateSettings& st, Obs observe) {
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<Vec>>(
      st.abs_tol, st.rel_tol);
  double t = t0;
  double dt = (t1 >= t0 ? 1 : -1) * std::abs(st.dt_init);
  double t_last_store = t0;
  observe(x, t);
  int consecutive_fail = 0;
  while ((t1 - t) * (t1 - t0) > 0) {
    if (std::abs(dt) > std::abs(t1 - t)) dt = t1 - t;
    auto res = stepper.try_step(sys, x, t, dt);
    if (res == odeint::fail) {
      if (++consecutive_fail > 500)
        throw IntegrationError("step size underflow", t);
      continue;
    }
    consecutive_fail = 0;
    if (st.dt_store <= 0 || std::abs(t - t_last_store) >= st.dt_store ||
        t == t1) {
      observe(x, t);
      t_last_store = t;
    }
  }
}

}  // namespace

Trajectory integrate_full(const SystemParams& params, const TrigPerturbation& f,
                          const FullState& s0, double t0, double t1,
                          const IntegrateSettings& settings) {
  params.validate();
  SystemParams p = params.normalized();
  const int n = p.n();
  FrequencyVector w = frequency_vector(p);

  // pack: x = (phi[0..n), I[0..n), q, p)
  Vec x(2 * n + 2);
  for (int j = 0; j < n; ++j) x[j] = s0.phi[j];
  for (int j = 0; j < n; ++j) x[n + j] = s0.I[j];
  x[2 * n] = s0.q;
  x[2 * n + 1] = s0.p;

  auto sys = [&](const Vec& y, Vec& dy, double /*t*/) {
    Vec phi(y.begin(), y.begin() + n);
    double q = y[2 * n], pp = y[2 * n + 1];
    double fv = f.value(phi);
    Vec g = f.gradient(phi);
    for (int j = 0; j < n; ++j) dy[j] = w.omega[j];
    double cqm1 = std::cos(q) - 1;
    for (int j = 0; j < n; ++j) dy[n + j] = -p.mu * cqm1 * g[j];
    dy[2 * n] = pp;
    dy[2 * n + 1] = std::sin(q) * (1 + p.mu * fv);
  };

  Trajectory out;
  auto unpack = [&](const Vec& y) {
    FullState s;
    s.phi.resize(n);
    s.I.resize(n);
    for (int j = 0; j < n; ++j) s.phi[j] = wrap_2pi(y[j]);
    for (int j = 0; j < n; ++j) s.I[j] = y[n + j];
    s.q = y[2 * n];
    s.p = y[2 * n + 1];
    return s;
  };
  adaptive_run(sys, x, t0, t1, settings, [&](const Vec& y, double t) {
    out.times.push_back(t);
    out.states.push_back(unpack(y));
  });

  double h0 = hamiltonian(p, f, out.states.front());
  for (const auto& s : out.states)
    out.energy_drift =
        std::max(out.energy_drift, std::abs(hamiltonian(p, f, s) - h0));
  return out;
}

PendulumTrajectory integrate_pendulum(const SystemParams& params,
                                      const TrigPerturbation& f,
                                      const std::vector<double>& A, double q0,
                                      double p0, double t0, double t1,
                                      const IntegrateSettings& settings) {
  params.validate();
  SystemParams p = params.normalized();
  const int n = p.n();
  FrequencyVector w = frequency_vector(p);

  Vec phi(n);
  auto sys = [&](const Vec& y, Vec& dy, double t) {
    for (int j = 0; j < n; ++j) phi[j] = wrap_2pi(w.omega[j] * t + A[j]);
    dy[0] = y[1];
    dy[1] = std::sin(y[0]) * (1 + p.mu * f.value(phi));
  };

  Vec x{q0, p0};
  PendulumTrajectory out;
  adaptive_run(sys, x, t0, t1, settings, [&](const Vec& y, double t) {
    out.times.push_back(t);
    out.q.push_back(y[0]);
    out.p.push_back(y[1]);
  });
  return out;
}

}  // namespace driftlab

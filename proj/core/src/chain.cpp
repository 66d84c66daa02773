#include "driftlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "driftlab/numerics.hpp"
#include "driftlab/pendulum.hpp"
#include "driftlab/splitting.hpp"

namespace driftlab {

namespace {
constexpr double kPi = std::numbers::pi;

double time_scale(const ChainProblem& pr) {  // theta = (eta + s) * scale
  FrequencyVector w = frequency_vector(pr.params);
  return pr.basis.Omega.col(0).norm() / w.norm2;
}

std::vector<double> base_phase(const ChainProblem& pr,
                               const Eigen::VectorXd& a_slow) {
  Eigen::VectorXd A = pr.basis.A_bar;
  for (int j = 0; j < a_slow.size(); ++j)
    A += a_slow[j] * pr.basis.Omega.col(j + 1);
  return std::vector<double>(A.data(), A.data() + A.size());
}

std::vector<double> bump_phase(const ChainProblem& pr,
                               const Eigen::VectorXd& a_slow, double s_i,
                               std::size_t i) {
  Eigen::VectorXd A = pr.basis.A_bar + s_i * pr.basis.Omega.col(0) +
                      (a_slow[0] + pr.schedule.y[i]) * pr.basis.Omega.col(1);
  for (int j = 1; j < a_slow.size(); ++j)
    A += (a_slow[j] + pr.schedule.z[i][j - 1]) * pr.basis.Omega.col(j + 1);
  return std::vector<double>(A.data(), A.data() + A.size());
}

double dI_dot(const ChainProblem& pr, const std::vector<double>& A) {
  auto d = pr.dI();
  double v = 0;
  for (std::size_t j = 0; j < d.size(); ++j) v += d[j] * A[j];
  return v;
}

// one-bump term of the fast reduction
double term_value(const ChainProblem& pr, const Eigen::VectorXd& a_slow,
                  double s_i, std::size_t i) {
  return homoclinic_G(pr.params, pr.f, bump_phase(pr, a_slow, s_i, i), pr.bvp);
}
}  // namespace

std::vector<double> ChainProblem::dI() const {
  std::vector<double> d(I0.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = I0_prime[j] - I0[j];
  return d;
}

double ChainProblem::dI_norm() const {
  double s = 0;
  for (double v : dI()) s += v * v;
  return std::sqrt(s);
}

double heteroclinic_Fk(const ChainProblem& problem, const std::vector<double>& A,
                       const std::vector<double>& thetas) {
  auto sol = solve_k_bump(problem.params, problem.f, A, thetas, problem.bvp);
  return action_of(problem.params, problem.f, sol) - dI_dot(problem, A);
}

double reduced_Hk(const ChainProblem& problem, const Eigen::VectorXd& a_slow,
                  const std::vector<double>& s, ChainMode mode) {
  if (static_cast<int>(s.size()) != problem.k ||
      static_cast<int>(problem.schedule.eta.size()) != problem.k)
    throw InvalidParams("reduced_Hk: inconsistent chain size");
  auto A0 = base_phase(problem, a_slow);
  if (mode == ChainMode::Fast) {
    double v = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      v += term_value(problem, a_slow, s[i], i);
    return v - dI_dot(problem, A0);
  }
  double ts = time_scale(problem);
  std::vector<double> thetas(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    thetas[i] = (problem.schedule.eta[i] + s[i]) * ts;
  if (thetas.back() - thetas.front() > 2000)
    throw InvalidParams(
        "reduced_Hk: exact mode is infeasible for widely spaced epochs");
  return heteroclinic_Fk(problem, A0, thetas);
}

ChainCriticalPoint maximize_chain(const ChainProblem& problem, ChainMode mode,
                                  const ChainOptSettings& settings) {
  const int k = problem.k;
  const int d = static_cast<int>(problem.basis.Omega.rows()) - 1;
  const double rho = problem.cp.rho;
  ChainOptSettings st = settings;
  if (st.value_tol <= 0)
    st.value_tol = std::max(1e-11 * k, problem.cp.delta3 * 1e-6);
  if (st.fd_step_a <= 0) st.fd_step_a = rho * 1e-4;
  if (st.boundary_tol <= 0) st.boundary_tol = rho * 1e-6;

  // coordinate boxes: |a_2 + y_i| <= rho, |a_j + z_ij| <= rho
  std::vector<double> a_lo(d, -rho), a_hi(d, rho);
  for (int i = 0; i < k; ++i) {
    a_lo[0] = std::max(a_lo[0], -rho - problem.schedule.y[i]);
    a_hi[0] = std::min(a_hi[0], rho - problem.schedule.y[i]);
    for (int j = 1; j < d; ++j) {
      a_lo[j] = std::max(a_lo[j], -rho - problem.schedule.z[i][j - 1]);
      a_hi[j] = std::min(a_hi[j], rho - problem.schedule.z[i][j - 1]);
    }
  }
  for (int j = 0; j < d; ++j)
    if (!(a_lo[j] < a_hi[j]))
      throw InvalidParams("maximize_chain: empty slow-coordinate domain");

  Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
  std::vector<double> s(k, 0.0);
  double l1 = problem.cp.l1(a), l2 = problem.cp.l2(a);

  auto full = [&](const Eigen::VectorXd& av, const std::vector<double>& sv) {
    return reduced_Hk(problem, av, sv, mode);
  };

  double value;
  if (mode == ChainMode::Fast) {
    // initialize s term-wise, then sweep
    std::vector<double> terms(k);
    for (int i = 0; i < k; ++i) {
      auto g = [&](double si) { return term_value(problem, a, si, i); };
      ScalarMax r = grid_golden_max(g, l1, l2, st.grid_nodes, st.x_tol);
      s[i] = r.x;
      terms[i] = r.value;
    }
    auto total = [&] {
      double v = -dI_dot(problem, base_phase(problem, a));
      for (double t : terms) v += t;
      return v;
    };
    value = total();
    int sweep = 0;
    for (; sweep < st.max_sweeps; ++sweep) {
      double before = value;
      for (int i = 0; i < k; ++i) {
        auto g = [&](double si) { return term_value(problem, a, si, i); };
        ScalarMax r = grid_golden_max(g, l1, l2, st.grid_nodes, st.x_tol);
        if (r.value > terms[i]) {
          s[i] = r.x;
          terms[i] = r.value;
        }
      }
      for (int j = 0; j < d; ++j) {
        auto g = [&](double aj) {
          Eigen::VectorXd av = a;
          av[j] = aj;
          double v = -dI_dot(problem, base_phase(problem, av));
          for (int i = 0; i < k; ++i) v += term_value(problem, av, s[i], i);
          return v;
        };
        ScalarMax r = grid_golden_max(g, a_lo[j], a_hi[j],
                                      st.grid_nodes, st.x_tol);
        if (r.value > total()) {
          a[j] = r.x;
          for (int i = 0; i < k; ++i) terms[i] = term_value(problem, a, s[i], i);
        }
      }
      value = total();
      if (value - before < st.value_tol) break;
    }
    ChainCriticalPoint cp;
    cp.sweeps = sweep + 1;
    cp.a_slow = a;
    cp.s = s;
    cp.value = value;

    // central-difference gradient
    double ginf = 0;
    for (int i = 0; i < k; ++i) {
      double h = st.fd_step_s;
      double gp = term_value(problem, a, s[i] + h, i);
      double gm = term_value(problem, a, s[i] - h, i);
      ginf = std::max(ginf, std::abs((gp - gm) / (2 * h)));
    }
    for (int j = 0; j < d; ++j) {
      double h = st.fd_step_a;
      Eigen::VectorXd ap = a, am = a;
      ap[j] += h;
      am[j] -= h;
      ginf = std::max(ginf, std::abs((full(ap, s) - full(am, s)) / (2 * h)));
    }
    cp.gradient_inf = ginf;

    // distance to the domain boundary
    double dist = std::numeric_limits<double>::infinity();
    std::string worst;
    auto consider = [&](double v, const std::string& name) {
      if (v < dist) {
        dist = v;
        worst = name;
      }
    };
    for (int i = 0; i < k; ++i) {
      consider(s[i] - l1, "s_" + std::to_string(i) + " at lower fast bound");
      consider(l2 - s[i], "s_" + std::to_string(i) + " at upper fast bound");
    }
    for (int j = 0; j < d; ++j) {
      consider(a[j] - a_lo[j], "a_" + std::to_string(j + 2) + " at lower bound");
      consider(a_hi[j] - a[j], "a_" + std::to_string(j + 2) + " at upper bound");
    }
    cp.box_distance = dist;
    if (dist > st.boundary_tol) {
      cp.location = ChainCriticalPoint::Location::Interior;
    } else if (dist < -st.boundary_tol) {
      cp.location = ChainCriticalPoint::Location::Boundary;
      cp.violated_constraint = worst;
    } else {
      cp.location = ChainCriticalPoint::Location::Undecided;
      cp.violated_constraint = worst;
    }
    return cp;
  }

  // exact mode: plain coordinate ascent on the full functional
  value = full(a, s);
  int sweep = 0;
  for (; sweep < st.max_sweeps; ++sweep) {
    double before = value;
    for (int i = 0; i < k; ++i) {
      auto g = [&](double si) {
        std::vector<double> sv = s;
        sv[i] = si;
        return full(a, sv);
      };
      ScalarMax r = grid_golden_max(g, l1, l2, st.grid_nodes, st.x_tol);
      if (r.value > value) {
        s[i] = r.x;
        value = r.value;
      }
    }
    for (int j = 0; j < d; ++j) {
      auto g = [&](double aj) {
        Eigen::VectorXd av = a;
        av[j] = aj;
        return full(av, s);
      };
      ScalarMax r = grid_golden_max(g, a_lo[j], a_hi[j], st.grid_nodes, st.x_tol);
      if (r.value > value) {
        a[j] = r.x;
        value = r.value;
      }
    }
    if (value - before < st.value_tol) break;
  }
  ChainCriticalPoint cp;
  cp.sweeps = sweep + 1;
  cp.a_slow = a;
  cp.s = s;
  cp.value = value;
  double ginf = 0;
  for (int i = 0; i < k; ++i) {
    std::vector<double> sp = s, sm = s;
    sp[i] += st.fd_step_s;
    sm[i] -= st.fd_step_s;
    ginf = std::max(
        ginf, std::abs((full(a, sp) - full(a, sm)) / (2 * st.fd_step_s)));
  }
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd ap = a, am = a;
    ap[j] += st.fd_step_a;
    am[j] -= st.fd_step_a;
    ginf = std::max(
        ginf, std::abs((full(ap, s) - full(am, s)) / (2 * st.fd_step_a)));
  }
  cp.gradient_inf = ginf;
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    dist = std::min({dist, s[i] - l1, l2 - s[i]});
  for (int j = 0; j < d; ++j)
    dist = std::min({dist, a[j] - a_lo[j], a_hi[j] - a[j]});
  cp.box_distance = dist;
  cp.location = dist > st.boundary_tol
                    ? ChainCriticalPoint::Location::Interior
                    : ChainCriticalPoint::Location::Boundary;
  return cp;
}

DiffusionRun reconstruct_orbit(const ChainProblem& problem,
                               const ChainCriticalPoint& crit,
                               const ReconstructSettings& settings) {
  const int k = problem.k;
  const int n = problem.params.n();
  SystemParams p = problem.params.normalized();
  FrequencyVector w = frequency_vector(p);
  double ts = time_scale(problem);

  DiffusionRun run;
  run.eta_neighborhood = settings.eta;
  run.dI_requested = problem.dI_norm();
  run.A = base_phase(problem, crit.a_slow);
  run.thetas.resize(k);
  for (int i = 0; i < k; ++i)
    run.thetas[i] = (problem.schedule.eta[i] + crit.s[i]) * ts;

  std::vector<double> I(problem.I0);
  double t_enter = 0, t_exit = 0;
  double H_ref = 0;
  bool have_ref = false;

  for (int i = 0; i < k; ++i) {
    auto sol = solve_one_bump_pi(p, problem.f, run.A, run.thetas[i], problem.bvp);
    const auto& tg = sol.grid;  // bump-local time; absolute = tg + off
    const double off = sol.t_offset;
    const std::size_t N = tg.size();

    // action kick integrands, one cumulative integral per component
    std::vector<std::vector<double>> kick(n, std::vector<double>(N));
    std::vector<double> phi(n);
    for (std::size_t m = 0; m < N; ++m) {
      for (int j = 0; j < n; ++j)
        phi[j] =
            std::remainder(w.omega[j] * (tg[m] + off) + run.A[j], 2 * kPi);
      auto g = problem.f.gradient(phi);
      double c = std::cos(sol.q_values[m]) - 1;
      for (int j = 0; j < n; ++j) kick[j][m] = -p.mu * c * g[j];
    }
    std::vector<std::vector<double>> cum(n);
    for (int j = 0; j < n; ++j)
      cum[j] = interpolatory_quad_cumulative(tg, kick[j]);

    // eta-neighborhood entry / exit bookkeeping
    if (i == 0) {
      t_enter = tg.front() + off;
      for (std::size_t m = 0; m < N; ++m) {
        double dist = sol.q_values[m] + std::abs(sol.dq(tg[m] + off));
        if (dist > settings.eta) break;
        t_enter = tg[m] + off;
      }
    }
    if (i == k - 1) {
      t_exit = tg.back() + off;
      for (std::size_t m = N; m-- > 0;) {
        double dist =
            (2 * kPi - sol.q_values[m]) + std::abs(sol.dq(tg[m] + off));
        if (dist > settings.eta) break;
        t_exit = tg[m] + off;
      }
    }

    // sampled states; the energy reference resets at every gluing node
    // because the pseudo-orbit has a designed O(mu) derivative kink there
    std::size_t seg = 0;
    have_ref = false;
    for (std::size_t m = 0; m < N; m += settings.store_stride) {
      std::size_t seg_now = 0;
      while (seg_now < sol.interface_idx.size() &&
             m >= sol.interface_idx[seg_now])
        ++seg_now;
      if (seg_now != seg) {
        seg = seg_now;
        have_ref = false;
      }
      FullState st;
      st.phi.resize(n);
      st.I.resize(n);
      for (int j = 0; j < n; ++j) {
        st.phi[j] =
            std::remainder(w.omega[j] * (tg[m] + off) + run.A[j], 2 * kPi);
        if (st.phi[j] < 0) st.phi[j] += 2 * kPi;
        st.I[j] = I[j] + cum[j][m];
      }
      st.q = sol.q_values[m] + 2 * kPi * i;
      st.p = sol.dq(tg[m] + off);
      run.orbit.times.push_back(tg[m] + off);
      run.orbit.states.push_back(st);
      // energy bookkeeping uses the winding-free pendulum coordinate
      FullState st_loc = st;
      st_loc.q = sol.q_values[m];
      double H = hamiltonian(p, problem.f, st_loc);
      if (!have_ref) {
        H_ref = H;
        have_ref = true;
      }
      run.energy_residual = std::max(run.energy_residual, std::abs(H - H_ref));
    }
    for (int j = 0; j < n; ++j) I[j] += cum[j].back();

    // re-integration check over the core window of the bump
    double hw = settings.reint_half_width;
    double ta = run.thetas[i] - hw, tb = run.thetas[i] + hw;
    IntegrateSettings ist;
    auto traj = integrate_pendulum(p, problem.f, run.A, sol.q(ta), sol.dq(ta),
                                   ta, tb, ist);
    double err = 0;
    for (std::size_t m = 0; m < traj.times.size(); ++m)
      err = std::max(err, std::abs(traj.q[m] - sol.q(traj.times[m])));
    run.bump_reint_error.push_back(err);
  }

  run.I_drift.resize(n);
  double s2 = 0;
  for (int j = 0; j < n; ++j) {
    run.I_drift[j] = I[j] - problem.I0[j];
    s2 += run.I_drift[j] * run.I_drift[j];
  }
  run.I_drift_norm = std::sqrt(s2);
  run.T_d = t_exit - t_enter;

  // instantiated drift-time bound
  double pace = problem.cp.delta3;
  run.experimental = false;
  if (problem.pace_by_delta2) {
    pace = problem.cp.delta2;
    run.experimental = true;
  }
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n - 1);
  double Delta = problem.cp.l2(x0) - problem.cp.l1(x0);
  double m1 = 1.0 / (problem.dio.gamma * std::pow(problem.cp.sigma, problem.dio.tau));
  double m2 = std::abs(std::log(problem.cp.delta1));
  double m3 = std::abs(std::log(problem.cp.delta2));
  double m4 = Delta / w.norm2;
  run.bound_Td = settings.C_shadow * (problem.cp.rho * problem.dI_norm() / pace) *
                     std::max({m1, m2, m3, m4}) +
                 std::abs(std::log(settings.eta));
  return run;
}

ChainProblem build_chain_problem(const SystemParams& params, double dI_norm,
                                 double tau, int K_max, const BvpSettings& bvp,
                                 bool pace_by_delta2, int k_cap) {
  ChainProblem pr;
  pr.params = params.normalized();
  pr.f = TrigPerturbation::cosine_sum(pr.params.n());
  pr.basis = default_splitting_basis(pr.params);
  pr.cp = default_condition_params(pr.params);
  pr.bvp = bvp;
  pr.pace_by_delta2 = pace_by_delta2;
  FrequencyVector w = frequency_vector(pr.params);
  pr.dio = estimate_gamma(w.omega, tau, K_max);

  double pace = pace_by_delta2 ? pr.cp.delta2 : pr.cp.delta3;
  pr.k = transition_count(dI_norm, pr.cp.rho, pace);
  if (k_cap > 0 && pr.k > k_cap)
    throw InvalidParams("chain needs " + std::to_string(pr.k) +
                        " bumps, above the cap of " + std::to_string(k_cap));

  const int n = pr.params.n();
  pr.I0.assign(n, 0.0);
  pr.I0_prime.assign(n, 0.0);
  if (pace_by_delta2) {
    pr.I0_prime[0] = dI_norm;  // drift along the fast action axis
  } else {
    Eigen::VectorXd dir = pr.basis.Omega.col(2);
    for (int j = 0; j < n; ++j) pr.I0_prime[j] = dI_norm * dir[j];
  }

  double min_gap_eta = bvp.min_gap * w.norm2 / pr.basis.Omega.col(0).norm();
  // epochs spaced at least two window widths apart so bumps never overlap
  min_gap_eta = std::max(min_gap_eta,
                         2.5 * bvp.t_radius * w.norm2 /
                             pr.basis.Omega.col(0).norm());
  pr.schedule =
      select_epochs(pr.basis.Omega, pr.cp.sigma, pr.k, min_gap_eta, pr.dio);
  return pr;
}

SweepTable sweep_epsilon(const SweepConfig& config) {
  SweepTable table;
  std::vector<double> xs, ys, yb;
  for (double eps : config.eps_list) {
    SweepRow row;
    row.eps = eps;
    try {
      double mu = config.mu_margin * config.delta0 *
                  std::pow(eps, 2 * config.a + 1);
      row.mu = mu;
      SystemParams p =
          make_params(eps, config.a, mu, config.beta, config.delta0);
      ChainProblem pr = build_chain_problem(p, config.dI_norm, config.tau,
                                            config.K_max, config.bvp, false);
      row.k = pr.k;
      auto crit = maximize_chain(pr, ChainMode::Fast, config.opt);
      if (crit.location != ChainCriticalPoint::Location::Interior)
        throw InvalidParams("critical point not interior: " +
                            crit.violated_constraint);
      auto run = reconstruct_orbit(pr, crit, config.rec);
      row.T_d = run.T_d;
      row.bound_Td = run.bound_Td;
      row.ok = true;
      xs.push_back(std::log(1.0 / eps));
      ys.push_back(std::log(run.T_d));
      yb.push_back(std::log(run.bound_Td));
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    table.rows.push_back(row);
  }
  if (xs.size() >= 2) {
    table.fitted_exponent = fit_line(xs, ys).slope;
    table.predicted_exponent = fit_line(xs, yb).slope;
  }
  return table;
}

DiffusionRun mode_I1_experiment(const ModeI1Config& config) {
  double mu =
      config.mu_margin * config.delta0 * std::pow(config.eps, 2 * config.a + 1);
  SystemParams p =
      make_params(config.eps, config.a, mu, config.beta, config.delta0);
  ConditionParams cp = default_condition_params(p);
  double dI = config.dI_norm > 0 ? config.dI_norm
                                 : 4.0 * cp.delta2 / (8.0 * cp.rho);
  ChainProblem pr = build_chain_problem(p, dI, config.tau, config.K_max,
                                        config.bvp, true, config.k_cap);
  auto crit = maximize_chain(pr, ChainMode::Fast, config.opt);
  auto run = reconstruct_orbit(pr, crit, config.rec);
  run.experimental = true;
  return run;
}

}  // namespace driftlab

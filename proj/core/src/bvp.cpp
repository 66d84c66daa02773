#include "driftlab/bvp.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "driftlab/numerics.hpp"
#include "driftlab/pendulum.hpp"

namespace driftlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Discretization {
  std::vector<double> t;
  std::vector<std::size_t> iface;  ///< node indices of the gluing times
  std::vector<std::size_t> segb;   ///< segment boundaries incl. window ends
};

Discretization build_grid(const std::vector<double>& thetas, double R,
                          int npu) {
  std::vector<double> bounds;
  bounds.push_back(thetas.front() - R);
  for (double th : thetas) bounds.push_back(th);
  bounds.push_back(thetas.back() + R);

  Discretization d;
  d.segb.push_back(0);
  d.t.push_back(bounds[0]);
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    double a = bounds[s], b = bounds[s + 1];
    int m = std::max<int>(6, static_cast<int>(std::lround((b - a) * npu)));
    for (int i = 1; i <= m; ++i) d.t.push_back(a + (b - a) * i / m);
    d.segb.push_back(d.t.size() - 1);
  }
  d.iface.assign(d.segb.begin() + 1, d.segb.end() - 1);
  return d;
}

struct Stencil {
  int lo;  ///< global index of first node
  std::vector<double> w;
};

// Per-node second-derivative stencils (empty for boundary/interface rows),
// plus first-derivative stencils for the two Robin rows.
struct StencilTable {
  std::vector<Stencil> d2;
  Stencil robin_left, robin_right;
  int kl = 4, ku = 4;
};

StencilTable build_stencils(const Discretization& d) {
  const std::size_t N = d.t.size();
  StencilTable tab;
  tab.d2.resize(N);
  auto nodes_of = [&](int lo, int cnt) {
    return std::vector<double>(d.t.begin() + lo, d.t.begin() + lo + cnt);
  };
  for (std::size_t s = 0; s + 1 < d.segb.size(); ++s) {
    const int a = static_cast<int>(d.segb[s]);
    const int b = static_cast<int>(d.segb[s + 1]);
    const int m = b - a;
    for (int il = 1; il < m; ++il) {
      const int i = a + il;
      int lo, cnt;
      if (il >= 2 && il <= m - 2) {
        lo = i - 2;
        cnt = 5;
      } else if (il == 1) {
        lo = a;
        cnt = 6;
      } else {  // il == m - 1
        lo = b - 5;
        cnt = 6;
      }
      tab.d2[i] = {lo, fd_weights(d.t[i], nodes_of(lo, cnt), 2)};
    }
  }
  tab.robin_left = {0, fd_weights(d.t[0], nodes_of(0, 5), 1)};
  tab.robin_right = {static_cast<int>(N) - 5,
                     fd_weights(d.t[N - 1], nodes_of(N - 5, 5), 1)};
  return tab;
}

struct Problem {
  SystemParams p;
  const TrigPerturbation* f;
  std::vector<double> A;        ///< phase as given by the caller
  std::vector<double> A_eff;    ///< A + omega * t0, wrapped: phase at local time
  double t0 = 0;                ///< absolute time of the first gluing point
  std::vector<double> thetas;   ///< local gluing times, thetas[0] == 0
  int winding;
  bool psi_mode = false;
  Discretization disc;
  StencilTable stencils;
  std::vector<double> f_nodes;    ///< f(omega t_i + A)
  std::vector<double> psi_nodes;  ///< psi0(t_i - theta), psi mode only
  std::vector<double> quadW;      ///< interpolatory weights, psi mode only
};

void precompute_forcing(Problem& pr) {
  FrequencyVector w = frequency_vector(pr.p);
  const int n = pr.p.n();
  const std::size_t N = pr.disc.t.size();
  pr.A_eff.resize(n);
  for (int j = 0; j < n; ++j)
    pr.A_eff[j] = std::remainder(w.omega[j] * pr.t0 + pr.A[j], 2 * kPi);
  pr.f_nodes.resize(N);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < N; ++i) {
    for (int j = 0; j < n; ++j)
      phi[j] = std::remainder(w.omega[j] * pr.disc.t[i] + pr.A_eff[j], 2 * kPi);
    pr.f_nodes[i] = pr.f->value(phi);
  }
}

// F has N entries; psi mode appends the projection constraint as entry N.
void residual(const Problem& pr, const std::vector<double>& q, double alpha,
              std::vector<double>& F) {
  const std::size_t N = pr.disc.t.size();
  F.assign(N + (pr.psi_mode ? 1 : 0), 0.0);
  auto dot = [&](const Stencil& s) {
    double v = 0;
    for (std::size_t j = 0; j < s.w.size(); ++j) v += s.w[j] * q[s.lo + j];
    return v;
  };
  F[0] = dot(pr.stencils.robin_left) - q[0];
  F[N - 1] = dot(pr.stencils.robin_right) + q[N - 1] - 2 * kPi * pr.winding;
  std::size_t next_if = 0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    if (next_if < pr.disc.iface.size() && i == pr.disc.iface[next_if]) {
      F[i] = q[i] - kPi * (2.0 * (next_if + 1) - 1.0);
      ++next_if;
      continue;
    }
    F[i] = -dot(pr.stencils.d2[i]) +
           std::sin(q[i]) * (1 + pr.p.mu * pr.f_nodes[i]);
    if (pr.psi_mode) F[i] -= alpha * pr.psi_nodes[i];
  }
  if (pr.psi_mode) {
    double c = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double qtheta =
          unperturbed_separatrix(pr.disc.t[i], pr.thetas[0]).q;
      c += pr.quadW[i] * pr.psi_nodes[i] * (q[i] - qtheta);
    }
    F[N] = c;
  }
}

template <class Add>
void assemble_jacobian(const Problem& pr, const std::vector<double>& q,
                       Add add) {
  const std::size_t N = pr.disc.t.size();
  auto put = [&](int i, const Stencil& s, double scale) {
    for (std::size_t j = 0; j < s.w.size(); ++j)
      add(i, s.lo + static_cast<int>(j), scale * s.w[j]);
  };
  put(0, pr.stencils.robin_left, 1.0);
  add(0, 0, -1.0);
  put(static_cast<int>(N) - 1, pr.stencils.robin_right, 1.0);
  add(static_cast<int>(N) - 1, static_cast<int>(N) - 1, 1.0);
  std::size_t next_if = 0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    if (next_if < pr.disc.iface.size() && i == pr.disc.iface[next_if]) {
      add(static_cast<int>(i), static_cast<int>(i), 1.0);
      ++next_if;
      continue;
    }
    put(static_cast<int>(i), pr.stencils.d2[i], -1.0);
    add(static_cast<int>(i), static_cast<int>(i),
        std::cos(q[i]) * (1 + pr.p.mu * pr.f_nodes[i]));
  }
}

double norm_inf(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

int worst_bump_of(const Problem& pr, const std::vector<double>& F) {
  std::size_t arg = 0;
  double best = -1;
  for (std::size_t i = 0; i < pr.disc.t.size(); ++i)
    if (std::abs(F[i]) > best) {
      best = std::abs(F[i]);
      arg = i;
    }
  double t = pr.disc.t[arg];
  int bump = 0;
  double dist = std::abs(t - pr.thetas[0]);
  for (std::size_t b = 1; b < pr.thetas.size(); ++b)
    if (std::abs(t - pr.thetas[b]) < dist) {
      dist = std::abs(t - pr.thetas[b]);
      bump = static_cast<int>(b);
    }
  return bump;
}

// Newton iteration.  The pi-crossing variants use a banded LU.  The psi
// variant solves the full bordered system
//   [J  u; v^T 0] [dq; da] = -[F; C]
// with a sparse LU: the core block J alone is nearly singular (the
// translation mode satisfies the Robin conditions up to O(e^{-2R})), so
// block elimination would cancel catastrophically.
void newton_solve(Problem& pr, const BvpSettings& st, std::vector<double>& q,
                  double& alpha) {
  const std::size_t N = pr.disc.t.size();
  // the 1/h^2 stencil rows cancel to a rounding floor of order eps/h^2
  double h_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < N; ++i)
    h_min = std::min(h_min, pr.disc.t[i] - pr.disc.t[i - 1]);
  const double floor_tol = 64 * std::numeric_limits<double>::epsilon() *
                           (2 * kPi) / (h_min * h_min);
  const double tol = std::max(st.newton_tol, floor_tol);
  const std::size_t M = N + (pr.psi_mode ? 1 : 0);

  BandedMatrix J(static_cast<int>(N), pr.stencils.kl, pr.stencils.ku);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::SparseMatrix<double> Asp(static_cast<int>(M), static_cast<int>(M));

  std::vector<double> F;
  residual(pr, q, alpha, F);
  double fn = norm_inf(F);
  for (int it = 0; it < st.newton_max_iter; ++it) {
    if (fn <= tol) return;
    std::vector<double> step(M, 0.0);
    if (!pr.psi_mode) {
      J.clear();
      assemble_jacobian(pr, q, [&](int i, int j, double v) { J.add(i, j, v); });
      J.factor();
      step.assign(F.begin(), F.end());
      for (double& v : step) v = -v;
      J.solve(step);
    } else {
      trips.clear();
      assemble_jacobian(pr, q, [&](int i, int j, double v) {
        trips.emplace_back(i, j, v);
      });
      for (std::size_t i = 1; i + 1 < N; ++i)
        if (!pr.stencils.d2[i].w.empty())
          trips.emplace_back(static_cast<int>(i), static_cast<int>(N),
                             -pr.psi_nodes[i]);
      for (std::size_t i = 0; i < N; ++i) {
        double vi = pr.quadW[i] * pr.psi_nodes[i];
        if (vi != 0)
          trips.emplace_back(static_cast<int>(N), static_cast<int>(i), vi);
      }
      Asp.setFromTriplets(trips.begin(), trips.end());
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(Asp);
      if (lu.info() != Eigen::Success)
        throw SolverError("bordered system factorization failed", fn);
      Eigen::VectorXd rhs(M);
      for (std::size_t i = 0; i < M; ++i) rhs[i] = -F[i];
      Eigen::VectorXd sol = lu.solve(rhs);
      for (std::size_t i = 0; i < M; ++i) step[i] = sol[i];
    }
    // damped update
    double lambda = 1.0;
    std::vector<double> q_try(N);
    double fn_try = fn;
    std::vector<double> F_try;
    for (int h = 0; h < 5; ++h) {
      for (std::size_t i = 0; i < N; ++i) q_try[i] = q[i] + lambda * step[i];
      double a_try = alpha + (pr.psi_mode ? lambda * step[N] : 0.0);
      residual(pr, q_try, a_try, F_try);
      fn_try = norm_inf(F_try);
      if (fn_try < fn || fn <= 10 * tol) {
        q = q_try;
        alpha = a_try;
        F = F_try;
        fn = fn_try;
        break;
      }
      lambda /= 2;
      if (h == 4)
        throw SolverError("Newton iteration stalled", fn, worst_bump_of(pr, F));
    }
  }
  if (fn > tol)
    throw SolverError("Newton did not converge", fn, worst_bump_of(pr, F));
}

HomoclinicSolution finish(Problem& pr, const BvpSettings& st,
                          std::vector<double> q, double alpha,
                          BumpVariant variant) {
  HomoclinicSolution sol;
  sol.variant = variant;
  sol.A = pr.A;
  sol.thetas = pr.thetas;
  for (double& th : sol.thetas) th += pr.t0;
  sol.winding = pr.winding;
  sol.grid = pr.disc.t;
  sol.t_offset = pr.t0;
  sol.q_values = std::move(q);
  sol.interface_idx = pr.disc.iface;
  sol.alpha = alpha;
  sol.admissibility_warning = !pr.p.admissible();

  // residual over ODE rows only (gluing and boundary rows are exact)
  std::vector<double> F;
  residual(pr, sol.q_values, alpha, F);
  const std::size_t N = pr.disc.t.size();
  for (std::size_t i = 1; i + 1 < N; ++i)
    if (!pr.stencils.d2[i].w.empty())
      sol.residual_inf = std::max(sol.residual_inf, std::abs(F[i]));

  // exponential tail rates fitted on the outer quarter of each end window
  auto fit_tail = [&](bool left) {
    std::vector<double> xs, ys;
    double edge = left ? pr.thetas.front() - 0.75 * st.t_radius
                       : pr.thetas.back() + 0.75 * st.t_radius;
    for (std::size_t i = 0; i < N; ++i) {
      double t = pr.disc.t[i];
      if (left ? t > edge : t < edge) continue;
      double v = left ? sol.q_values[i]
                      : 2 * kPi * pr.winding - sol.q_values[i];
      if (v < 1e-300) continue;
      xs.push_back(t);
      ys.push_back(std::log(v));
    }
    if (xs.size() < 3) return 0.0;
    double s = fit_line(xs, ys).slope;
    return left ? s : -s;
  };
  sol.tail_decay_rate = std::min(fit_tail(true), fit_tail(false));
  return sol;
}

Problem setup(const SystemParams& params, const TrigPerturbation& f,
              const std::vector<double>& A, std::vector<double> thetas,
              int winding, bool psi_mode, const BvpSettings& st) {
  params.validate();
  if (f.n() != params.n())
    throw InvalidParams("perturbation dimension does not match system");
  if (static_cast<int>(A.size()) != params.n())
    throw InvalidParams("phase offset has wrong dimension");
  if (thetas.empty()) throw GapError("need at least one gluing time");
  for (std::size_t i = 1; i < thetas.size(); ++i)
    if (thetas[i] - thetas[i - 1] < st.min_gap)
      throw GapError("gluing times closer than the minimal gap");
  Problem pr;
  pr.p = params.normalized();
  pr.f = &f;
  pr.A = A;
  pr.t0 = thetas.front();
  pr.thetas = std::move(thetas);
  for (double& th : pr.thetas) th -= pr.t0;
  pr.winding = winding;
  pr.psi_mode = psi_mode;
  pr.disc = build_grid(pr.thetas, st.t_radius, st.nodes_per_unit);
  pr.stencils = build_stencils(pr.disc);
  precompute_forcing(pr);
  if (psi_mode) {
    const std::size_t N = pr.disc.t.size();
    pr.psi_nodes.resize(N);
    for (std::size_t i = 0; i < N; ++i)
      pr.psi_nodes[i] = psi0(pr.disc.t[i] - pr.thetas[0]);
    pr.quadW = interpolatory_quad_weights(pr.disc.t);
  }
  return pr;
}

std::vector<double> initial_guess(const Problem& pr) {
  std::vector<double> q(pr.disc.t.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    double v = 0;
    for (double th : pr.thetas) v += unperturbed_separatrix(pr.disc.t[i], th).q;
    q[i] = v;
  }
  return q;
}

}  // namespace

std::pair<std::size_t, std::size_t> HomoclinicSolution::segment(
    double t) const {
  t -= t_offset;
  std::vector<std::size_t> segb;
  segb.push_back(0);
  for (std::size_t k : interface_idx) segb.push_back(k);
  segb.push_back(grid.size() - 1);
  for (std::size_t s = 0; s + 1 < segb.size(); ++s)
    if (t <= grid[segb[s + 1]] || s + 2 == segb.size())
      return {segb[s], segb[s + 1]};
  return {segb[segb.size() - 2], segb.back()};
}

namespace {
double eval_in_segment(const HomoclinicSolution& sol, double t, int m) {
  auto [lo, hi] = sol.segment(t);
  t -= sol.t_offset;
  // 7-node stencil inside [lo, hi], centered as well as possible
  auto it = std::upper_bound(sol.grid.begin() + lo, sol.grid.begin() + hi, t);
  std::size_t k = (it - sol.grid.begin()) - 1;
  std::size_t w = 7;
  std::size_t s_lo = k >= lo + 2 ? k - 2 : lo;
  if (s_lo + w > hi + 1) s_lo = hi + 1 - w;
  if (s_lo < lo) s_lo = lo;  // short segments fall back to all nodes
  std::size_t s_hi = std::min(s_lo + w, hi + 1);
  std::vector<double> nodes(sol.grid.begin() + s_lo, sol.grid.begin() + s_hi);
  auto c = fd_weights(t, nodes, m);
  double v = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    v += c[i] * sol.q_values[s_lo + i];
  return v;
}
}  // namespace

double HomoclinicSolution::q(double t) const {
  return eval_in_segment(*this, t, 0);
}
double HomoclinicSolution::dq(double t) const {
  return eval_in_segment(*this, t, 1);
}

HomoclinicSolution solve_one_bump_pi(const SystemParams& params,
                                     const TrigPerturbation& f,
                                     const std::vector<double>& A, double theta,
                                     const BvpSettings& settings) {
  Problem pr = setup(params, f, A, {theta}, 1, false, settings);
  auto q = initial_guess(pr);
  double alpha = 0;
  newton_solve(pr, settings, q, alpha);
  return finish(pr, settings, std::move(q), alpha, BumpVariant::PiCrossing);
}

HomoclinicSolution solve_one_bump_psi(const SystemParams& params,
                                      const TrigPerturbation& f,
                                      const std::vector<double>& A,
                                      double theta,
                                      const BvpSettings& settings) {
  BvpSettings st = settings;
  Problem pr = setup(params, f, A, {theta}, 1, true, st);
  // smooth profile: drop the gluing row and treat the window as one segment
  pr.disc.iface.clear();
  pr.disc.segb = {0, pr.disc.t.size() - 1};
  pr.stencils = build_stencils(pr.disc);
  auto q = initial_guess(pr);
  double alpha = 0;
  newton_solve(pr, st, q, alpha);
  return finish(pr, st, std::move(q), alpha, BumpVariant::PsiProjected);
}

HomoclinicSolution solve_k_bump(const SystemParams& params,
                                const TrigPerturbation& f,
                                const std::vector<double>& A,
                                const std::vector<double>& thetas,
                                const BvpSettings& settings) {
  Problem pr = setup(params, f, A, thetas, static_cast<int>(thetas.size()),
                     false, settings);
  auto q = initial_guess(pr);
  double alpha = 0;
  newton_solve(pr, settings, q, alpha);
  HomoclinicSolution sol =
      finish(pr, settings, std::move(q), alpha,
             thetas.size() == 1 ? BumpVariant::PiCrossing : BumpVariant::KBump);
  return sol;
}

}  // namespace driftlab

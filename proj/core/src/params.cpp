#include "driftlab/params.hpp"

#include <algorithm>
#include <cmath>

namespace driftlab {

void SystemParams::validate() const {
  if (!(eps > 0)) throw InvalidParams("eps must be positive");
  if (!(a > 0)) throw InvalidParams("a must be positive");
  if (!(mu >= 0)) throw InvalidParams("mu must be nonnegative");
  if (beta.empty()) throw InvalidParams("beta must have at least one component");
  double b2 = 0;
  for (double b : beta) b2 += b * b;
  if (!(b2 > 0)) throw InvalidParams("beta must be nonzero");
  if (!(delta0 > 0)) throw InvalidParams("delta0 must be positive");
}

bool SystemParams::admissible() const {
  return mu <= delta0 * std::pow(eps, 2 * a + 1);
}

SystemParams SystemParams::normalized() const {
  SystemParams out = *this;
  if (normalize_beta) {
    double b2 = 0;
    for (double b : beta) b2 += b * b;
    double s = std::sqrt(b2);
    for (double& b : out.beta) b /= s;
  }
  return out;
}

SystemParams make_params(double eps, double a, double mu, std::vector<double> beta,
                         double delta0, bool normalize_beta) {
  SystemParams p;
  p.eps = eps;
  p.a = a;
  p.mu = mu;
  p.beta = std::move(beta);
  p.delta0 = delta0;
  p.normalize_beta = normalize_beta;
  p.validate();
  return p.normalized();
}

FrequencyVector frequency_vector(const SystemParams& params) {
  params.validate();
  SystemParams p = params.normalized();
  FrequencyVector w;
  w.omega.resize(p.n());
  w.omega[0] = 1.0 / std::sqrt(p.eps);
  double ea = std::pow(p.eps, p.a);
  for (int j = 1; j < p.n(); ++j) w.omega[j] = ea * p.beta[j - 1];
  double s = 0;
  for (double x : w.omega) {
    s += x * x;
    w.norm_inf = std::max(w.norm_inf, std::abs(x));
  }
  w.norm2 = std::sqrt(s);
  return w;
}

TrigPerturbation::TrigPerturbation(int n) : n_(n) {
  if (n < 1) throw InvalidParams("TrigPerturbation needs n >= 1");
}

namespace {
// Sign of the first nonzero entry; 0 for the zero vector.
int lex_sign(const std::vector<int>& k) {
  for (int v : k)
    if (v != 0) return v > 0 ? 1 : -1;
  return 0;
}
}  // namespace

void TrigPerturbation::set_coeff(const std::vector<int>& k, std::complex<double> c) {
  if (static_cast<int>(k.size()) != n_)
    throw InvalidParams("harmonic index has wrong dimension");
  int s = lex_sign(k);
  if (s == 0) {
    coeffs_[k] = std::complex<double>(c.real(), 0.0);
    return;
  }
  std::vector<int> rep = k;
  if (s < 0) {
    for (int& v : rep) v = -v;
    c = std::conj(c);
  }
  coeffs_[rep] = c;
}

double TrigPerturbation::value(const std::vector<double>& phi) const {
  double out = 0;
  for (const auto& [k, c] : coeffs_) {
    double kphi = 0;
    for (int j = 0; j < n_; ++j) kphi += k[j] * phi[j];
    if (lex_sign(k) == 0)
      out += c.real();
    else
      out += 2.0 * (c.real() * std::cos(kphi) - c.imag() * std::sin(kphi));
  }
  return out;
}

std::vector<double> TrigPerturbation::gradient(const std::vector<double>& phi) const {
  std::vector<double> g(n_, 0.0);
  for (const auto& [k, c] : coeffs_) {
    if (lex_sign(k) == 0) continue;
    double kphi = 0;
    for (int j = 0; j < n_; ++j) kphi += k[j] * phi[j];
    // d/dphi_j 2 Re(c e^{i k.phi}) = -2 k_j (c.re sin + c.im cos)
    double s = -2.0 * (c.real() * std::sin(kphi) + c.imag() * std::cos(kphi));
    for (int j = 0; j < n_; ++j) g[j] += k[j] * s;
  }
  return g;
}

double TrigPerturbation::sup_norm(const std::vector<double>& widths) const {
  if (static_cast<int>(widths.size()) != n_ - 1)
    throw InvalidParams("widths must have length n-1");
  double out = 0;
  for (const auto& [k, c] : coeffs_) {
    double e = 0;
    for (int j = 1; j < n_; ++j) e += std::abs(k[j]) * widths[j - 1];
    double w = std::abs(c) * std::exp(e);
    out += lex_sign(k) == 0 ? w : 2.0 * w;
  }
  return out;
}

double TrigPerturbation::sup_norm() const {
  return sup_norm(std::vector<double>(n_ - 1, 0.0));
}

TrigPerturbation TrigPerturbation::cosine_sum(int n) {
  TrigPerturbation f(n);
  for (int j = 0; j < n; ++j) {
    std::vector<int> k(n, 0);
    k[j] = 1;
    f.set_coeff(k, 0.5);
  }
  return f;
}

}  // namespace driftlab

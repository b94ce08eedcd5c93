#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "sumset_lab/group.hpp"

namespace sumset_lab {

/// Exact probability mass on Ω_1 × ... × Ω_d, flattened with coordinate 1
/// most significant.
class JointDistribution {
 public:
  JointDistribution(std::vector<std::uint32_t> sizes, std::vector<Rational> mass)
      : sizes_(std::move(sizes)), mass_(std::move(mass)) {
    require(!sizes_.empty(), ErrorKind::invalid_input, "distribution needs at least one coordinate");
    std::size_t cells = 1;
    for (auto s : sizes_) {
      require(s >= 1, ErrorKind::invalid_input, "alphabets must be non-empty");
      cells *= s;
    }
    require(mass_.size() == cells, ErrorKind::invalid_input, "mass tensor has wrong size");
    Rational total = 0;
    for (const auto& m : mass_) {
      require(m >= 0, ErrorKind::invalid_input, "probability masses must be nonnegative");
      total += m;
    }
    require(total == 1, ErrorKind::invalid_input, "probability masses must sum to 1, got " + format_rational(total));
  }

  std::size_t arity() const noexcept { return sizes_.size(); }
  const std::vector<std::uint32_t>& sizes() const noexcept { return sizes_; }
  const std::vector<Rational>& mass() const noexcept { return mass_; }
  std::size_t cells() const noexcept { return mass_.size(); }

  std::vector<std::uint32_t> digits(std::size_t cell) const {
    std::vector<std::uint32_t> out(arity());
    for (std::size_t k = arity(); k-- > 0;) {
      out[k] = static_cast<std::uint32_t>(cell % sizes_[k]);
      cell /= sizes_[k];
    }
    return out;
  }

  std::size_t cell(std::span<const std::uint32_t> digits) const {
    require(digits.size() == arity(), ErrorKind::invalid_input, "wrong number of coordinates");
    std::size_t c = 0;
    for (std::size_t k = 0; k < arity(); ++k) {
      require(digits[k] < sizes_[k], ErrorKind::invalid_input, "symbol out of range");
      c = c * sizes_[k] + digits[k];
    }
    return c;
  }

  const Rational& at(std::span<const std::uint32_t> digits) const { return mass_[cell(digits)]; }

  std::vector<Rational> marginal(std::size_t j) const {
    require(j < arity(), ErrorKind::invalid_input, "marginal index out of range");
    std::vector<Rational> out(sizes_[j], Rational(0));
    for (std::size_t c = 0; c < cells(); ++c)
      if (mass_[c] != 0) out[digits(c)[j]] += mass_[c];
    return out;
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<std::uint32_t> sizes_;
  std::vector<Rational> mass_;
};

/// Uniform distribution on d-tuples of G whose sum lies in Z0.
inline JointDistribution avoidance_coupling(const FiniteAbelianGroup& g, const GroupSubset& z0, std::size_t d) {
  require(z0.group() == g, ErrorKind::invalid_input, "Z0 belongs to a different group");
  require(!z0.empty(), ErrorKind::invalid_input, "Z0 must be non-empty");
  require(d >= 2, ErrorKind::invalid_input, "coupling arity must be at least 2");
  std::vector<std::uint32_t> sizes(d, g.order());
  std::size_t cells = 1;
  for (std::size_t k = 0; k < d; ++k) cells *= g.order();
  const Rational weight(BigInt(1), boost::multiprecision::pow(BigInt(g.order()), static_cast<unsigned>(d - 1)) *
                                       BigInt(z0.size()));
  std::vector<Rational> mass(cells, Rational(0));
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    Element sum = 0;
    for (std::size_t k = 0; k < d; ++k) {
      sum = g.add_unchecked(sum, static_cast<Element>(rest % g.order()));
      rest /= g.order();
    }
    if (z0.contains(sum)) mass[c] = weight;
  }
  JointDistribution p(std::move(sizes), std::move(mass));
  for (std::size_t j = 0; j < d; ++j)
    for (const auto& m : p.marginal(j))
      require(m == Rational(BigInt(1), BigInt(g.order())), ErrorKind::invariant_violation,
              "avoidance coupling marginal is not uniform");
  return p;
}

struct CorrelationWitness {
  double value = 0;
  std::vector<double> lambda;  // on Ω_j, zero off the support
  std::vector<double> sigma;   // on the complementary alphabet, zero off the support
  std::size_t index = 0;       // 0-based coordinate j achieving the value
};

namespace detail {

struct PairSupport {
  std::vector<std::size_t> u, v;  // support symbols
  std::vector<double> pu, pv;     // their marginal masses
  Eigen::MatrixXd joint;          // P(u, v) restricted to supports
};

inline PairSupport pair_support(const JointDistribution& p) {
  require(p.arity() == 2, ErrorKind::invalid_input, "pair correlation needs a 2-coordinate distribution");
  const auto mu = p.marginal(0);
  const auto mv = p.marginal(1);
  PairSupport s;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0) {
      s.u.push_back(i);
      s.pu.push_back(to_double(mu[i]));
    }
  for (std::size_t i = 0; i < mv.size(); ++i)
    if (mv[i] > 0) {
      s.v.push_back(i);
      s.pv.push_back(to_double(mv[i]));
    }
  require(!s.u.empty() && !s.v.empty(), ErrorKind::invalid_input, "empty support");
  s.joint.resize(static_cast<Eigen::Index>(s.u.size()), static_cast<Eigen::Index>(s.v.size()));
  const std::uint32_t cols = p.sizes()[1];
  for (std::size_t a = 0; a < s.u.size(); ++a)
    for (std::size_t b = 0; b < s.v.size(); ++b)
      s.joint(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = to_double(p.mass()[s.u[a] * cols + s.v[b]]);
  return s;
}

/// Flattens (U_j, Ū_j) into a pair distribution, Ū_j in the remaining coordinate order.
inline JointDistribution split_off(const JointDistribution& p, std::size_t j) {
  std::uint32_t rest = 1;
  for (std::size_t k = 0; k < p.arity(); ++k)
    if (k != j) rest *= p.sizes()[k];
  std::vector<Rational> mass(static_cast<std::size_t>(p.sizes()[j]) * rest, Rational(0));
  for (std::size_t c = 0; c < p.cells(); ++c) {
    if (p.mass()[c] == 0) continue;
    const auto d = p.digits(c);
    std::size_t r = 0;
    for (std::size_t k = 0; k < p.arity(); ++k)
      if (k != j) r = r * p.sizes()[k] + d[k];
    mass[d[j] * rest + r] += p.mass()[c];
  }
  return JointDistribution({p.sizes()[j], rest}, std::move(mass));
}

}  // namespace detail

/// P(u,v)/sqrt(P_U(u) P_V(v)) on the supports; its top singular value is 1.
inline Eigen::MatrixXd normalized_joint_matrix(const JointDistribution& p) {
  auto s = detail::pair_support(p);
  Eigen::MatrixXd b = s.joint;
  for (Eigen::Index a = 0; a < b.rows(); ++a)
    for (Eigen::Index c = 0; c < b.cols(); ++c) b(a, c) /= std::sqrt(s.pu[a] * s.pv[c]);
  return b;
}

/// Maximal correlation of a pair distribution via the SVD of the normalized
/// joint matrix with its trivial singular pair removed.
inline CorrelationWitness maximal_correlation_pair(const JointDistribution& p) {
  auto s = detail::pair_support(p);
  CorrelationWitness w;
  w.lambda.assign(p.sizes()[0], 0.0);
  w.sigma.assign(p.sizes()[1], 0.0);
  if (s.u.size() < 2 || s.v.size() < 2) return w;

  Eigen::MatrixXd b = s.joint;
  for (Eigen::Index a = 0; a < b.rows(); ++a)
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      b(a, c) = b(a, c) / std::sqrt(s.pu[a] * s.pv[c]) - std::sqrt(s.pu[a] * s.pv[c]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  w.value = std::clamp(svd.singularValues()(0), 0.0, 1.0);
  if (svd.singularValues()(0) <= 0) return w;
  for (std::size_t a = 0; a < s.u.size(); ++a)
    w.lambda[s.u[a]] = svd.matrixU()(static_cast<Eigen::Index>(a), 0) / std::sqrt(s.pu[a]);
  for (std::size_t c = 0; c < s.v.size(); ++c)
    w.sigma[s.v[c]] = svd.matrixV()(static_cast<Eigen::Index>(c), 0) / std::sqrt(s.pv[c]);
  return w;
}

/// Alternating conditional expectations: λ ← E[σ(V)|U], σ ← E[λ(U)|V], each
/// centred and normalized; converges to the maximal correlation.
inline double ace_correlation(const JointDistribution& p, std::uint64_t seed = 1, std::size_t max_iterations = 200000,
                              double tolerance = 1e-15) {
  auto s = detail::pair_support(p);
  const std::size_t nu = s.u.size(), nv = s.v.size();
  if (nu < 2 || nv < 2) return 0.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> lambda(nu), sigma(nv);
  for (auto& x : sigma) x = normal(rng);

  auto normalize = [](std::vector<double>& f, const std::vector<double>& pm) {
    double mean = 0;
    for (std::size_t i = 0; i < f.size(); ++i) mean += pm[i] * f[i];
    double var = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] -= mean;
      var += pm[i] * f[i] * f[i];
    }
    const double sd = std::sqrt(var);
    if (sd > 0)
      for (auto& x : f) x /= sd;
    return sd;
  };
  normalize(sigma, s.pv);

  double value = 0;
  std::size_t stable = 0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    for (std::size_t a = 0; a < nu; ++a) {
      double acc = 0;
      for (std::size_t c = 0; c < nv; ++c) acc += s.joint(a, c) * sigma[c];
      lambda[a] = acc / s.pu[a];
    }
    if (normalize(lambda, s.pu) == 0) return 0.0;
    for (std::size_t c = 0; c < nv; ++c) {
      double acc = 0;
      for (std::size_t a = 0; a < nu; ++a) acc += s.joint(a, c) * lambda[a];
      sigma[c] = acc / s.pv[c];
    }
    const double next = normalize(sigma, s.pv);
    if (std::abs(next - value) <= tolerance) {
      if (++stable >= 20) return next;
    } else {
      stable = 0;
    }
    value = next;
  }
  return value;
}

/// max_j of the maximal correlation between U_j and the remaining coordinates.
inline CorrelationWitness rho(const JointDistribution& p) {
  require(p.arity() >= 2, ErrorKind::invalid_input, "rho needs at least two coordinates");
  if (p.arity() == 2) return maximal_correlation_pair(p);
  CorrelationWitness best;
  bool have = false;
  for (std::size_t j = 0; j < p.arity(); ++j) {
    auto w = maximal_correlation_pair(detail::split_off(p, j));
    w.index = j;
    if (!have || w.value > best.value) {
      best = std::move(w);
      have = true;
    }
  }
  return best;
}

struct RhoOneVerdict {
  bool rho_one = false;
  std::size_t components = 0;
  std::vector<int> u_component;  // -1 off the support
  std::vector<int> v_component;
  std::vector<double> lambda;  // non-constant with λ(U) = σ(V) a.s. when rho_one
  std::vector<double> sigma;
};

/// ρ = 1 exactly when the bipartite support graph is disconnected.
inline RhoOneVerdict is_rho_one(const JointDistribution& p) {
  require(p.arity() == 2, ErrorKind::invalid_input, "is_rho_one needs a 2-coordinate distribution");
  const std::size_t nu = p.sizes()[0], nv = p.sizes()[1];
  std::vector<std::size_t> parent(nu + nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> on(nu + nv, 0);
  for (std::size_t a = 0; a < nu; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      if (p.mass()[a * nv + b] > 0) {
        on[a] = on[nu + b] = 1;
        parent[find(a)] = find(nu + b);
      }

  RhoOneVerdict v;
  std::vector<int> label(nu + nv, -1);
  int next = 0;
  for (std::size_t x = 0; x < nu + nv; ++x) {
    if (!on[x]) continue;
    const auto root = find(x);
    if (label[root] < 0) label[root] = next++;
    label[x] = label[root];
  }
  v.components = static_cast<std::size_t>(next);
  v.rho_one = next > 1;
  v.u_component.assign(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(nu));
  v.v_component.assign(label.begin() + static_cast<std::ptrdiff_t>(nu), label.end());
  v.lambda.assign(nu, 0.0);
  v.sigma.assign(nv, 0.0);
  if (v.rho_one) {
    for (std::size_t a = 0; a < nu; ++a) v.lambda[a] = v.u_component[a] == 0 ? 1.0 : 0.0;
    for (std::size_t b = 0; b < nv; ++b) v.sigma[b] = v.v_component[b] == 0 ? 1.0 : 0.0;
  }
  return v;
}

/// Law of (U_1, U_2) given U_3..U_d = fixed.
inline JointDistribution conditional_pair(const JointDistribution& p, std::span<const std::uint32_t> fixed) {
  require(p.arity() >= 2, ErrorKind::invalid_input, "conditioning needs at least two coordinates");
  require(fixed.size() + 2 == p.arity(), ErrorKind::invalid_input, "need one fixed value per coordinate 3..d");
  const std::uint32_t nu = p.sizes()[0], nv = p.sizes()[1];
  std::vector<std::uint32_t> digits(p.arity());
  for (std::size_t k = 0; k < fixed.size(); ++k) digits[k + 2] = fixed[k];
  std::vector<Rational> mass(static_cast<std::size_t>(nu) * nv, Rational(0));
  Rational event = 0;
  for (std::uint32_t a = 0; a < nu; ++a)
    for (std::uint32_t b = 0; b < nv; ++b) {
      digits[0] = a;
      digits[1] = b;
      const auto& m = p.at(digits);
      mass[static_cast<std::size_t>(a) * nv + b] = m;
      event += m;
    }
  require(event > 0, ErrorKind::invalid_conditioning, "conditioning event has zero probability");
  for (auto& m : mass) m /= event;
  return JointDistribution({nu, nv}, std::move(mass));
}

}  // namespace sumset_lab

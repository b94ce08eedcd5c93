#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sumset_lab/group.hpp"
#include "sumset_lab/tensor_set.hpp"

namespace sumset_lab {

/// Coordinatewise arithmetic on G^n point indices.
class GroupPower {
 public:
  GroupPower(FiniteAbelianGroup g, std::size_t n) : g_(std::move(g)), n_(n), points_(ipow(g_.order(), n)) {}

  const FiniteAbelianGroup& group() const noexcept { return g_; }
  std::size_t dimension() const noexcept { return n_; }
  PointIndex points() const noexcept { return points_; }

  PointIndex add(PointIndex a, PointIndex b) const {
    const PointIndex q = g_.order();
    PointIndex out = 0, weight = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      out += g_.add_unchecked(static_cast<Element>(a % q), static_cast<Element>(b % q)) * weight;
      weight *= q;
      a /= q;
      b /= q;
    }
    return out;
  }

  PointIndex neg(PointIndex a) const {
    const PointIndex q = g_.order();
    PointIndex out = 0, weight = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      out += g_.neg_unchecked(static_cast<Element>(a % q)) * weight;
      weight *= q;
      a /= q;
    }
    return out;
  }

  PointIndex sub(PointIndex a, PointIndex b) const { return add(a, neg(b)); }

  bool in_power(const GroupSubset& z0, PointIndex p) const {
    const PointIndex q = g_.order();
    for (std::size_t c = 0; c < n_; ++c, p /= q)
      if (!z0.members().test(static_cast<std::size_t>(p % q))) return false;
    return true;
  }

  /// All points of Z0^n in increasing index order.
  std::vector<PointIndex> power_points(const GroupSubset& z0) const {
    std::vector<PointIndex> out{0};
    const auto elems = z0.elements();
    for (std::size_t c = 0; c < n_; ++c) {
      std::vector<PointIndex> next;
      next.reserve(out.size() * elems.size());
      for (auto p : out)
        for (auto e : elems) next.push_back(p * g_.order() + e);
      out.swap(next);
    }
    return out;
  }

 private:
  FiniteAbelianGroup g_;
  std::size_t n_;
  PointIndex points_;
};

namespace detail {

inline void check_family(const FiniteAbelianGroup& g, std::span<const TensorSet> sets) {
  require(!sets.empty(), ErrorKind::shape, "need at least one set");
  for (const auto& s : sets) {
    require(s.alphabet() == g.order(), ErrorKind::shape,
            "set alphabet " + std::to_string(s.alphabet()) + " does not match |G| = " + std::to_string(g.order()));
    require(s.dimension() == sets[0].dimension(), ErrorKind::shape, "sets have different dimensions");
  }
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return (a * b) % m; }

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/// Deterministic Miller-Rabin for n < 3.2e9.
inline bool is_prime_small(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u})
    if (n % p == 0) return n == p;
  std::uint64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct TransformPrime {
  std::uint64_t p;
  std::uint64_t generator;
};

inline std::uint64_t primitive_root(std::uint64_t p) {
  std::vector<std::uint64_t> factors;
  std::uint64_t m = p - 1;
  for (std::uint64_t f = 2; f * f <= m; ++f)
    if (m % f == 0) {
      factors.push_back(f);
      while (m % f == 0) m /= f;
    }
  if (m > 1) factors.push_back(m);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (auto f : factors)
      if (powmod(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

/// Primes p < 2^31 with lcm | p - 1, largest first, until their product exceeds `bound`.
inline std::vector<TransformPrime> transform_primes(std::uint64_t lcm, const BigInt& bound) {
  std::vector<TransformPrime> out;
  BigInt product = 1;
  const std::uint64_t limit = (std::uint64_t{1} << 31) - 1;
  for (std::uint64_t k = (limit - 1) / lcm; k >= 1 && product <= bound; --k) {
    const std::uint64_t p = k * lcm + 1;
    if (p < (std::uint64_t{1} << 16)) break;
    if (!is_prime_small(p)) continue;
    out.push_back({p, primitive_root(p)});
    product *= p;
  }
  require(product > bound, ErrorKind::overflow, "not enough transform primes for cyclic orders with lcm " + std::to_string(lcm));
  return out;
}

/// One residue of the tuple count modulo p via mixed-radix DFTs over G^n.
inline std::uint64_t transform_count_mod(const FiniteAbelianGroup& g, std::span<const TensorSet> sets,
                                         const GroupSubset& z0, TransformPrime prime) {
  const std::uint64_t p = prime.p;
  const std::size_t n = sets[0].dimension();
  const PointIndex total = sets[0].points();

  std::vector<std::uint32_t> radices;
  for (std::size_t c = 0; c < n; ++c)
    for (auto m : g.orders()) radices.push_back(m);
  std::vector<PointIndex> strides(radices.size());
  {
    PointIndex s = 1;
    for (std::size_t k = radices.size(); k-- > 0;) {
      strides[k] = s;
      s *= radices[k];
    }
  }

  auto transform = [&](std::vector<std::uint64_t>& a, bool inverse) {
    std::vector<std::uint64_t> line, out;
    for (std::size_t axis = 0; axis < radices.size(); ++axis) {
      const std::uint32_t m = radices[axis];
      const PointIndex s = strides[axis];
      std::uint64_t w = powmod(prime.generator, (p - 1) / m, p);
      if (inverse) w = powmod(w, p - 2, p);
      std::vector<std::uint64_t> wpow(m);
      wpow[0] = 1;
      for (std::uint32_t j = 1; j < m; ++j) wpow[j] = mulmod(wpow[j - 1], w, p);
      line.assign(m, 0);
      out.assign(m, 0);
      for (PointIndex block = 0; block < total; block += s * m)
        for (PointIndex inner = 0; inner < s; ++inner) {
          for (std::uint32_t j = 0; j < m; ++j) line[j] = a[block + j * s + inner];
          for (std::uint32_t k = 0; k < m; ++k) {
            std::uint64_t acc = 0;
            for (std::uint32_t j = 0; j < m; ++j) acc = (acc + mulmod(line[j], wpow[(std::uint64_t{j} * k) % m], p)) % p;
            out[k] = acc;
          }
          for (std::uint32_t k = 0; k < m; ++k) a[block + k * s + inner] = out[k];
        }
    }
  };

  std::vector<std::uint64_t> acc(total, 1);
  std::vector<std::uint64_t> buf(total);
  for (const auto& e : sets) {
    std::fill(buf.begin(), buf.end(), 0);
    e.bits().for_each_set([&](std::size_t i) { buf[i] = 1; });
    transform(buf, false);
    for (PointIndex i = 0; i < total; ++i) acc[i] = mulmod(acc[i], buf[i], p);
  }
  transform(acc, true);
  const std::uint64_t inv_total = powmod(total % p, p - 2, p);
  GroupPower power(g, n);
  std::uint64_t sum = 0;
  for (auto z : power.power_points(z0)) sum = (sum + acc[z]) % p;
  return mulmod(sum, inv_total, p);
}

inline BigInt transform_count(const FiniteAbelianGroup& g, std::span<const TensorSet> sets, const GroupSubset& z0,
                              const BigInt& bound, unsigned threads) {
  std::uint64_t lcm = 1;
  for (auto m : g.orders()) lcm = std::lcm(lcm, static_cast<std::uint64_t>(m));
  const auto primes = transform_primes(lcm, bound);

  std::vector<std::uint64_t> residues(primes.size());
  if (threads > 1 && primes.size() > 1) {
    std::vector<std::future<std::uint64_t>> jobs;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      if (jobs.size() == threads) {
        // keep at most `threads` residues in flight
        for (std::size_t j = 0; j < jobs.size(); ++j) residues[k - jobs.size() + j] = jobs[j].get();
        jobs.clear();
      }
      jobs.push_back(std::async(std::launch::async, [&, k] { return transform_count_mod(g, sets, z0, primes[k]); }));
    }
    for (std::size_t j = 0; j < jobs.size(); ++j) residues[primes.size() - jobs.size() + j] = jobs[j].get();
  } else {
    for (std::size_t k = 0; k < primes.size(); ++k) residues[k] = transform_count_mod(g, sets, z0, primes[k]);
  }

  // Chinese remaindering.
  BigInt x = 0, modulus = 1;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const std::uint64_t p = primes[k].p;
    const std::uint64_t xm = static_cast<std::uint64_t>(x % p);
    const std::uint64_t mm = static_cast<std::uint64_t>(modulus % p);
    const std::uint64_t delta = (residues[k] + p - xm) % p;
    const std::uint64_t t = mulmod(delta, powmod(mm, p - 2, p), p);
    x += modulus * t;
    modulus *= p;
  }
  return x;
}

using Wide = unsigned __int128;

/// Iterated sparse convolution; returns false if a 128-bit accumulator overflows.
inline bool direct_count(const FiniteAbelianGroup& g, std::span<const TensorSet> sets, const GroupSubset& z0,
                         BigInt& out) {
  const std::size_t n = sets[0].dimension();
  GroupPower power(g, n);
  const PointIndex total = sets[0].points();
  std::vector<Wide> h(total, 0);
  sets[0].bits().for_each_set([&](std::size_t i) { h[i] = 1; });

  for (std::size_t k = 1; k + 1 < sets.size(); ++k) {
    std::vector<Wide> next(total, 0);
    const auto members = sets[k].bits().indices();
    for (PointIndex x = 0; x < total; ++x) {
      if (h[x] == 0) continue;
      for (auto a : members) {
        auto& slot = next[power.add(x, a)];
        if (__builtin_add_overflow(slot, h[x], &slot)) return false;
      }
    }
    h.swap(next);
  }

  const auto targets = power.power_points(z0);
  Wide count = 0;
  if (sets.size() == 1) {
    for (auto z : targets)
      if (__builtin_add_overflow(count, h[z], &count)) return false;
  } else {
    bool wrapped = false;
    sets.back().bits().for_each_set([&](std::size_t a) {
      for (auto z : targets)
        if (__builtin_add_overflow(count, h[power.sub(z, a)], &count)) wrapped = true;
    });
    if (wrapped) return false;
  }
  const std::uint64_t lo = static_cast<std::uint64_t>(count);
  const std::uint64_t hi = static_cast<std::uint64_t>(count >> 64);
  out = (BigInt(hi) << 64) + lo;
  return true;
}

}  // namespace detail

enum class CountMethod { automatic, direct, transform };

struct CountOptions {
  CountMethod method = CountMethod::automatic;
  unsigned threads = 1;
};

/// |S| = |Z0|^n · |G|^{n(d-1)}, the number of d-tuples summing into Z0^n.
inline BigInt tuple_space_size(const FiniteAbelianGroup& g, const GroupSubset& z0, std::size_t n, std::size_t d) {
  require(d >= 1, ErrorKind::shape, "need d >= 1");
  return boost::multiprecision::pow(BigInt(z0.size()), static_cast<unsigned>(n)) *
         boost::multiprecision::pow(BigInt(g.order()), static_cast<unsigned>(n * (d - 1)));
}

/// Exact number of (x^1,...,x^d) ∈ E_1 × ... × E_d with x^1 + ... + x^d ∈ Z0^n.
inline BigInt exact_tuple_count(const FiniteAbelianGroup& g, std::span<const TensorSet> sets, const GroupSubset& z0,
                                CountOptions options = {}) {
  detail::check_family(g, sets);
  require(z0.group() == g, ErrorKind::invalid_input, "Z0 belongs to a different group");
  const std::size_t n = sets[0].dimension();
  const std::size_t d = sets.size();

  BigInt product = 1;
  for (const auto& e : sets) product *= e.count();
  if (product == 0 || z0.empty()) return 0;
  const BigInt space = tuple_space_size(g, z0, n, d);
  const BigInt bound = product < space ? product : space;

  CountMethod method = options.method;
  if (method == CountMethod::automatic) {
    const double total = static_cast<double>(sets[0].points());
    double direct_cost = 0;
    for (std::size_t k = 1; k + 1 < d; ++k) direct_cost += total * static_cast<double>(sets[k].count());
    direct_cost += static_cast<double>(sets.back().count()) * std::pow(static_cast<double>(z0.size()), double(n));
    double axis_work = 0;
    for (auto m : g.orders()) axis_work += m;
    const double transform_cost = 3.0 * static_cast<double>(d + 1) * total * axis_work * static_cast<double>(n);
    const bool fits = total <= double(1 << 24);
    method = (fits && direct_cost <= transform_cost) ? CountMethod::direct : CountMethod::transform;
  }
  if (method == CountMethod::direct) {
    BigInt out;
    if (detail::direct_count(g, sets, z0, out)) return out;
  }
  return detail::transform_count(g, sets, z0, bound, std::max(1u, options.threads));
}

/// exact_tuple_count narrowed to 64 bits; larger results raise an overflow error.
inline std::uint64_t count_tuples_into(const FiniteAbelianGroup& g, std::span<const TensorSet> sets,
                                       const GroupSubset& z0, CountOptions options = {}) {
  const BigInt c = exact_tuple_count(g, sets, z0, options);
  require(c <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::overflow,
          "tuple count " + c.str() + " exceeds 64 bits");
  return static_cast<std::uint64_t>(c);
}

/// True iff (E_1 + ... + E_d) ∩ Z0^n = ∅; decided from the exact count.
inline bool avoids(const FiniteAbelianGroup& g, std::span<const TensorSet> sets, const GroupSubset& z0,
                   CountOptions options = {}) {
  return exact_tuple_count(g, sets, z0, options) == 0;
}

inline TensorSet sumset(const FiniteAbelianGroup& g, std::span<const TensorSet> sets) {
  detail::check_family(g, sets);
  GroupPower power(g, sets[0].dimension());
  TensorSet acc = sets[0];
  for (std::size_t k = 1; k < sets.size(); ++k) {
    TensorSet next(g.order(), sets[0].dimension());
    const auto rhs = sets[k].bits().indices();
    acc.bits().for_each_set([&](std::size_t a) {
      for (auto b : rhs) next.insert(power.add(a, b));
    });
    acc = std::move(next);
  }
  return acc;
}

namespace detail {

inline void check_generic(const CombinerTable& f, const TensorSet& e, const TensorSet& fset,
                          std::span<const std::uint32_t> z0) {
  require(e.alphabet() == f.x_size() && fset.alphabet() == f.y_size(), ErrorKind::shape,
          "set alphabets do not match the combiner domains");
  require(e.dimension() == fset.dimension(), ErrorKind::shape, "sets have different dimensions");
  for (auto z : z0) require(z < f.z_size(), ErrorKind::invalid_input, "Z0 element outside the combiner codomain");
}

}  // namespace detail

/// True iff no (x, y) ∈ E × F has f(x_i, y_i) ∈ Z0 for every coordinate i.
inline bool generic_avoids(const CombinerTable& f, const TensorSet& e, const TensorSet& fset,
                           std::span<const std::uint32_t> z0) {
  detail::check_generic(f, e, fset, z0);
  std::vector<char> in_z0(f.z_size(), 0);
  for (auto z : z0) in_z0[z] = 1;
  std::vector<char> hit(static_cast<std::size_t>(f.x_size()) * f.y_size());
  for (std::uint32_t x = 0; x < f.x_size(); ++x)
    for (std::uint32_t y = 0; y < f.y_size(); ++y) hit[static_cast<std::size_t>(x) * f.y_size() + y] = in_z0[f(x, y)];

  const std::size_t n = e.dimension();
  std::vector<std::vector<std::uint32_t>> right;
  fset.bits().for_each_set([&](std::size_t j) { right.push_back(fset.decode(j)); });
  bool found = false;
  e.bits().for_each_set([&](std::size_t i) {
    if (found) return;
    const auto x = e.decode(i);
    for (const auto& y : right) {
      std::size_t c = 0;
      while (c < n && hit[static_cast<std::size_t>(x[c]) * f.y_size() + y[c]]) ++c;
      if (c == n) {
        found = true;
        return;
      }
    }
  });
  return !found;
}

/// f^{⊗n}(E, F) as a subset of Z^n.
inline TensorSet generic_image(const CombinerTable& f, const TensorSet& e, const TensorSet& fset) {
  detail::check_generic(f, e, fset, {});
  TensorSet out(f.z_size(), e.dimension());
  std::vector<std::uint32_t> z(e.dimension());
  e.bits().for_each_set([&](std::size_t i) {
    const auto x = e.decode(i);
    fset.bits().for_each_set([&](std::size_t j) {
      const auto y = fset.decode(j);
      for (std::size_t c = 0; c < z.size(); ++c) z[c] = f(x[c], y[c]);
      out.insert(out.encode(z));
    });
  });
  return out;
}

}  // namespace sumset_lab

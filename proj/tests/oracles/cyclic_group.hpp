#pragma once

// Brute-force models of V/V_N as the cyclic group Z/M with subgroups V_n = P_n Z / M,
// where P_n = s_1 * ... * s_n. Only indices of the filtration matter for the radial
// formulas, so any group with the same chain of indices is a faithful test bed.

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace oracle {

using Rational = boost::multiprecision::mpq_rational;

class CyclicTower {
 public:
  explicit CyclicTower(std::vector<std::uint64_t> alphabets) : s_(std::move(alphabets)) {
    index_.push_back(1);
    for (auto s : s_) index_.push_back(index_.back() * s);
  }

  std::size_t levels() const { return s_.size(); }
  std::uint64_t order() const { return index_.back(); }
  /// [V : V_n].
  std::uint64_t index(std::size_t n) const { return index_[n]; }
  std::uint64_t alphabet(std::size_t j) const { return s_[j - 1]; }

  /// Largest n with x in V_n (N for x = 0).
  std::size_t level_of(std::uint64_t x) const {
    std::size_t n = 0;
    while (n < levels() && x % index_[n + 1] == 0) ++n;
    return n;
  }

  /// Dual level of the character k -> exp(2 pi i k x / M): least n with chi_k trivial on V_n.
  std::size_t dual_level(std::uint64_t k) const {
    for (std::size_t n = 0; n <= levels(); ++n) {
      if ((k * index_[n]) % order() == 0) return n;
    }
    return levels();
  }

  /// Mixed-radix digits d_1..d_N, least significant first.
  std::vector<std::uint64_t> digits(std::uint64_t x) const {
    std::vector<std::uint64_t> d;
    for (auto s : s_) {
      d.push_back(x % s);
      x /= s;
    }
    return d;
  }

  std::uint64_t encode(const std::vector<std::uint64_t>& d) const {
    std::uint64_t x = 0;
    for (std::size_t j = levels(); j-- > 0;) x = x * s_[j] + d[j];
    return x;
  }

  /// F(x) = sum over all characters of phi_{level} chi(x), evaluated on one point per
  /// shell: x = P_l for l < N, x = 0 for V_N.
  std::vector<std::complex<double>> character_sum(const std::vector<double>& phi) const {
    std::vector<std::complex<double>> out;
    for (std::size_t l = 0; l <= levels(); ++l) {
      const std::uint64_t x = l < levels() ? index_[l] : 0;
      std::complex<double> sum = 0;
      for (std::uint64_t k = 0; k < order(); ++k) {
        const std::size_t n = dual_level(k);
        const double value = n < phi.size() ? phi[n] : 0.0;
        if (value == 0) continue;
        const double angle = 2 * std::numbers::pi * static_cast<double>((k * x) % order()) / static_cast<double>(order());
        sum += value * std::polar(1.0, angle);
      }
      out.push_back(sum);
    }
    return out;
  }

  /// Fourier coefficient on dual level n of the radial function with shell values F:
  /// the Haar average of F(x) conj(chi(x)) for one character chi of that level.
  std::vector<std::complex<double>> coefficients(const std::vector<double>& shell_values) const {
    std::vector<std::complex<double>> out;
    for (std::size_t n = 0; n <= levels(); ++n) {
      const std::uint64_t k = n == 0 ? 0 : order() / index_[n];
      std::complex<double> sum = 0;
      for (std::uint64_t x = 0; x < order(); ++x) {
        const double angle = -2 * std::numbers::pi * static_cast<double>((k * x) % order()) / static_cast<double>(order());
        sum += shell_values[level_of(x)] * std::polar(1.0, angle);
      }
      out.push_back(sum / static_cast<double>(order()));
    }
    return out;
  }

  /// Law of x + y for y uniform on the shell V_j \ V_{j+1}, by enumeration.
  std::vector<Rational> translation_law(std::uint64_t x, std::size_t j) const {
    std::vector<Rational> law(order(), Rational(0));
    std::uint64_t shell_size = 0;
    for (std::uint64_t y = 0; y < order(); ++y) shell_size += level_of(y) == j ? 1 : 0;
    for (std::uint64_t y = 0; y < order(); ++y) {
      if (level_of(y) == j) law[(x + y) % order()] += Rational(1, shell_size);
    }
    return law;
  }

  /// Law of the digit update: d_1..d_j kept, d_{j+1} moved to one of the other s-1
  /// values, d_{j+2}.. uniform.
  std::vector<Rational> digit_rule_law(std::uint64_t x, std::size_t j) const {
    std::vector<Rational> law(order(), Rational(0));
    const auto d = digits(x);
    std::uint64_t deeper = 1;
    for (std::size_t i = j + 1; i < levels(); ++i) deeper *= s_[i];
    const Rational weight(1, (s_[j] - 1) * deeper);
    for (std::uint64_t v = 0; v < s_[j]; ++v) {
      if (v == d[j]) continue;
      for (std::uint64_t tail = 0; tail < deeper; ++tail) {
        auto e = d;
        e[j] = v;
        std::uint64_t rest = tail;
        for (std::size_t i = j + 1; i < levels(); ++i) {
          e[i] = rest % s_[i];
          rest /= s_[i];
        }
        law[encode(e)] += weight;
      }
    }
    return law;
  }

  /// Law of the translation chain at time t from 0, by uniformization with shell rates r_j.
  std::vector<double> chain_law(const std::vector<double>& rates, double t) const {
    double lambda = 0;
    for (double r : rates) lambda += r;
    // One-step kernel as a function of the increment y.
    std::vector<double> step(order(), 0.0);
    for (std::size_t j = 0; j < levels(); ++j) {
      std::uint64_t shell_size = 0;
      for (std::uint64_t y = 0; y < order(); ++y) shell_size += level_of(y) == j ? 1 : 0;
      for (std::uint64_t y = 0; y < order(); ++y) {
        if (level_of(y) == j) step[y] += rates[j] / lambda / static_cast<double>(shell_size);
      }
    }
    std::vector<double> v(order(), 0.0), law(order(), 0.0);
    v[0] = 1;
    double weight = std::exp(-lambda * t);
    for (int k = 0; k < 2000; ++k) {
      for (std::uint64_t x = 0; x < order(); ++x) law[x] += weight * v[x];
      std::vector<double> next(order(), 0.0);
      for (std::uint64_t x = 0; x < order(); ++x) {
        if (v[x] == 0) continue;
        for (std::uint64_t y = 0; y < order(); ++y) next[(x + y) % order()] += v[x] * step[y];
      }
      v.swap(next);
      weight *= lambda * t / (k + 1);
      if (k > lambda * t && weight < 1e-300) break;
    }
    return law;
  }

 private:
  std::vector<std::uint64_t> s_;
  std::vector<std::uint64_t> index_;
};

}  // namespace oracle

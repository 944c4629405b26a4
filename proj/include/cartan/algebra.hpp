#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "cartan/groupoid.hpp"
#include "cartan/phase.hpp"

namespace cartan {

/// Circle-valued 2-cocycle on the composable pairs of a groupoid. Entries for
/// non-composable pairs are ignored and kept at phase 1.
class Cocycle {
public:
  Cocycle() = default;
  explicit Cocycle(std::size_t n) : n_(n), values_(n * n) {}

  static Cocycle trivial(const FiniteGroupoid& g) { return Cocycle(g.size()); }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] const Phase& at(Elem g, Elem h) const { return values_[g * n_ + h]; }
  void set(Elem g, Elem h, Phase p) { values_[g * n_ + h] = p; }

  [[nodiscard]] bool is_trivial() const {
    for (const auto& p : values_)
      if (!p.is_one()) return false;
    return true;
  }

  friend bool operator==(const Cocycle&, const Cocycle&) = default;

private:
  std::size_t n_ = 0;
  std::vector<Phase> values_;
};

/// Checks the cocycle identity s(g,h)s(gh,k) = s(h,k)s(g,hk) on every
/// composable triple and normalisation on units. Exact (rational phases).
inline ValidationReport validate_cocycle(const FiniteGroupoid& g, const Cocycle& c) {
  ValidationReport rep;
  if (c.size() != g.size()) {
    rep.violations.push_back({"cocycle size disagrees with groupoid", {}});
    return rep;
  }
  const std::size_t n = g.size();
  for (Elem x = 0; x < n; ++x) {
    if (!c.at(g.range(x), x).is_one()) rep.violations.push_back({"cocycle not normalized", {g.name(g.range(x)), g.name(x)}});
    if (!c.at(x, g.source(x)).is_one()) rep.violations.push_back({"cocycle not normalized", {g.name(x), g.name(g.source(x))}});
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (!g.composable(x, y)) continue;
      const Elem xy = g.compose(x, y);
      for (Elem z = 0; z < n; ++z) {
        if (!g.composable(y, z)) continue;
        const Elem yz = g.compose(y, z);
        if (c.at(x, y) * c.at(xy, z) != c.at(y, z) * c.at(x, yz))
          rep.violations.push_back({"cocycle identity", {g.name(x), g.name(y), g.name(z)}});
      }
    }
  return rep;
}

/// Default threshold below which a coefficient counts as zero.
inline constexpr double kDefaultZeroTol = 1e-9;

/// A validated groupoid together with a validated cocycle. Immutable and
/// shared by every element of the twisted convolution algebra it defines.
class TwistContext {
public:
  struct Term {
    Elem g, h, gh;
    Complex phase;
  };

  static std::shared_ptr<const TwistContext> make(FiniteGroupoid g, Cocycle c,
                                                  double zero_tol = kDefaultZeroTol) {
    if (auto rep = validate_groupoid(g); !rep.ok())
      throw input_error("invalid groupoid: " + describe(rep.violations.front()));
    if (auto rep = validate_cocycle(g, c); !rep.ok())
      throw input_error("invalid cocycle: " + describe(rep.violations.front()));
    if (!(zero_tol > 0)) throw input_error("zero tolerance must be positive");
    return std::shared_ptr<const TwistContext>(new TwistContext(std::move(g), std::move(c), zero_tol));
  }
  static std::shared_ptr<const TwistContext> make(FiniteGroupoid g, double zero_tol = kDefaultZeroTol) {
    Cocycle c = Cocycle::trivial(g);
    return make(std::move(g), std::move(c), zero_tol);
  }

  [[nodiscard]] const FiniteGroupoid& groupoid() const { return g_; }
  [[nodiscard]] const Cocycle& cocycle() const { return c_; }
  [[nodiscard]] double zero_tol() const { return tol_; }
  [[nodiscard]] std::size_t size() const { return g_.size(); }
  [[nodiscard]] const std::vector<Term>& products() const { return terms_; }
  [[nodiscard]] Complex sigma(Elem g, Elem h) const { return c_.at(g, h).value(); }
  [[nodiscard]] const std::vector<Elem>& units() const { return units_; }

private:
  TwistContext(FiniteGroupoid g, Cocycle c, double tol) : g_(std::move(g)), c_(std::move(c)), tol_(tol) {
    for (Elem x = 0; x < g_.size(); ++x)
      for (Elem y = 0; y < g_.size(); ++y)
        if (g_.composable(x, y)) terms_.push_back({x, y, g_.compose(x, y), c_.at(x, y).value()});
    units_ = g_.units();
  }

  FiniteGroupoid g_;
  Cocycle c_;
  double tol_;
  std::vector<Term> terms_;
  std::vector<Elem> units_;
};

using ContextPtr = std::shared_ptr<const TwistContext>;

/// Finitely supported complex function on the groupoid, i.e. an element of
/// the twisted convolution algebra. Functions on the twist are identified
/// with functions on G through the section g -> (1, g).
class AlgebraElement {
public:
  AlgebraElement() = default;
  explicit AlgebraElement(ContextPtr ctx) : ctx_(std::move(ctx)), c_(ctx_->size()) {}
  AlgebraElement(ContextPtr ctx, std::vector<Complex> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (c_.size() != ctx_->size()) throw input_error("coefficient vector has wrong length");
  }

  static AlgebraElement delta(const ContextPtr& ctx, Elem g, Complex z = 1.0) {
    AlgebraElement a(ctx);
    a.c_.at(g) = z;
    return a;
  }
  /// Sum of the unit deltas, the identity of the algebra.
  static AlgebraElement identity(const ContextPtr& ctx) {
    AlgebraElement a(ctx);
    for (Elem u : ctx->units()) a.c_[u] = 1.0;
    return a;
  }
  /// The function equal to `a` on `s` and zero elsewhere.
  [[nodiscard]] AlgebraElement restricted(Support s) const {
    AlgebraElement r(ctx_);
    for_each_bit(s, [&](Elem g) { r.c_[g] = c_[g]; });
    return r;
  }

  [[nodiscard]] const ContextPtr& context() const { return ctx_; }
  [[nodiscard]] std::size_t size() const { return c_.size(); }
  [[nodiscard]] const std::vector<Complex>& coeffs() const { return c_; }
  [[nodiscard]] Complex operator[](Elem g) const { return c_[g]; }
  Complex& operator[](Elem g) { return c_[g]; }

  [[nodiscard]] Support support(double tol) const {
    Support s = 0;
    for (Elem g = 0; g < c_.size(); ++g)
      if (std::abs(c_[g]) > tol) s |= bit(g);
    return s;
  }
  [[nodiscard]] Support support() const { return support(ctx_->zero_tol()); }

  [[nodiscard]] double max_abs() const {
    double m = 0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
  }
  [[nodiscard]] bool is_zero() const { return support() == 0; }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  AlgebraElement& operator*=(Complex z) {
    for (auto& x : c_) x *= z;
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Complex z, AlgebraElement a) { return a *= z; }
  friend AlgebraElement operator*(AlgebraElement a, Complex z) { return a *= z; }
  friend AlgebraElement operator*(double z, AlgebraElement a) { return a *= Complex(z); }

  void check_same(const AlgebraElement& o) const {
    if (ctx_ != o.ctx_) throw input_error("algebra elements belong to different contexts");
  }

private:
  ContextPtr ctx_;
  std::vector<Complex> c_;
};

/// Twisted convolution (ab)(g) = sum_{hk=g} sigma(h,k) a(h) b(k).
inline AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b) {
  a.check_same(b);
  AlgebraElement out(a.context());
  for (const auto& t : a.context()->products()) {
    const Complex x = a[t.g], y = b[t.h];
    if (x == 0.0 || y == 0.0) continue;
    out[t.gh] += t.phase * x * y;
  }
  return out;
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return convolve(a, b); }

/// a*(g) = conj(sigma(g, g^-1)) conj(a(g^-1)).
inline AlgebraElement involution(const AlgebraElement& a) {
  const auto& ctx = a.context();
  const auto& G = ctx->groupoid();
  AlgebraElement out(ctx);
  for (Elem g = 0; g < G.size(); ++g) {
    const Elem gi = G.inverse(g);
    out[g] = std::conj(ctx->sigma(g, gi)) * std::conj(a[gi]);
  }
  return out;
}

inline AlgebraElement adj(const AlgebraElement& a) { return involution(a); }

/// Restriction of coefficients to the unit space (the expectation E).
inline AlgebraElement diagonal(const AlgebraElement& a) {
  AlgebraElement out(a.context());
  for (Elem u : a.context()->units()) out[u] = a[u];
  return out;
}

inline double distance(const AlgebraElement& a, const AlgebraElement& b) {
  a.check_same(b);
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Largest coefficient off the unit space; zero exactly for diagonal elements.
inline double off_diagonal_mass(const AlgebraElement& a) {
  const auto& G = a.context()->groupoid();
  double m = 0;
  for (Elem g = 0; g < G.size(); ++g)
    if (!G.is_unit(g)) m = std::max(m, std::abs(a[g]));
  return m;
}

inline bool is_diagonal(const AlgebraElement& a) {
  return off_diagonal_mass(a) <= a.context()->zero_tol();
}

/// Support is a bisection.
inline bool is_monomial(const AlgebraElement& a) {
  return is_bisection(a.context()->groupoid(), a.support());
}

inline bool approx_equal(const AlgebraElement& a, const AlgebraElement& b) {
  return distance(a, b) <= a.context()->zero_tol();
}

/// Functional calculus on a diagonal element, viewed as a function on the units.
/// `f` must satisfy f(0) = 0; off-diagonal coefficients of `b` are ignored.
inline AlgebraElement diag_apply(const AlgebraElement& b, const std::function<Complex(Complex)>& f) {
  AlgebraElement out(b.context());
  for (Elem u : b.context()->units()) out[u] = f(b[u]);
  return out;
}

/// Functional calculus with a real function applied to the real part of a
/// positive diagonal element.
inline AlgebraElement diag_apply_real(const AlgebraElement& b, const std::function<double(double)>& f) {
  return diag_apply(b, [&](Complex z) { return Complex(f(std::max(0.0, z.real())), 0.0); });
}

/// Pointwise maximum of two positive diagonal elements.
inline AlgebraElement diag_max(const AlgebraElement& a, const AlgebraElement& b) {
  a.check_same(b);
  AlgebraElement out(a.context());
  for (Elem u : a.context()->units()) out[u] = std::max(a[u].real(), b[u].real());
  return out;
}

/// Moore-Penrose style inverse on the support: 1/x where |x| > tol, else 0.
inline AlgebraElement diag_pinv(const AlgebraElement& b) {
  const double tol = b.context()->zero_tol();
  return diag_apply(b, [tol](Complex z) { return std::abs(z) > tol ? 1.0 / z : Complex(0.0); });
}

/// Support projection: 1 where |x| > tol, else 0.
inline AlgebraElement diag_support_projection(const AlgebraElement& b) {
  const double tol = b.context()->zero_tol();
  return diag_apply(b, [tol](Complex z) { return std::abs(z) > tol ? Complex(1.0) : Complex(0.0); });
}

}  // namespace cartan

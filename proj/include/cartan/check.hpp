#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"

namespace cartan {

/// Compact text form of an element: "{id: re+im i, ...}" over its support.
inline std::string format_element(const AlgebraElement& a) {
  std::ostringstream os;
  os << std::setprecision(6) << "{";
  bool first = true;
  for_each_bit(a.support(), [&](Elem g) {
    os << (first ? "" : ", ") << a.context()->groupoid().name(g) << ": " << a[g].real();
    if (a[g].imag() != 0.0) os << (a[g].imag() < 0 ? "-" : "+") << std::abs(a[g].imag()) << "i";
    first = false;
  });
  os << "}";
  return os.str();
}

/// "δ_g" for a point mass with coefficient 1, otherwise format_element.
inline std::string describe_element(const AlgebraElement& a) {
  const Support s = a.support();
  if (s != 0 && (s & (s - 1)) == 0) {
    const Elem g = static_cast<Elem>(std::countr_zero(s));
    if (std::abs(a[g] - Complex(1.0)) == 0.0) return "δ_" + a.context()->groupoid().name(g);
  }
  return format_element(a);
}

/// Outcome of one executable property over a batch of cases.
struct PropertyCheck {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  double residual = 0;  // largest residual seen
  std::string witness;  // first failing case

  explicit PropertyCheck(std::string n = {}) : name(std::move(n)) {}

  void expect(bool ok, const std::function<std::string()>& describe) {
    ++cases;
    if (!ok && passed) {
      passed = false;
      witness = describe();
    }
  }

  void observe(double r, double tol, const std::function<std::string()>& describe) {
    residual = std::max(residual, r);
    expect(r <= tol, describe);
  }

  /// Folds another check's cases and outcome into this one.
  void absorb(const PropertyCheck& o) {
    cases += o.cases;
    residual = std::max(residual, o.residual);
    if (!o.passed && passed) {
      passed = false;
      witness = o.witness;
    }
  }

  /// Marks the check failed when it never saw a case.
  void require_cases() {
    if (cases == 0 && passed) {
      passed = false;
      witness = "no cases exercised";
    }
  }
};

inline bool all_passed(const std::vector<PropertyCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

}  // namespace cartan

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <json.hpp>

#include "ballcone/random.hpp"
#include "ballcone/ternary_form.hpp"

namespace ballcone {

// Exact randomized identity testing over the rationals. Each identity is
// checked by evaluating both sides at a rational point with GMP; no step
// rounds.

/// Canonical reduced rational (GMP keeps numerator/denominator reduced with a positive denominator).
using ExactScalar = mpq_class;
/// A rational evaluation point, by variable name.
using MultiPoint = std::map<std::string, ExactScalar>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct NamedConstant {
  std::string name;
  ExactScalar value;
};

struct IdentitySpec {
  std::string id;
  std::string title;
  std::vector<std::string> variables;
  std::string domain;  // human-readable constraint
  int degree_bound = 0;  // total degree of lhs - rhs after clearing denominators

  /// Closed-form constants used by `rhs`; mutating one must break the identity.
  std::vector<NamedConstant> constants;

  std::function<std::vector<ExactScalar>(const MultiPoint&)> lhs;
  std::function<std::vector<ExactScalar>(const MultiPoint&, const std::vector<NamedConstant>&)> rhs;
  std::function<bool(const MultiPoint&)> in_domain;
  /// Random point of the domain with numerators and denominators at most `height`.
  std::function<MultiPoint(Rng&, int height)> sample;
};

std::vector<IdentitySpec> identity_catalog();

/// Copy of `spec` with constant `index` replaced by `value`.
IdentitySpec mutate_constant(const IdentitySpec& spec, std::size_t index, const ExactScalar& value);

struct IdentityVerdict {
  bool equal = false;
  std::vector<ExactScalar> lhs, rhs;
  MultiPoint witness;  // the evaluation point, kept on failure
};

/// Throws DomainError when `point` misses a variable or violates the domain.
IdentityVerdict check_identity(const IdentitySpec& spec, const MultiPoint& point);

struct IdentityRun {
  std::string id;
  std::string title;
  int degree_bound = 0;
  int trials = 0;
  int passed = 0;
  double failure_bound = 0.0;  // Schwartz-Zippel bound on a false pass, per identity
  std::vector<MultiPoint> witnesses;  // failing points (first few)
};

struct SuiteReport {
  int trials = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<IdentityRun> identities;
  bool all_pass() const;
};

SuiteReport schwartz_zippel_suite(int trials, int height, std::uint64_t seed,
                                  const std::vector<IdentitySpec>& catalog = identity_catalog());

nlohmann::json to_json(const SuiteReport& report);
nlohmann::json to_json(const MultiPoint& point);

/// Uniform rational n/d with 1 <= n, d <= height.
ExactScalar random_positive_rational(Rng& rng, int height);

/// Direction-sextic of the lifted triple at a point with variables
/// a, b, c, p0, p1, p2, x0, x1, x2 (weights used as given).
TernaryForm<ExactScalar> exact_lifted_sextic(const MultiPoint& point);

/// det of the second partials of `form` at u = (0, 0, 1).
ExactScalar exact_hessian_at_pole(const TernaryForm<ExactScalar>& form);

}  // namespace ballcone

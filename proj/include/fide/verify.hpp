#pragma once

// Seeded property suites behind the `verify` subcommand.

#include <cstdint>
#include <string>
#include <vector>

namespace fide {

struct VerifyResult {
  std::string name;
  bool passed = false;
  /// Number of cases checked and the worst deviation, or the first failure.
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1234567;
  /// Random instances for the Y / Delta / power oracle.
  int power_cases = 300;
  int sobolev_cases = 100;
};

/// Suites: orthogonality, basis_change, operational_identities,
/// power_oracle, fredholm_quadrature, sobolev, fractional_identity.
std::vector<VerifyResult> run_verify(const VerifyOptions& options = {});

VerifyResult verify_orthogonality(int max_degree = 12);
VerifyResult verify_basis_change(std::uint64_t seed, int cases = 200);
VerifyResult verify_operational_identities(std::uint64_t seed, int cases = 100);
VerifyResult verify_power_oracle(std::uint64_t seed, int cases = 300);
VerifyResult verify_fredholm_quadrature(std::uint64_t seed, int cases = 30);
VerifyResult verify_sobolev(std::uint64_t seed, int cases = 100);
VerifyResult verify_fractional_identity(std::uint64_t seed, int cases = 12);

}  // namespace fide

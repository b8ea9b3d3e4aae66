#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohspin/spin_algebra.hpp"

namespace cohspin {

struct IdentityResult {
  std::string name;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string worst_input;  // human-readable description of the worst case
};

struct VerificationReport {
  int max_twice_s = 0;
  std::uint64_t seed = 0;
  std::vector<IdentityResult> identities;
  bool pass = true;
};

using OperatorFactory = std::function<OperatorTriple(SpinLabel)>;

/// Runs every identity check over seeded random inputs for all spins up to
/// max_twice_s. The operator factory is injectable so tests can feed a
/// corrupted algebra and watch the right identity fail.
VerificationReport run_verification(int max_twice_s, std::uint64_t seed,
                                    const OperatorFactory& factory = {});

nlohmann::json verification_json(const VerificationReport& report);

}  // namespace cohspin

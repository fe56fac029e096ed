// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semo {

struct ValidationOptions {
    /// 10^4 steps per variant instead of 10^5.
    bool quick = false;
    std::uint64_t seed = 1;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::uint64_t violations = 0;
    std::string detail;
};

/// Lemma invariants over cached runs (n = 50, p = 0.5/n), elim and step
/// invariants for the reevaluating variants, noiseless monotonicity, fast
/// path versus general path agreement, the brute-force elim oracle and the
/// distribution tests for noise, mutation and parent selection.
std::vector<ValidationCheck> run_validation(const ValidationOptions& options);

} // namespace semo

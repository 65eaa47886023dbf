#pragma once

#include "gstark/serialize.hpp"
#include "gstark/tower.hpp"

namespace gstark {

struct CheckResult {
    std::string name;
    bool pass = true;
    bool skipped = false;
    json witness; // reproduction data on failure
};

struct CheckOptions {
    bool exhaustive_ordering = true;
    bool run_comparison = true; // principal artinian rings only
    bool run_surj = true;
    uint64_t seed = 1;
};

// The per-instance battery: transition compatibility, ordering
// independence, sign laws, the control and core theorems, quotient
// reductions, theta, trivialization independence, comparison (d = 0), and
// the synthetic Poitou-Tate length bookkeeping.
std::vector<CheckResult> run_instance_checks(const SelmerInstance& inst, const RingElem& unit,
                                             const CheckOptions& opt);

// standalone randomized suites
CheckResult check_prop25_signs(uint64_t seed, uint32_t count);
CheckResult check_prop26_naturality(uint64_t seed, uint32_t count);
CheckResult check_keylem(uint64_t seed, uint32_t count);
CheckResult check_matlis(uint64_t seed, uint32_t per_ring);
CheckResult check_comparison_lemma414(uint64_t seed, uint32_t count);
CheckResult check_compalem(uint64_t seed, uint32_t count);
CheckResult check_kernel_fuzz(uint64_t seed, uint32_t count);
CheckResult check_theta_planted(uint64_t seed, uint32_t count);

// tower battery (per tower)
std::vector<CheckResult> run_tower_checks(const TowerSpec& tw, const RingElem& unit);

// rings exercised by the randomized suites
const std::vector<RingSpec>& suite_rings();

} // namespace gstark

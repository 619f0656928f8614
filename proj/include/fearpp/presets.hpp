// Bundled experiment presets: parameter sets from the published figures this
// toolkit regresses against, together with the expected quantitative values
// and tolerances. `reproduce` runs a preset end-to-end and reports pass/fail
// per expectation.

#ifndef FEARPP_PRESETS_HPP
#define FEARPP_PRESETS_HPP

#include <string>
#include <vector>

#include "fearpp/manifolds.hpp"
#include "fearpp/model.hpp"

namespace fearpp {

struct CheckResult {
    std::string name;
    std::string detail; // human-readable expected-vs-computed
    bool pass = false;
};

struct ReproduceReport {
    std::string figure_id;
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

std::vector<std::string> preset_ids();
bool is_preset(const std::string& id);
ModelParams preset_params(const std::string& id); // throws UsageError on unknown id

// Runs every check bundled with the preset. Heavy presets (homoclinic
// brackets) take tens of seconds.
ReproduceReport reproduce(const std::string& id);

} // namespace fearpp

#endif

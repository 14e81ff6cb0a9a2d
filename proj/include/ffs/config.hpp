#pragma once

// JSON scenario files and the bundled case-study presets.

#include <stdexcept>
#include <string>
#include <vector>

#include "ffs/scenario.hpp"

namespace windffs {

/// Every schema or invariant violation found in a document, each prefixed
/// with its JSON path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

Scenario parse_config(const std::string& text);
Scenario load_config(const std::string& path);

/// Canonical JSON; parse_config(serialize(s)) == s.
std::string serialize(const Scenario& scenario);

/// Reference IEEEG1 / IEEEG3 parameter blocks and the ten-unit fleet.
IeeeG1Params reference_ieeeg1();
IeeeG3Params reference_ieeeg3();
std::vector<IeeeG1Params> multi_unit_fleet();

/// One generator of 200 MVA and one 20 x 5 MW farm at 9 m/s; governor is
/// "ieeeg1", "ieeeg3" or "simplified".
Scenario preset_single_wf(const std::string& governor = "ieeeg1");

/// Ten IEEEG1 units and five 80 x 5 MW farms; 500 MW surge or a G5 trip.
Scenario preset_multi_wf(DisturbanceKind kind = DisturbanceKind::LoadSurge);

}  // namespace windffs

// Target-set builders for the symbolic engine.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phz/concrete.hpp"
#include "phz/lang.hpp"
#include "phz/symbolic.hpp"

namespace phz {

struct TargetFormatError : std::runtime_error {
  int line;
  TargetFormatError(const std::string& msg, int l) : std::runtime_error(msg), line(l) {}
};

// One task at each assert suffix under every minimal falsifying valuation.
std::vector<Constraint> assertion_targets(const Program& p);

// One task at each signal/wait/drop suffix whose variable names a phaser it is not registered to.
std::vector<Constraint> registration_error_targets(const Program& p);

// Cyclic waits of length 1..n over distinct phasers. Unpinned components of the two
// gaps on a cycle edge are unbounded when b < 0 and enumerated over 0..b otherwise.
std::vector<Constraint> cyclic_wait_targets(const Program& p, int n, int b = -1);

// Pinned pairs are taken relative to the level l = max pinned wait of the phaser.
// Undefined entries yield both the registered and the unregistered variant.
std::vector<Constraint> from_partial_config(const Program& p, const PartialConfig& pc);

// Line-based partial-configuration format; see docs/formats.md.
PartialConfig parse_partial_config(const Program& p, std::string_view text);
PartialConfig parse_partial_config_file(const Program& p, const std::string& path);

}  // namespace phz

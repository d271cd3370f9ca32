#pragma once

#include "gfpc/config.hpp"

#include <string>
#include <vector>

namespace gfpc {

// ============================================================================
// Built-in regression fixtures (the `verify` command and the acceptance run)
// ============================================================================

struct FixtureResult {
    std::string name;
    bool        passed = false;
    std::string detail;  // measured values and the tolerance they were held to
};

struct FixtureOptions {
    /// Multiplies every numeric tolerance; 0 forces every check to fail.
    double tol_scale = 1.0;
};

/// Registered fixture names, in execution order.
std::vector<std::string> fixture_names();

/// Runs one fixture by name. Throws std::invalid_argument for unknown names.
FixtureResult run_fixture(const std::string& name, const FixtureOptions& options = {});

std::vector<FixtureResult> run_all_fixtures(const FixtureOptions& options = {});

/// The reference per-unit system and the four studied cases used by the
/// fixtures (inductive 0.087 p.u. line, 0.01/0.05 droops, 0.5 p.u. dispatch).
DesignConfig reference_config();

}  // namespace gfpc

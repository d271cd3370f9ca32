#pragma once

#include "gfpc/powerflow.hpp"
#include "gfpc/simulation.hpp"

#include <string>
#include <vector>

namespace gfpc {

// ============================================================================
// JSON configuration: batch system + cases + simulation + output
// ============================================================================

struct CaseSpec {
    std::string name;
    double      xi = 0.0;
    double      ts = 0.0;
    double      a  = 20.0;  // optional in the file, default 20
};

struct SimSection {
    double t_end        = 8.0;
    double dt           = 1e-4;  // default filled when absent
    int    record_every = 1;
    double band         = 0.02;  // settling band, fraction of the step
    std::vector<SetpointEvent> events;
};

struct OutputSection {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "report"};
};

struct DesignConfig {
    SystemParams  system;
    std::vector<CaseSpec> cases;
    SimSection    sim;
    OutputSection output;
};

/// Parses and fully validates a config document. Unknown keys are errors.
/// Throws ParseError (with line/column) on malformed JSON and ValidationError
/// (naming the field and constraint) on any invariant violation.
DesignConfig parse_config(const std::string& text);

/// parse_config over the contents of `path`. File-system failures surface as
/// std::runtime_error with the path in the message.
DesignConfig load_config(const std::string& path);

/// Serializes a config so that parse_config(write_config(c)) == c exactly.
std::string write_config(const DesignConfig& config);

bool operator==(const SystemParams& lhs, const SystemParams& rhs);
bool operator==(const CaseSpec& lhs, const CaseSpec& rhs);
bool operator==(const SetpointEvent& lhs, const SetpointEvent& rhs);
bool operator==(const SimSection& lhs, const SimSection& rhs);
bool operator==(const OutputSection& lhs, const OutputSection& rhs);
bool operator==(const DesignConfig& lhs, const DesignConfig& rhs);

}  // namespace gfpc

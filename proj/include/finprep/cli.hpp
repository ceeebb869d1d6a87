#pragma once

#include <ostream>
#include <string_view>

#include "finprep/experiment.hpp"

namespace finprep {

/// Parses the JSON run configuration. Recognized keys: seed, test_fraction, cv_folds,
/// techniques (names or objects), sweep_degrees, collapse_threshold, linear_degree,
/// polynomial_degree, raw_space_metrics, jobs. Unknown keys are rejected.
/// Throws std::invalid_argument on malformed input.
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base = {});

/// Exit codes: 0 success, 1 usage/config error, 2 data or numeric error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finprep

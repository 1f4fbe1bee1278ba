#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtc/simulation.hpp"

namespace mtc {

inline constexpr const char* kExperimentCsvHeader =
    "method,n,rho,alpha,sweep_value,rejection_rate,se,replicates,seed";

/// One header line followed by one line per row, in row order.
void write_experiment_csv(std::ostream& out, const ExperimentResult& result);

/// Array of objects keyed like the CSV columns.
nlohmann::json experiment_to_json(const ExperimentResult& result);

nlohmann::json outcome_to_json(const GlobalTestOutcome& outcome);

nlohmann::json selection_to_json(const SelectionReplicate& replicate);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace mtc

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "magnomech/config.hpp"
#include "magnomech/model.hpp"
#include "magnomech/sweep.hpp"

namespace magnomech::io {

// Deterministic serialization: CSV numbers carry 12 significant digits,
// '.' decimal separator, LF line endings, header row always present.
// Unstable rows keep axis columns and stable=0 with empty measure cells.

std::string format_double(double v);

std::string sweep_csv(const sweep::SweepTable& table);
std::string sweep_meta_json(const sweep::SweepTable& table, const std::string& command,
                            const std::string& figure, const cli::Thresholds& thresholds);

std::string derive_csv(const model::SystemParams& p, const model::DerivedState& d);

/// Aligned key/value reports for the CLI.
std::string derive_report(const model::SystemParams& p, const model::DerivedState& d);
std::string stability_report(const model::SystemParams& p, const model::StabilityVerdict& verdict,
                             const std::vector<std::complex<double>>& eigenvalues);
std::string entangle_report(const model::SystemParams& p, const model::DerivedState& d,
                            const sweep::PointResult& point);
std::string validate_report(const model::SystemParams& p, const model::ValidityReport& report,
                            const cli::Thresholds& thresholds);
std::string sweep_summary(const sweep::SweepTable& table);

/// Write with LF endings exactly as passed; throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace magnomech::io

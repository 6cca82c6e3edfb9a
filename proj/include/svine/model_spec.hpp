#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svine/inference.hpp"
#include "svine/process.hpp"

namespace svine {

/// On-disk model description. JSON object with keys
///   kpacf          {kind, theta, horizon}
///   copula         {family, negative_rule}   (family: string or list)
///   truncation_lag  int, optional
///   margin         {kind, params}, optional
/// Unknown keys are rejected at every level, and the decoded values run
/// through the validation of the modules they feed before any computation.
struct ModelSpecFile {
  KpacfSpec kpacf;
  std::vector<Family> families;  // at least one entry
  NegativeTauRule rule = NegativeTauRule::Rotate90;
  int truncation_lag = -1;  // -1: fall back to the kpacf horizon
  std::optional<MarginKind> margin_kind;
  Eigen::VectorXd margin_params;
};

ModelSpecFile read_model_spec(const std::string& path);

int effective_truncation(const ModelSpecFile& spec);

/// Instantiates the process model. Requires exactly one family; builds the
/// margin from margin_params when a margin block is present (the empirical
/// kind carries no parameters and cannot be instantiated from a file).
SVineModel model_from_spec(const ModelSpecFile& spec);

const std::string& margin_kind_name(MarginKind kind);
MarginKind margin_kind_from_name(const std::string& name);

/// Fit report serialization. The JSON mirrors FitReport field by field;
/// reading back restores everything a downstream diagnostic needs
/// (empirical margin samples are not stored, only their kind).
void write_fit_report(const std::string& path, const FitReport& report);
FitReport read_fit_report(const std::string& path);

/// Provenance record written next to every command's outputs. Holds no
/// timestamps, so re-running a command reproduces the manifest byte for
/// byte along with the outputs themselves.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::optional<std::uint64_t> seed;
  std::string version;
  std::vector<std::pair<std::string, std::string>> input_checksums;
  std::vector<std::string> outputs;
};

/// FNV-1a 64-bit digest of a file's raw bytes, as a fixed-width hex string.
std::string fnv1a_hex(const std::string& path);

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace svine

#pragma once

namespace svine {

// Artifact version recorded in every run manifest.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace svine

#pragma once

namespace hardygap {

inline constexpr const char* kVersion = "1.0.0";

// Schema version stamped into configs and reports.
inline constexpr int kSchemaVersion = 1;

}  // namespace hardygap

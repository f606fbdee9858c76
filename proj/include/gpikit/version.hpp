#pragma once

namespace gpikit {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchemaVersion = "gpikit-report-v1";

}  // namespace gpikit

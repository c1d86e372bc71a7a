#pragma once

namespace ncva {

inline constexpr const char* kToolName = "ncva-workbench";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace ncva

#pragma once

namespace snlab {

inline constexpr const char* kCodeVersion = "snlab 0.1.0";

}  // namespace snlab

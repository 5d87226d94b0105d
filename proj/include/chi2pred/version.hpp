#pragma once

namespace chi2pred {

inline constexpr const char* kVersion = "1.0.0";

} // namespace chi2pred

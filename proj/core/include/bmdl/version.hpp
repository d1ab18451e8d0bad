#pragma once

namespace bmdl {

inline constexpr const char* version = "0.1.0";

}  // namespace bmdl

#pragma once

namespace indra {
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kFormatMagic = "INDR";
}  // namespace indra

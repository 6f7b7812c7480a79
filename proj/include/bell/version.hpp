#pragma once

namespace bell {

inline constexpr const char* kVersion = "0.1.0";

}

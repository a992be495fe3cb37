#pragma once

namespace fockoplab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fockoplab

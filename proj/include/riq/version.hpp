#pragma once

namespace riq {

inline constexpr const char* kVersion = "riq 0.1.0";

// Stamped into every emitted file so downstream consumers know how
// superoperator matrices were flattened.
inline constexpr const char* kVecConvention =
    "column-stacking: vec(A X B) = (B^T (x) A) vec(X)";

}  // namespace riq

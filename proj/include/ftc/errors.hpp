#pragma once

#include <stdexcept>
#include <string>

namespace ftc {

/// Invalid model input: field mismatch, non-contractive generator,
/// malformed polygon, broken invariance, unknown preset.
struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A configured budget (vertex count, level count, type count, leaf count)
/// was exceeded before the computation finished.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge within its iteration cap.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace ftc

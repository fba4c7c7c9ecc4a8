#pragma once

#include <functional>
#include <string>

#include "tfnn/common.hpp"

namespace tfnn_test {

// Runs fn and reports the kind tag of the Error it throws ("" if none).
inline std::string error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const tfnn::Error& e) {
    return e.kind();
  }
  return "";
}

}  // namespace tfnn_test

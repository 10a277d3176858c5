#pragma once

#include <gtest/gtest.h>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "pforce/error.hpp"
#include "pforce/ordset.hpp"

namespace pforce {
inline void PrintTo(const OrdSet& s, std::ostream* os) { *os << s.str(); }
}  // namespace pforce

namespace testing_util {

/// Code of the pforce::Error thrown by fn; records a failure if none is.
template <class Fn>
pforce::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const pforce::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no pforce::Error thrown";
  return pforce::ErrorCode::IoError;
}

inline std::string fixture(const std::string& name) { return std::string(PFORCE_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing_util

#include "mscv/common.hpp"

namespace mscv {

std::string to_string(Method m) {
  switch (m) {
    case Method::Method1: return "1";
    case Method::Method2: return "2";
    case Method::Method1Scaled: return "1-scaled";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "1" || s == "method1") return Method::Method1;
  if (s == "2" || s == "method2") return Method::Method2;
  if (s == "1-scaled" || s == "1s" || s == "method1-scaled") return Method::Method1Scaled;
  throw Error("unknown method '" + s + "' (expected 1, 2 or 1-scaled)");
}

}  // namespace mscv

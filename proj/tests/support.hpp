#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mumford/group_io.hpp"

namespace mumford::testing {

inline std::string fixture(const std::string& name) {
  return std::string(MUMFORD_FIXTURES) + "/" + name + ".json";
}

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(fixture(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GroupFile load_fixture(const std::string& name, int digits) {
  return load_group(fixture(name), digits);
}

inline LocalFieldElement el(const std::string& text, const FieldPtr& F, int prec) {
  return parse_element(text, F, prec);
}

inline ProjPoint pt(const std::string& text, const FieldPtr& F, int prec) {
  if (text == "inf") return ProjPoint::infinity();
  return ProjPoint(parse_element(text, F, prec));
}

// v(a/b - 1), the number of leading digits on which a and b agree.
inline int agreement(const LocalFieldElement& a, const LocalFieldElement& b) {
  return (a / b - LocalFieldElement::one(a.field(), a.field()->max_precision())).valuation_or_precision();
}

}  // namespace mumford::testing

#pragma once

// JSON formats for groups and divisors.
//
// Group:
//   { "name": "...", "p": 3, "ramification": {"e": 1} | {"e": 2, "c": "q"},
//     "generators": [[["a","b"],["c","d"]], ...],
//     "balls": [{"index": 1, "center": "4", "radius_val": "2",
//                "complement": false, "closed": false}, ...] }
// radius_val is the p-adic valuation of the radius (a multiple of 1/e).
//
// Divisor: [{"point": "3/5" | "inf", "mult": 1}, ...]

#include <string>

#include "mumford/schottky.hpp"

namespace mumford {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupFile {
  std::string name;
  FieldPtr field;
  SchottkyGroup group;
};

// `digits` is the working precision in p-adic digits.
GroupFile parse_group(const std::string& json_text, int digits);
GroupFile load_group(const std::string& path, int digits);

// Accepts either the JSON divisor format or the shorthand "(a) - (b) + 2*(c)".
Divisor parse_divisor(const std::string& text, const FieldPtr& field, int prec);
std::string divisor_to_json(const Divisor& D);

}  // namespace mumford

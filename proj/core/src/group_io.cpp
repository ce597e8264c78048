#include "mumford/group_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mumford {

using nlohmann::json;

namespace {

std::string as_text(const json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(what + " must be a string or an integer");
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

}  // namespace

GroupFile parse_group(const std::string& json_text, int digits) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw InputError(std::string("malformed JSON: ") + ex.what());
  }
  try {
    const long p = require(doc, "p").get<long>();
    int e = 1;
    mpq_class c(1);
    if (doc.contains("ramification")) {
      const auto& ram = doc.at("ramification");
      e = require(ram, "e").get<int>();
      if (e == 2) c = parse_rational(as_text(require(ram, "c"), "c"), p);
      else if (e != 1) throw InputError("ramification index must be 1 or 2");
    }
    const int N = digits * e;
    const int cap = std::max(4096, 8 * N);
    FieldPtr field = e == 1 ? FieldDescriptor::qp(p, cap) : FieldDescriptor::eisenstein(p, c, cap);

    std::vector<Moebius> gens;
    for (const auto& m : require(doc, "generators")) {
      if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
        throw InputError("each generator must be a 2x2 matrix");
      auto entry = [&](int r, int s) { return parse_element(as_text(m[r][s], "matrix entry"), field, N); };
      gens.emplace_back(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1));
    }
    std::vector<std::pair<int, Ball>> balls;
    for (const auto& b : require(doc, "balls")) {
      const int index = require(b, "index").get<int>();
      Ball B;
      B.center = parse_element(as_text(require(b, "center"), "center"), field, N);
      mpq_class r = parse_rational(as_text(require(b, "radius_val"), "radius_val"), p) * e;
      r.canonicalize();
      if (r.get_den() != 1) throw InputError("radius_val is not in the value group");
      B.radius_val = static_cast<int>(r.get_num().get_si());
      B.kind = b.value("complement", false) ? Ball::Kind::Complement : Ball::Kind::Disk;
      B.closed = b.value("closed", false);
      balls.emplace_back(index, std::move(B));
    }
    SchottkyGroup group(field, N, std::move(gens), std::move(balls));
    return GroupFile{doc.value("name", std::string()), field, std::move(group)};
  } catch (const json::exception& ex) {
    throw InputError(std::string("bad group file: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw InputError(std::string("bad group file: ") + ex.what());
  }
}

GroupFile load_group(const std::string& path, int digits) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group(ss.str(), digits);
}

namespace {

ProjPoint parse_point(const std::string& text, const FieldPtr& field, int prec) {
  if (text == "inf" || text == "oo" || text == "infinity") return ProjPoint::infinity();
  return ProjPoint(parse_element(text, field, prec));
}

}  // namespace

Divisor parse_divisor(const std::string& text, const FieldPtr& field, int prec) {
  size_t k = 0;
  while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
  Divisor D;
  try {
    if (k < text.size() && text[k] == '[') {
      for (const auto& t : json::parse(text)) {
        D.add(parse_point(as_text(require(t, "point"), "point"), field, prec),
              require(t, "mult").get<long>());
      }
      return D;
    }
    // Shorthand: signed sums of [m*](point).
    size_t pos = 0;
    long sign = 1;
    while (pos < text.size()) {
      const char ch = text[pos];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos;
      } else if (ch == '+') {
        sign = 1;
        ++pos;
      } else if (ch == '-') {
        sign = -1;
        ++pos;
      } else {
        long mult = 1;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
          size_t star = text.find('*', pos);
          if (star == std::string::npos) throw InputError("malformed divisor '" + text + "'");
          mult = std::stol(text.substr(pos, star - pos));
          pos = star + 1;
        }
        if (pos >= text.size() || text[pos] != '(')
          throw InputError("malformed divisor '" + text + "'");
        size_t close = text.find(')', pos);
        if (close == std::string::npos) throw InputError("malformed divisor '" + text + "'");
        D.add(parse_point(text.substr(pos + 1, close - pos - 1), field, prec), sign * mult);
        pos = close + 1;
        sign = 1;
      }
    }
  } catch (const json::exception& ex) {
    throw InputError(std::string("bad divisor: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw InputError(std::string("bad divisor: ") + ex.what());
  }
  return D;
}

std::string divisor_to_json(const Divisor& D) {
  json out = json::array();
  for (const auto& [z, m] : D.terms()) out.push_back({{"point", z.to_string()}, {"mult", m}});
  return out.dump();
}

}  // namespace mumford

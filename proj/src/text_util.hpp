#pragma once

#include <cstdio>
#include <string>

#include "histq/linops.hpp"

namespace histq::detail {

// Full-precision literal; reparses to the identical double.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Report formatting: 12 significant digits, negative zero normalized.
inline std::string fmt12(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string coeff_literal(Complex c) {
  if (c.imag() == 0.0) return fmt17(c.real());
  if (c.real() == 0.0) return "(" + fmt17(c.imag()) + ")*i";
  return fmt17(c.real()) + "+(" + fmt17(c.imag()) + ")*i";
}

}  // namespace histq::detail

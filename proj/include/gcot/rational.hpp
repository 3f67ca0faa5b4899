#ifndef GCOT_RATIONAL_HPP_
#define GCOT_RATIONAL_HPP_

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "gcot/error.hpp"

namespace gcot {

// Exact rational in canonical reduced form. Every real-valued quantity in the
// library (norms, distances, masses, weights) is a Scalar.
using Scalar = mpq_class;

// Parses "n", "-n", "p/q" or "-p/q". Surrounding whitespace is not allowed.
inline Scalar parse_scalar(std::string_view text) {
  auto fail = [&] {
    throw Error(ErrorCode::kInvalidInput,
                "invalid rational literal '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  std::size_t slash = text.find('/');
  auto is_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  std::string num(text.substr(0, slash));
  if (!is_int(num)) fail();
  if (num[0] == '+') num.erase(0, 1);
  Scalar out;
  if (slash == std::string_view::npos) {
    out = mpz_class(num);
    return out;
  }
  std::string den(text.substr(slash + 1));
  if (!is_int(den) || den[0] == '-' || den[0] == '+') fail();
  mpz_class d(den);
  if (d == 0) {
    throw Error(ErrorCode::kInvalidInput,
                "zero denominator in '" + std::string(text) + "'");
  }
  out = Scalar(mpz_class(num), d);
  out.canonicalize();
  return out;
}

// "p/q" or "n" (canonical).
inline std::string to_string(const Scalar& x) { return x.get_str(); }

inline Scalar abs_value(const Scalar& x) { return x < 0 ? Scalar(-x) : x; }

inline bool is_integer(const Scalar& x) { return x.get_den() == 1; }

}  // namespace gcot

#endif  // GCOT_RATIONAL_HPP_

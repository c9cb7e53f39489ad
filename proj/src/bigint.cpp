#include "bblab/bigint.hpp"

#include <cctype>

namespace bblab {

std::optional<Int> parse_big(const std::string& text) {
  std::string digits;
  std::string frac;
  long exponent = 0;
  bool seen_digit = false;
  bool in_frac = false;
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '_' || c == ',' || c == ' ') continue;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      (in_frac ? frac : digits) += c;
      seen_digit = true;
      continue;
    }
    if (c == '.' && !in_frac) {
      in_frac = true;
      continue;
    }
    if ((c == 'e' || c == 'E') && seen_digit) {
      try {
        std::size_t used = 0;
        exponent = std::stol(text.substr(i + 1), &used);
        if (used != text.size() - i - 1) return std::nullopt;
      } catch (...) {
        return std::nullopt;
      }
      break;
    }
    return std::nullopt;
  }
  if (!seen_digit) return std::nullopt;
  exponent -= static_cast<long>(frac.size());
  if (exponent < 0) return std::nullopt;  // would not be an integer
  Int value(digits + frac, 10);
  if (exponent > 0) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    value *= scale;
  }
  if (negative) value = -value;
  return value;
}

std::string to_sci(const Int& n, int sig_digits) {
  if (n < 0) return "-" + to_sci(-n, sig_digits);
  std::string s = n.get_str();
  if (s.size() <= static_cast<std::size_t>(sig_digits) + 3) return s;
  std::string mant = s.substr(0, static_cast<std::size_t>(sig_digits));
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out(1, mant[0]);
  if (mant.size() > 1) out += "." + mant.substr(1);
  return out + "e" + std::to_string(s.size() - 1);
}

}  // namespace bblab

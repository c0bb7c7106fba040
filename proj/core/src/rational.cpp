#include "hpt/rational.hpp"

#include <cctype>

#include "hpt/errors.hpp"

namespace hpt {

namespace {

std::size_t scan_integer(std::string_view text, std::size_t pos, bool allow_sign) {
  std::size_t i = pos;
  if (allow_sign && i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  const std::size_t digits_start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == digits_start) throw ParseError("expected digits in rational literal", i);
  return i;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t end = scan_integer(text, 0, true);
  std::string num(text.substr(0, end));
  if (!num.empty() && num.front() == '+') num.erase(0, 1);
  std::string den = "1";
  if (end < text.size()) {
    if (text[end] != '/') throw ParseError("unexpected character in rational literal", end);
    const std::size_t den_start = end + 1;
    end = scan_integer(text, den_start, false);
    den = std::string(text.substr(den_start, end - den_start));
    if (end != text.size()) throw ParseError("trailing characters in rational literal", end);
  }
  mpz_class d(den, 10);
  if (d == 0) throw ParseError("zero denominator", end);
  Rational r(mpz_class(num, 10), d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

}  // namespace hpt

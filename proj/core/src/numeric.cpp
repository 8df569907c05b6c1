#include "cyclekit/numeric.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace cyclekit {

bool fits_i128(const BigInt& value) {
  // Accepts |value| < 2^126, leaving one bit of headroom for callers.
  return mpz_sizeinbase(value.get_mpz_t(), 2) <= 126 || value == 0;
}

i128 to_i128(const BigInt& value) {
  std::array<std::uint64_t, 2> words{0, 0};
  std::size_t count = 0;
  mpz_export(words.data(), &count, -1, sizeof(std::uint64_t), 0, 0, value.get_mpz_t());
  u128 magnitude = (static_cast<u128>(words[1]) << 64) | words[0];
  const auto result = static_cast<i128>(magnitude);
  return sgn(value) < 0 ? -result : result;
}

BigInt from_i128(i128 value) {
  const bool negative = value < 0;
  const u128 magnitude = negative ? static_cast<u128>(0) - static_cast<u128>(value) : static_cast<u128>(value);
  const std::array<std::uint64_t, 2> words{static_cast<std::uint64_t>(magnitude),
                                           static_cast<std::uint64_t>(magnitude >> 64)};
  BigInt out;
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words.data());
  if (negative) out = -out;
  return out;
}

std::string to_string(i128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  u128 magnitude = negative ? static_cast<u128>(0) - static_cast<u128>(value) : static_cast<u128>(value);
  std::string digits;
  while (magnitude != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
    magnitude /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::uint64_t floor_mod(const BigInt& value, std::uint64_t modulus) {
  return mpz_fdiv_ui(value.get_mpz_t(), modulus);
}

BigInt pow(const BigInt& base, std::uint64_t exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

ExactRatio pow(const ExactRatio& base, std::uint64_t exponent) {
  ExactRatio out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

std::optional<BigInt> parse_plain_integer(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::size_t first_digit = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (first_digit == text.size()) return std::nullopt;
  for (std::size_t i = first_digit; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  }
  std::string digits(text.front() == '+' ? text.substr(1) : text);
  return BigInt(digits, 10);
}

}  // namespace

std::optional<BigInt> parse_bigint(std::string_view text) {
  text = trim(text);
  if (const auto caret = text.find('^'); caret != std::string_view::npos) {
    auto base = parse_plain_integer(text.substr(0, caret));
    auto exponent = parse_plain_integer(text.substr(caret + 1));
    if (!base || !exponent || sgn(*exponent) < 0 || !exponent->fits_ulong_p()) return std::nullopt;
    return pow(*base, exponent->get_ui());
  }
  return parse_plain_integer(text);
}

std::optional<ExactRatio> parse_ratio(std::string_view text) {
  text = trim(text);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_plain_integer(text.substr(0, slash));
    auto den = parse_plain_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    ExactRatio out(*num, *den);
    out.canonicalize();
    return out;
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    const bool negative = !whole.empty() && whole.front() == '-';
    if (negative || (!whole.empty() && whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) return std::nullopt;
    auto w = parse_plain_integer(whole);
    auto f = parse_plain_integer(frac);
    if (!w || !f || sgn(*w) < 0 || sgn(*f) < 0 || frac.front() == '-' || frac.front() == '+') return std::nullopt;
    const BigInt scale = pow(BigInt(10), frac.size());
    ExactRatio out(*w * scale + *f, scale);
    out.canonicalize();
    if (negative) out = -out;
    return out;
  }
  auto whole = parse_bigint(text);
  if (!whole) return std::nullopt;
  return ExactRatio(*whole);
}

std::string to_string(const BigInt& value) { return value.get_str(10); }

std::string to_string(const ExactRatio& value) { return value.get_str(10); }

std::size_t bit_length(const BigInt& value) {
  if (value == 0) return 0;
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

}  // namespace cyclekit

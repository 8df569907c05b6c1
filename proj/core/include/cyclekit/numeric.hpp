#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cyclekit {

/// Arbitrary-precision integer used for every trajectory value.
using BigInt = mpz_class;

/// Reduced rational with positive denominator (GMP keeps mpq_class canonical
/// after every arithmetic operation; call canonicalize() after raw assignment).
using ExactRatio = mpq_class;

using i128 = __int128;
using u128 = unsigned __int128;

// Conversions between BigInt and the 128-bit fast path.
bool fits_i128(const BigInt& value);
i128 to_i128(const BigInt& value);
BigInt from_i128(i128 value);
std::string to_string(i128 value);

// Canonical residue in [0, modulus).
std::uint64_t floor_mod(const BigInt& value, std::uint64_t modulus);

BigInt pow(const BigInt& base, std::uint64_t exponent);
ExactRatio pow(const ExactRatio& base, std::uint64_t exponent);

/// Parses a decimal integer ("-330", "1e30" is rejected; "10^30" accepted).
std::optional<BigInt> parse_bigint(std::string_view text);

/// Parses "7/24", "5/12", "-3", "0.25" into an exact ratio.
std::optional<ExactRatio> parse_ratio(std::string_view text);

std::string to_string(const BigInt& value);
std::string to_string(const ExactRatio& value);

/// Number of bits needed for |value| (0 for zero).
std::size_t bit_length(const BigInt& value);

}  // namespace cyclekit

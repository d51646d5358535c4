#pragma once

#include "padic/exact_rational.hpp"
#include "padic/padic_int.hpp"

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

/// Raised when m digits are not enough to keep the elements of a sequence apart.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline BigInt isqrt(const BigInt& n) { return boost::multiprecision::sqrt(n); }

inline bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  const BigInt r = isqrt(n);
  return r * r == n;
}

/// First m base-p digits of the fractional part of sqrt(n), no floating point.
///
/// floor(sqrt(n) * p^m) = isqrt(n * p^2m) carries every digit at once; digit i
/// is isqrt(n * p^(2(i+1))) mod p.
inline std::vector<Digit> sqrt_frac_digits(const BigInt& n, std::uint32_t p, std::size_t m) {
  require_prime(p);
  if (n < 0) throw std::invalid_argument("sqrt_frac_digits: n must be >= 0");
  if (is_perfect_square(n)) {
    throw std::invalid_argument("sqrt_frac_digits: n = " + n.str() + " is a perfect square");
  }
  BigInt scaled = isqrt(n * ipow(BigInt(p), 2 * std::uint64_t{m}));
  std::vector<Digit> digits(m);
  for (std::size_t i = m; i-- > 0;) {
    digits[i] = static_cast<Digit>(scaled % p);
    scaled /= p;
  }
  return digits;
}

/// The first count non-squares n >= 2: 2, 3, 5, 6, 7, 8, 10, ...
inline std::vector<std::uint64_t> non_square_indices(std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t n = 2; out.size() < count; ++n) {
    if (!is_perfect_square(BigInt(n))) out.push_back(n);
  }
  return out;
}

/// Throws PrecisionError naming the first pair of equal elements.
inline void require_distinct(std::span<const PAdicInt> xs, std::string_view what) {
  std::map<std::vector<Digit>, std::size_t> seen;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto digits = xs[i].digits();
    auto [it, inserted] = seen.emplace(std::vector<Digit>(digits.begin(), digits.end()), i);
    if (!inserted) {
      throw PrecisionError(std::string(what) + ": elements " + std::to_string(it->second + 1) + " and " +
                           std::to_string(i + 1) + " coincide at precision m = " +
                           std::to_string(xs[i].precision()) + "; increase the precision");
    }
  }
}

/// monna_inverse({sqrt n}) over the first N non-square n >= 2.
inline std::vector<PAdicInt> gen_sqrt_sequence(std::size_t count, std::uint32_t p, std::size_t m) {
  if (count == 0) throw std::invalid_argument("gen_sqrt_sequence: N must be >= 1");
  require_prime(p);
  std::vector<PAdicInt> out;
  out.reserve(count);
  for (std::uint64_t n : non_square_indices(count)) {
    out.push_back(monna_inverse(sqrt_frac_digits(BigInt(n), p, m), p, m));
  }
  require_distinct(out, "sqrt sequence");
  return out;
}

/// Base-p van der Corput points phi_p(1), ..., phi_p(N).
inline std::vector<ExactRational> gen_vdc(std::size_t count, std::uint32_t p) {
  if (count == 0) throw std::invalid_argument("gen_vdc: N must be >= 1");
  require_prime(p);
  std::vector<ExactRational> out;
  out.reserve(count);
  for (std::uint64_t n = 1; n <= count; ++n) {
    std::size_t width = 1;
    for (std::uint64_t rest = n / p; rest != 0; rest /= p) ++width;
    out.push_back(monna(PAdicInt::from_integer(p, n, width)));
  }
  return out;
}

inline std::vector<PAdicInt> gen_naturals(std::size_t count, std::uint32_t p, std::size_t m) {
  if (count == 0) throw std::invalid_argument("gen_naturals: N must be >= 1");
  std::vector<PAdicInt> out;
  out.reserve(count);
  for (std::uint64_t n = 1; n <= count; ++n) out.push_back(PAdicInt::from_integer(p, n, m));
  return out;
}

/// Digits i.i.d. uniform on {0..p-1}. Uses mt19937_64 with explicit rejection
/// sampling, so a seed yields the same digits on every platform.
inline std::vector<PAdicInt> gen_uniform_random(std::size_t count, std::uint32_t p, std::size_t m,
                                                std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("gen_uniform_random: N must be >= 1");
  if (m == 0) throw std::invalid_argument("gen_uniform_random: precision must be at least 1");
  require_prime(p);
  std::mt19937_64 engine(seed);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / p * p;
  std::vector<PAdicInt> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<Digit> digits(m);
    for (auto& d : digits) {
      std::uint64_t draw = engine();
      while (draw >= limit) draw = engine();
      d = static_cast<Digit>(draw % p);
    }
    out.push_back(PAdicInt::from_digits(p, std::move(digits)));
  }
  return out;
}

// Sequence files ----------------------------------------------------------
//
//   # padic p=<p> m=<m>
//   a_0,a_1,...,a_{m-1}
//   ...

struct SequenceData {
  std::uint32_t p = 2;
  std::size_t m = 1;
  std::vector<PAdicInt> elements;
};

inline void write_sequence(std::ostream& out, std::span<const PAdicInt> xs, std::uint32_t p, std::size_t m) {
  out << "# padic p=" << p << " m=" << m << '\n';
  for (const auto& x : xs) {
    if (x.prime() != p || x.precision() != m) {
      throw std::invalid_argument("write_sequence: elements must share p and m");
    }
    out << x.to_string() << '\n';
  }
}

inline void write_sequence(std::ostream& out, std::span<const PAdicInt> xs) {
  if (xs.empty()) throw std::invalid_argument("write_sequence: cannot infer p and m of an empty list");
  write_sequence(out, xs, xs.front().prime(), xs.front().precision());
}

inline void write_sequence(const std::string& path, std::span<const PAdicInt> xs) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_sequence(file, xs);
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

namespace detail {
inline std::uint64_t parse_unsigned(std::string_view text, std::string_view what, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::runtime_error("line " + std::to_string(line) + ": bad " + std::string(what) + " '" +
                             std::string(text) + "'");
  }
  return value;
}
}  // namespace detail

inline SequenceData read_sequence(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("sequence file: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  constexpr std::string_view prefix = "# padic p=";
  const auto m_pos = line.find(" m=");
  if (line.rfind(prefix, 0) != 0 || m_pos == std::string::npos || m_pos < prefix.size()) {
    throw std::runtime_error("sequence file: malformed header '" + line + "'");
  }
  SequenceData data;
  const auto p = detail::parse_unsigned(std::string_view(line).substr(prefix.size(), m_pos - prefix.size()), "p", 1);
  const auto m = detail::parse_unsigned(std::string_view(line).substr(m_pos + 3), "m", 1);
  if (!is_prime(p) || p > std::numeric_limits<std::uint32_t>::max()) {
    throw std::runtime_error("sequence file: p = " + std::to_string(p) + " is not a supported prime");
  }
  if (m == 0) throw std::runtime_error("sequence file: m must be >= 1");
  data.p = static_cast<std::uint32_t>(p);
  data.m = static_cast<std::size_t>(m);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<Digit> digits;
    digits.reserve(data.m);
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const auto value = detail::parse_unsigned(rest.substr(0, comma), "digit", line_no);
      if (value >= data.p) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": digit " + std::to_string(value) +
                                 " out of range for p = " + std::to_string(data.p));
      }
      digits.push_back(static_cast<Digit>(value));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (digits.size() != data.m) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + std::to_string(data.m) +
                               " digits, found " + std::to_string(digits.size()));
    }
    data.elements.push_back(PAdicInt::from_digits(data.p, std::move(digits)));
  }
  return data;
}

inline SequenceData read_sequence(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  return read_sequence(file);
}

// Declarative sequence description -----------------------------------------

enum class SequenceKind { sqrt_frac, vdc, naturals, uniform_random, file };

struct SequenceSpec {
  SequenceKind kind = SequenceKind::sqrt_frac;
  std::uint32_t p = 3;
  std::size_t m = 32;
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;  // uniform_random only
  std::string path;                   // file only
};

inline std::string_view to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::sqrt_frac: return "sqrt";
    case SequenceKind::vdc: return "vdc";
    case SequenceKind::naturals: return "naturals";
    case SequenceKind::uniform_random: return "random";
    case SequenceKind::file: return "file";
  }
  return "?";
}

/// p-adic elements described by spec. The van der Corput kind maps through
/// monna_inverse, i.e. it yields the naturals reached from the real side.
inline std::vector<PAdicInt> make_sequence(const SequenceSpec& spec) {
  if (spec.count == 0) throw std::invalid_argument("sequence count must be >= 1");
  if ((spec.kind == SequenceKind::uniform_random) != spec.seed.has_value()) {
    throw std::invalid_argument("a seed is required for, and only for, the random sequence");
  }
  switch (spec.kind) {
    case SequenceKind::sqrt_frac: return gen_sqrt_sequence(spec.count, spec.p, spec.m);
    case SequenceKind::naturals: return gen_naturals(spec.count, spec.p, spec.m);
    case SequenceKind::uniform_random: return gen_uniform_random(spec.count, spec.p, spec.m, *spec.seed);
    case SequenceKind::vdc: {
      std::vector<PAdicInt> out;
      for (const auto& y : gen_vdc(spec.count, spec.p)) out.push_back(monna_inverse(y, spec.p, spec.m));
      return out;
    }
    case SequenceKind::file: {
      auto data = read_sequence(spec.path);
      if (data.elements.size() < spec.count) {
        throw std::invalid_argument("sequence file '" + spec.path + "' holds " +
                                    std::to_string(data.elements.size()) + " elements, " +
                                    std::to_string(spec.count) + " requested");
      }
      data.elements.erase(data.elements.begin() + static_cast<std::ptrdiff_t>(spec.count), data.elements.end());
      return data.elements;
    }
  }
  throw std::invalid_argument("unknown sequence kind");
}

}  // namespace padic

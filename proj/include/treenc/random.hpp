#pragma once

#include <charconv>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treenc/error.hpp"

namespace treenc {

// mt19937_64 with hand-rolled draws. The standard distributions are
// implementation-defined, so they would make seeded runs differ between
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Exact nonnegative fraction, parsed from decimals such as "0.11".
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction parse(std::string_view text) {
    Fraction out{0, 1};
    bool seen_digit = false, after_point = false;
    for (char c : text) {
      if (c == '.' && !after_point) {
        after_point = true;
      } else if (c >= '0' && c <= '9') {
        if (out.den > 1'000'000'000'000LL || out.num > 1'000'000'000'000LL) {
          throw PreconditionError("fraction has too many digits: " + std::string(text));
        }
        out.num = out.num * 10 + (c - '0');
        if (after_point) out.den *= 10;
        seen_digit = true;
      } else {
        throw PreconditionError("not a decimal fraction: " + std::string(text));
      }
    }
    if (!seen_digit) throw PreconditionError("not a decimal fraction: " + std::string(text));
    return out;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  // ceil(this * k) for k >= 0.
  std::int64_t ceil_times(std::int64_t k) const { return (num * k + den - 1) / den; }

  bool draw(Rng& rng) const { return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(den))) < num; }

  std::string to_string() const {
    std::string digits = std::to_string(num);
    int decimals = 0;
    for (std::int64_t d = den; d > 1; d /= 10) ++decimals;
    if (decimals == 0) return digits;
    while (static_cast<int>(digits.size()) <= decimals) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - decimals, '.');
    return digits;
  }

  friend bool operator==(const Fraction& l, const Fraction& r) { return l.num * r.den == r.num * l.den; }
};

}  // namespace treenc

#pragma once

// Exact number types used by the scoring model.
//
// Catalog weights and thresholds are decimals with at most nine fractional
// digits, stored as integer multiples of 1e-9. Coverage is a reduced fraction
// of two weight sums. Every coverage-vs-threshold comparison is done with
// 128-bit integer cross multiplication, so boundaries never depend on
// floating-point rounding.

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace csre4soc {

class Decimal {
public:
    static constexpr int kFractionDigits = 9;
    static constexpr std::int64_t kScale = 1'000'000'000;
    /// Largest magnitude accepted when parsing; keeps per-dimension sums far
    /// from int64 overflow.
    static constexpr std::int64_t kMaxWhole = 1'000'000;

    constexpr Decimal() = default;

    static constexpr Decimal from_units(std::int64_t units) {
        Decimal d;
        d.units_ = units;
        return d;
    }
    static constexpr Decimal from_integer(std::int64_t whole) { return from_units(whole * kScale); }

    /// Parses plain decimal notation ("1", "-0.25", "3.000"). No exponent,
    /// at most kFractionDigits fractional digits, magnitude <= kMaxWhole.
    static std::optional<Decimal> parse(std::string_view text) {
        if (text.empty()) return std::nullopt;
        bool negative = false;
        if (text.front() == '-' || text.front() == '+') {
            negative = text.front() == '-';
            text.remove_prefix(1);
        }
        const auto dot = text.find('.');
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
        while (frac.size() > kFractionDigits && frac.back() == '0') frac.remove_suffix(1);
        if (frac.size() > kFractionDigits) return std::nullopt;

        std::int64_t whole_value = 0;
        for (char c : whole) {
            if (c < '0' || c > '9') return std::nullopt;
            whole_value = whole_value * 10 + (c - '0');
            if (whole_value > kMaxWhole) return std::nullopt;
        }
        std::int64_t frac_value = 0;
        for (int i = 0; i < kFractionDigits; ++i) {
            frac_value *= 10;
            if (static_cast<std::size_t>(i) < frac.size()) {
                const char c = frac[static_cast<std::size_t>(i)];
                if (c < '0' || c > '9') return std::nullopt;
                frac_value += c - '0';
            }
        }
        std::int64_t units = whole_value * kScale + frac_value;
        if (units > kMaxWhole * kScale) return std::nullopt;
        return from_units(negative ? -units : units);
    }

    /// Converts a double through its shortest round-trip fixed representation,
    /// so a JSON literal such as 0.1 maps to exactly one tenth.
    static std::optional<Decimal> from_double(double value) {
        if (!(value == value) || value > static_cast<double>(kMaxWhole) ||
            value < -static_cast<double>(kMaxWhole)) {
            return std::nullopt;
        }
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
        if (res.ec != std::errc{}) return std::nullopt;
        return parse(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    }

    constexpr std::int64_t units() const { return units_; }
    constexpr bool is_integer() const { return units_ % kScale == 0; }
    constexpr double to_double() const { return static_cast<double>(units_) / static_cast<double>(kScale); }

    /// Shortest plain decimal text, e.g. "1", "0.25".
    std::string to_string() const {
        std::int64_t u = units_;
        std::string out;
        if (u < 0) {
            out += '-';
            u = -u;
        }
        out += std::to_string(u / kScale);
        std::int64_t frac = u % kScale;
        if (frac != 0) {
            std::string digits = std::to_string(frac);
            digits.insert(0, static_cast<std::size_t>(kFractionDigits) - digits.size(), '0');
            while (digits.back() == '0') digits.pop_back();
            out += '.';
            out += digits;
        }
        return out;
    }

    friend constexpr auto operator<=>(const Decimal&, const Decimal&) = default;

private:
    std::int64_t units_ = 0;
};

/// Non-negative reduced fraction numerator/denominator with denominator > 0.
class Fraction {
public:
    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t numerator, std::int64_t denominator)
        : num_(numerator), den_(denominator) {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (den_ == 0) {
            num_ = 0;
            den_ = 1;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    constexpr std::int64_t numerator() const { return num_; }
    constexpr std::int64_t denominator() const { return den_; }
    constexpr double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Exact test fraction >= threshold.
    constexpr bool reaches(Decimal threshold) const {
        return static_cast<__int128>(num_) * Decimal::kScale >=
               static_cast<__int128>(threshold.units()) * den_;
    }

    std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    /// Parses "n/d" (or a bare integer "n").
    static std::optional<Fraction> parse(std::string_view text) {
        const auto slash = text.find('/');
        auto to_int = [](std::string_view s) -> std::optional<std::int64_t> {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
            return v;
        };
        auto n = to_int(text.substr(0, slash));
        if (!n) return std::nullopt;
        if (slash == std::string_view::npos) return Fraction(*n, 1);
        auto d = to_int(text.substr(slash + 1));
        if (!d || *d == 0) return std::nullopt;
        return Fraction(*n, *d);
    }

    friend constexpr bool operator==(const Fraction&, const Fraction&) = default;
    friend constexpr std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace csre4soc

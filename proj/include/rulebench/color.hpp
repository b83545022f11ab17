#pragma once

// Structured colors: integers, names, and tuples of colors.

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace rulebench {

class Color {
 public:
  Color() : value_(std::int64_t{0}) {}
  Color(std::int64_t v) : value_(v) {}  // NOLINT: integers read naturally as colors
  Color(int v) : value_(std::int64_t{v}) {}

  static Color integer(std::int64_t v) { return Color(v); }
  static Color name(std::string s);
  static Color tuple(std::vector<Color> parts);

  bool is_integer() const { return value_.index() == 0; }
  bool is_name() const { return value_.index() == 1; }
  bool is_tuple() const { return value_.index() == 2; }
  std::int64_t as_integer() const { return std::get<0>(value_); }
  const std::string& as_name() const { return std::get<1>(value_); }
  const std::vector<Color>& as_tuple() const { return std::get<2>(value_); }

  // 3, red, "E(v,1)", (0,("E(v,1)")).  Reparses to an equal color.
  std::string to_string() const;

  // Integers before names before tuples; tuples lexicographically.
  friend std::strong_ordering operator<=>(const Color& a, const Color& b);
  friend bool operator==(const Color& a, const Color& b) { return (a <=> b) == 0; }

 private:
  std::variant<std::int64_t, std::string, std::vector<Color>> value_;
};

}  // namespace rulebench

#ifndef RPYS_REF_PARSE_HPP
#define RPYS_REF_PARSE_HPP

#include <optional>
#include <string>
#include <string_view>

namespace rpys {

inline constexpr int kMinRefYear = 1000;
inline constexpr int kMaxRefYear = 2100;

/// A cited reference split into its comma-separated parts, e.g.
/// "Young T, 1805, PHILOS T R SOC LOND, V95, P65".
struct CitedRef {
  std::string raw;
  std::optional<std::string> first_author;
  std::optional<int> rpy;
  std::optional<std::string> source;
  std::optional<int> volume;
  std::optional<std::string> start_page;
  std::optional<std::string> doi;

  bool operator==(const CitedRef&) const = default;
};

/// Canonical comparison key "AUTHOR|RPY|SOURCE|VVOL|PPAGE".
struct RefKey {
  std::string key;

  auto operator<=>(const RefKey&) const = default;
};

/// Uppercases, drops every character outside [A-Z0-9 ], collapses
/// whitespace runs and trims.
std::string normalize_text(std::string_view text);

/// Never fails; parts that cannot be recognized stay absent.
/// Throws std::invalid_argument for an empty or blank string.
CitedRef parse_cited_ref(std::string_view raw);

RefKey normalize_key(const CitedRef& ref);

std::optional<int> extract_valid_rpy(const CitedRef& ref, int year_min, int year_max);

}  // namespace rpys

#endif

#include "rpys/ref_parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <vector>

namespace rpys {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_digit(c) || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

// Splits on ", " outside brackets and parentheses.
std::vector<std::string_view> split_segments(std::string_view raw) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '[' || c == '(') {
      ++depth;
    } else if ((c == ']' || c == ')') && depth > 0) {
      --depth;
    } else if (c == ',' && depth == 0 && i + 1 < raw.size() && raw[i + 1] == ' ') {
      out.push_back(trim(raw.substr(start, i - start)));
      start = i + 2;
      ++i;
    }
  }
  out.push_back(trim(raw.substr(start)));
  std::erase_if(out, [](std::string_view s) { return s.empty(); });
  return out;
}

std::optional<int> parse_year_token(std::string_view seg) {
  if (seg.size() != 4 || !std::all_of(seg.begin(), seg.end(), is_digit)) return std::nullopt;
  int y = 0;
  std::from_chars(seg.data(), seg.data() + 4, y);
  if (y < kMinRefYear || y > kMaxRefYear) return std::nullopt;
  return y;
}

std::optional<int> parse_volume(std::string_view seg) {
  if (seg.size() < 2 || seg.front() != 'V') return std::nullopt;
  const auto digits = seg.substr(1);
  if (!std::all_of(digits.begin(), digits.end(), is_digit)) return std::nullopt;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || v <= 0) return std::nullopt;
  return v;
}

// "P65", "PE13327"; the token must contain a digit so that a source such as
// "PHYSICS" is never read as a page.
std::optional<std::string> parse_page(std::string_view seg) {
  if (seg.size() < 2 || seg.front() != 'P') return std::nullopt;
  const auto tok = seg.substr(1);
  if (!std::all_of(tok.begin(), tok.end(), [](char c) { return is_alnum(c) || c == '-'; })) {
    return std::nullopt;
  }
  if (std::none_of(tok.begin(), tok.end(), is_digit)) return std::nullopt;
  return std::string(tok);
}

std::optional<std::string> parse_doi(std::string_view seg) {
  if (seg.size() < 5) return std::nullopt;
  std::string head(seg.substr(0, 4));
  std::transform(head.begin(), head.end(), head.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (head != "DOI ") return std::nullopt;
  auto rest = trim(seg.substr(4));
  if (!rest.empty() && rest.front() == '[') rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == ']') rest.remove_suffix(1);
  if (const auto comma = rest.find(','); comma != std::string_view::npos) {
    rest = rest.substr(0, comma);
  }
  rest = trim(rest);
  if (rest.empty()) return std::nullopt;
  std::string doi(rest);
  std::transform(doi.begin(), doi.end(), doi.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return doi;
}

bool is_marker(std::string_view seg) {
  return parse_volume(seg) || parse_page(seg) || parse_doi(seg);
}

std::optional<std::string> normalized_or_absent(std::string_view s) {
  auto n = normalize_text(s);
  if (n.empty()) return std::nullopt;
  return n;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const char raw_c : text) {
    char c = raw_c;
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (!((c >= 'A' && c <= 'Z') || is_digit(c))) continue;
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

CitedRef parse_cited_ref(std::string_view raw) {
  if (trim(raw).empty()) throw std::invalid_argument("parse_cited_ref: empty reference");

  CitedRef ref;
  ref.raw = std::string(raw);
  const auto segs = split_segments(raw);

  std::size_t year_idx = segs.size();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (auto y = parse_year_token(segs[i])) {
      ref.rpy = y;
      year_idx = i;
      break;
    }
  }

  std::size_t next = 0;
  if (ref.rpy) {
    if (year_idx > 0) ref.first_author = normalized_or_absent(segs[0]);
    next = year_idx + 1;
  } else {
    ref.first_author = normalized_or_absent(segs[0]);
    next = 1;
  }
  if (next < segs.size() && !is_marker(segs[next])) {
    ref.source = normalized_or_absent(segs[next]);
    ++next;
  }
  for (std::size_t i = next; i < segs.size(); ++i) {
    if (!ref.volume) {
      if (auto v = parse_volume(segs[i])) {
        ref.volume = v;
        continue;
      }
    }
    if (!ref.start_page) {
      if (auto p = parse_page(segs[i])) {
        ref.start_page = std::move(p);
        continue;
      }
    }
    if (!ref.doi) {
      if (auto d = parse_doi(segs[i])) ref.doi = std::move(d);
    }
  }
  return ref;
}

RefKey normalize_key(const CitedRef& ref) {
  std::string key;
  if (ref.first_author) key += normalize_text(*ref.first_author);
  key += '|';
  if (ref.rpy) key += std::to_string(*ref.rpy);
  key += '|';
  if (ref.source) key += normalize_text(*ref.source);
  key += '|';
  if (ref.volume) key += 'V' + std::to_string(*ref.volume);
  key += '|';
  if (ref.start_page) {
    if (auto page = normalize_text(*ref.start_page); !page.empty()) key += 'P' + page;
  }
  return RefKey{std::move(key)};
}

std::optional<int> extract_valid_rpy(const CitedRef& ref, int year_min, int year_max) {
  if (!ref.rpy || *ref.rpy < year_min || *ref.rpy > year_max) return std::nullopt;
  return ref.rpy;
}

}  // namespace rpys

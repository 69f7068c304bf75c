#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rpys/ref_parse.hpp"

using namespace rpys;

TEST_CASE("Young 1805 reference") {
  const auto r = parse_cited_ref("Young T, 1805, PHILOS T R SOC LOND, V95, P65");
  CHECK(r.first_author == "YOUNG T");
  CHECK(r.rpy == 1805);
  CHECK(r.source == "PHILOS T R SOC LOND");
  CHECK(r.volume == 95);
  CHECK(r.start_page == "65");
  CHECK_FALSE(r.doi);
  CHECK(r.raw == "Young T, 1805, PHILOS T R SOC LOND, V95, P65");
}

TEST_CASE("Archard 1953 reference") {
  const auto r = parse_cited_ref("Archard J F, 1953, J APPL PHYS, V24, P981");
  CHECK(r.first_author == "ARCHARD J F");
  CHECK(r.rpy == 1953);
  CHECK(r.source == "J APPL PHYS");
  CHECK(r.volume == 24);
  CHECK(r.start_page == "981");
}

TEST_CASE("reference without a year keeps only the author") {
  const auto r = parse_cited_ref("ANONYMOUS REPORT");
  CHECK(r.first_author == "ANONYMOUS REPORT");
  CHECK_FALSE(r.rpy);
  CHECK_FALSE(r.source);
  CHECK_FALSE(r.volume);
  CHECK_FALSE(r.start_page);
}

TEST_CASE("DOI is lowercased, bracketed lists keep the first entry") {
  auto r = parse_cited_ref("Young T, 1805, PHILOS T R SOC LOND, V95, P65, DOI 10.1098/RSTL.1805.0005");
  CHECK(r.doi == "10.1098/rstl.1805.0005");
  r = parse_cited_ref("Smith A, 2001, NATURE, V1, P2, DOI [10.1/ABC, 10.2/def]");
  CHECK(r.doi == "10.1/abc");
  CHECK(r.start_page == "2");
}

TEST_CASE("electronic page ids stay textual") {
  const auto r = parse_cited_ref("Garcia M, 2010, PLOS ONE, V5, Pe13327");
  CHECK(r.start_page == "e13327");
  CHECK(normalize_key(r).key == "GARCIA M|2010|PLOS ONE|V5|PE13327");
}

TEST_CASE("a source beginning with P or V is not mistaken for a marker") {
  const auto r = parse_cited_ref("Hertz H, 1896, PHYSICS, V2, P10");
  CHECK(r.source == "PHYSICS");
  CHECK(r.volume == 2);
  CHECK(r.start_page == "10");
  const auto v = parse_cited_ref("Euler L, 1750, VERH AKAD");
  CHECK(v.source == "VERH AKAD");
}

TEST_CASE("no source when the year is followed directly by a marker") {
  const auto r = parse_cited_ref("Bowden F P, 1950, V1, P5");
  CHECK_FALSE(r.source);
  CHECK(r.volume == 1);
  CHECK(r.start_page == "5");
}

TEST_CASE("first in-range year token wins") {
  auto r = parse_cited_ref("Smith J, 0999, 1890, 1950, J X");
  CHECK(r.rpy == 1890);
  CHECK(r.first_author == "SMITH J");
  CHECK(r.source == "1950");
  r = parse_cited_ref("Smith J, 2101, J X");
  CHECK_FALSE(r.rpy);
}

TEST_CASE("two-digit and bracketed years leave rpy absent") {
  CHECK_FALSE(parse_cited_ref("Smith J, 85, J X, V1").rpy);
  CHECK_FALSE(parse_cited_ref("Smith J, [1885], J X, V1").rpy);
  CHECK_FALSE(parse_cited_ref("Smith J, 1885a, J X, V1").rpy);
}

TEST_CASE("reference starting with its year has no author") {
  const auto r = parse_cited_ref("1966, LUBRICATION TRIBOLOGY");
  CHECK_FALSE(r.first_author);
  CHECK(r.rpy == 1966);
  CHECK(r.source == "LUBRICATION TRIBOLOGY");
}

TEST_CASE("commas inside brackets do not split") {
  const auto r = parse_cited_ref("[Anonymous, X], 1999, J Y, V3");
  CHECK(r.first_author == "ANONYMOUS X");
  CHECK(r.rpy == 1999);
}

TEST_CASE("empty reference is rejected") {
  CHECK_THROWS_AS(parse_cited_ref(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_cited_ref("   "), std::invalid_argument);
}

TEST_CASE("normalize_key canonical form") {
  CitedRef r;
  r.raw = "x";
  r.first_author = "Hertz H.";
  r.rpy = 1882;
  r.source = "Angew Math";
  r.volume = 92;
  r.start_page = "156";
  CHECK(normalize_key(r).key == "HERTZ H|1882|ANGEW MATH|V92|P156");
}

TEST_CASE("punctuation-only differences give identical keys") {
  const auto a = parse_cited_ref("Archard J.F., 1953, J. Appl. Phys., V24, P981");
  const auto b = parse_cited_ref("Archard JF, 1953, J Appl Phys, V24, P981");
  CHECK(normalize_key(a) == normalize_key(b));
}

TEST_CASE("all-absent reference renders five empty segments") {
  CitedRef r;
  r.raw = "X";
  CHECK(normalize_key(r).key == "||||");
}

TEST_CASE("normalize_text") {
  CHECK(normalize_text("  Über   die\tBerührung ") == "BER DIE BERHRUNG");
  CHECK(normalize_text("J. Appl.  Phys.") == "J APPL PHYS");
  CHECK(normalize_text("...") == "");
}

TEST_CASE("extract_valid_rpy honours the closed range") {
  auto r = parse_cited_ref("Young T, 1805, PHILOS T R SOC LOND");
  CHECK(extract_valid_rpy(r, 1801, 1900) == 1805);
  r = parse_cited_ref("Jost H P, 1966, LUBRICATION");
  CHECK_FALSE(extract_valid_rpy(r, 1801, 1965));
  CHECK(extract_valid_rpy(r, 1966, 1966) == 1966);
  CHECK_FALSE(extract_valid_rpy(parse_cited_ref("ANONYMOUS"), 1000, 2100));
}

namespace {

std::string random_ref(std::mt19937& rng) {
  static const std::string chars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcxyz0123456789 .,-[]()/";
  std::string s;
  const int parts = 1 + static_cast<int>(rng() % 6);
  for (int p = 0; p < parts; ++p) {
    if (p) s += ", ";
    switch (rng() % 5) {
      case 0: s += std::to_string(900 + rng() % 1300); break;
      case 1: s += "V" + std::to_string(rng() % 500); break;
      case 2: s += "P" + std::to_string(rng() % 900); break;
      default: {
        const auto len = 1 + rng() % 15;
        for (std::size_t i = 0; i < len; ++i) s += chars[rng() % chars.size()];
      }
    }
  }
  if (s.find_first_not_of(" ,") == std::string::npos) s = "X";
  return s;
}

}  // namespace

TEST_CASE("parsing is total and deterministic; keys are upper-case and single-spaced") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 5000; ++i) {
    const auto raw = random_ref(rng);
    const auto a = parse_cited_ref(raw);
    const auto b = parse_cited_ref(raw);
    REQUIRE(a == b);
    if (a.rpy) CHECK((*a.rpy >= kMinRefYear && *a.rpy <= kMaxRefYear));
    for (const auto* field : {&a.first_author, &a.source}) {
      if (!*field) continue;
      CHECK_FALSE((*field)->empty());
      CHECK((*field)->front() != ' ');
      CHECK((*field)->back() != ' ');
    }
    const auto key = normalize_key(a).key;
    CHECK(key.find("  ") == std::string::npos);
    CHECK(std::none_of(key.begin(), key.end(), [](char c) { return c >= 'a' && c <= 'z'; }));
  }
}

TEST_CASE("extracted years never leave the requested range") {
  std::mt19937 rng(99);
  for (int i = 0; i < 5000; ++i) {
    const auto ref = parse_cited_ref(random_ref(rng));
    int lo = 1000 + static_cast<int>(rng() % 1101);
    int hi = 1000 + static_cast<int>(rng() % 1101);
    if (lo > hi) std::swap(lo, hi);
    if (const auto y = extract_valid_rpy(ref, lo, hi)) {
      CHECK(*y >= lo);
      CHECK(*y <= hi);
      CHECK(*y == *ref.rpy);
    } else if (ref.rpy) {
      CHECK((*ref.rpy < lo || *ref.rpy > hi));
    }
  }
}

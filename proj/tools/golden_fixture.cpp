#include "golden_fixture.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rpys/ref_cluster.hpp"
#include "rpys/ref_parse.hpp"

namespace rpys::fixture {

namespace {

// Distinct works in one reference year stay below this similarity, and
// spellings of one work are a single edit apart on keys of >= 20
// characters, so the clustering outcome is the same for every threshold
// in [0.6, 0.95].
constexpr double kDistinctCeiling = 0.6;
constexpr std::size_t kMinVariantKeyLength = 20;

constexpr std::array<const char*, 64> kSurnames = {
    "Abramowitz", "Bhushan",   "Czichos",    "Dowson",     "Etsion",     "Fujimoto",
    "Greenwood",  "Hutchings", "Israelachvili", "Johnson",  "Kragelsky",  "Lancaster",
    "Mindlin",    "Nakamura",  "Okabe",      "Persson",    "Quinn",      "Rabinowicz",
    "Sokolnikoff", "Tabor",    "Ueda",       "Vinogradov", "Williamson", "Xu",
    "Yamaguchi",  "Zhukov",    "Bridgman",   "Cameron",    "Deryaguin",  "Eyring",
    "Frenkel",    "Gohar",     "Hamrock",    "Ishlinskii", "Jacobson",   "Kapitza",
    "Ludema",     "Muskhelishvili", "Nemenyi", "Ocvirk",    "Petrusevich", "Rayleigh",
    "Schallamach", "Timoshenko", "Urey",     "Volterra",   "Wiedemann",  "Yoshimoto",
    "Zener",      "Boussinesq", "Cattaneo",  "Dieterich",  "Ehrenfest",  "Faraday",
    "Grubin",     "Helmholtz", "Kirchhoff",  "Lamb",       "Maxwell",    "Navier",
    "Poiseuille", "Stokes",    "Thomson",    "Weber"};

constexpr std::array<const char*, 40> kJournals = {
    "ANN PHYS-BERLIN",   "NATURE",           "PROC INST MECH ENG", "TRANS ASME",
    "Z ANGEW MATH MECH", "BRIT J APPL PHYS", "J INST PETROL",      "ENGINEERING-LONDON",
    "CR HEBD ACAD SCI",  "PHYS REV",         "J CHEM SOC",         "KOLLOID Z",
    "ARCH ELEKTROTECH",  "MEM ACAD SCI INST", "AM MATH MON",       "MACHINERY",
    "IRON AGE",          "METALLURGIA",      "ANN CHIM PHYS",      "GOTT NACHR",
    "J FRANKLIN INST",   "ENGINEER",         "MECH ENG",           "RUBBER CHEM TECHNOL",
    "IND ENG CHEM",      "DOKL AKAD NAUK",   "J RHEOL",            "ASLE TRANS",
    "MONATSH CHEM",      "TRIBOL INT",       "SURF SCI",           "THIN SOLID FILMS",
    "ACTA METALL",       "J LUBR TECHNOL",   "ZH TEKH FIZ",        "ELEKTROTECH Z",
    "Q J MECH APPL MATH", "J MECH PHYS SOLIDS", "WERKSTATTSTECHNIK", "GLASTECH BER"};

const std::vector<PeakYear> kPeakYears = {
    {1805, 23, 23, "Young T, 1805, PHILOS T R SOC LOND, V95, P65",
     {"YOUNG T, 1805, PHILOS T R SOC LOND, V95, P65", "Young T., 1805, PHILOS T R SOC LOND, V95, P65",
      "Young T, 1805, PHILOS T R SOC LON, V95, P65", "Young T, 1805, PHILOS T R SOC LOND, V95, P66",
      "Yong T, 1805, PHILOS T R SOC LOND, V95, P65"}},
    {1882, 82, 78, "Hertz H, 1882, J REINE ANGEW MATH, V92, P156",
     {"Hertz H., 1882, J REINE ANGEW MATH, V92, P156", "Hertz H, 1882, J REINE ANGEW MATH, V92, P151",
      "Hertz H, 1882, J REINE ANGEW MATHE, V92, P156",
      "HERTZ H, 1882, J REINE ANGEW MATH, V92, P156, DOI 10.1515/crll.1882.92.156"}},
    {1886, 39, 34, "Reynolds O, 1886, PHILOS T R SOC LOND, V177, P157",
     {"Reynolds O, 1886, PHILOS T R SOC LON, V177, P157",
      "Reynold O, 1886, PHILOS T R SOC LOND, V177, P157",
      "Reynolds O., 1886, PHILOS T R SOC LOND, V177, P157",
      "Reynolds O, 1886, PHILOS T R SOC LOND, V177, P158"}},
    {1893, 24, 14, "Barus C, 1893, AM J SCI, V45, P87",
     {"BARUS C, 1893, AM J SCI, V45, P87", "Barus C, 1893, AM J SCI, V45, P88",
      "Barus C., 1893, AM J SCI, V45, P87", "Barus C, 1893, AM J SCI, V46, P87"}},
    {1896, 25, 21, "Hertz H, 1896, MISCELLANEOUS PAPERS, P146",
     {"Hertz H, 1896, MISCELLANEOUS PAPER, P146", "HERTZ H, 1896, MISCELLANEOUS PAPERS, P146",
      "Hertz H, 1896, MISCELLANEOUS PAPERS, P147"}},
    {1909, 121, 102, "Stoney G G, 1909, P ROY SOC LOND A-CONTA, V82, P172",
     {"Stoney GG, 1909, P ROY SOC LOND A-CONTA, V82, P172",
      "Stoney G G, 1909, P ROY SOC LOND ACONTA, V82, P172",
      "Stoney G G, 1909, P ROY SOC LOND A-CONT, V82, P172",
      "Stoney G. G., 1909, P ROY SOC LOND A-CONTA, V82, P172",
      "STONEY GG, 1909, P ROY SOC LOND A-CONTA, V82, P172, DOI 10.1098/rspa.1909.0021"}},
    {1929, 163, 107, "Tomlinson G A, 1929, PHILOS MAG, V7, P905",
     {"Tomlinson GA, 1929, PHILOS MAG, V7, P905", "Tomlinson G A, 1929, PHILOS MAG, V7, P906",
      "TOMLINSON G A, 1929, PHILOS MAG, V7, P905", "Tomlinson G A, 1929, PHILOS MAG, V8, P905"}},
    {1948, 299, 72, "Savage R H, 1948, J APPL PHYS, V19, P1",
     {"Savage RH, 1948, J APPL PHYS, V19, P1", "SAVAGE R H, 1948, J APPL PHYS, V19, P1",
      "Savage R H, 1948, J APP PHYS, V19, P1"}},
    {1950, 579, 233, "Bowden F P, 1950, FRICTION LUBRICATION",
     {"Bowden FP, 1950, FRICTION LUBRICATION", "Bowden F P, 1950, FRICTION LUBRICATIO",
      "BOWDEN F P, 1950, FRICTION LUBRICATION", "Bowden F. P., 1950, FRICTION LUBRICATION"}},
    {1953, 968, 484, "Archard J F, 1953, J APPL PHYS, V24, P981",
     {"ARCHARD JF, 1953, J APPL PHYS, V24, P981", "Archard J.F., 1953, J APPL PHYS, V24, P981",
      "Archard J F, 1953, J APP PHYS, V24, P981", "Archard J F, 1953, J APPL PHYS, V24, P988",
      "ARCHARD JF, 1953, J APPL PHYS, V24, P981, DOI 10.1063/1.1721448"}},
    {1959, 792, 128, "Archard J F, 1959, WEAR, V2, P438",
     {"Archard JF, 1959, WEAR, V2, P438", "ARCHARD J F, 1959, WEAR, V2, P438",
      "Archard J F, 1959, WEAR, V2, P439",
      "Archard J F, 1959, WEAR, V2, P438, DOI 10.1016/0043-1648(59)90001-6"}},
};

const std::array<const char*, 5> kUndated = {
    "ANONYMOUS REPORT", "Jost H P, LUBRICATION TRIBOLOGY EDUCATION",
    "[Anonymous], ASTM G99 STANDARD TEST METHOD", "Czichos H, TRIBOLOGY SYSTEMS APPROACH",
    "Popper K R, LOGIC SCI DISCOVERY"};

std::size_t pick(std::mt19937& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

double unit(std::mt19937& rng) { return static_cast<double>(rng()) / 4294967296.0; }

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

std::string initials(std::mt19937& rng) {
  std::string s(1, static_cast<char>('A' + pick(rng, 26)));
  if (pick(rng, 3) == 0) {
    s += ' ';
    s += static_cast<char>('A' + pick(rng, 26));
  }
  return s;
}

std::string random_work(std::mt19937& rng, int year) {
  std::ostringstream os;
  os << kSurnames[pick(rng, kSurnames.size())] << ' ' << initials(rng) << ", " << year << ", "
     << kJournals[pick(rng, kJournals.size())] << ", V" << 1 + pick(rng, 300) << ", P"
     << 1 + pick(rng, 1500);
  return os.str();
}

// Keys already used in each reference year, for the dissimilarity check.
class YearBlocks {
 public:
  bool fits(const std::string& raw) const {
    const auto ref = parse_cited_ref(raw);
    const auto key = normalize_key(ref);
    const auto it = keys_.find(*ref.rpy);
    if (it == keys_.end()) return true;
    return std::all_of(it->second.begin(), it->second.end(),
                       [&](const RefKey& other) { return similarity(key, other) < kDistinctCeiling; });
  }

  void add(const std::string& raw) {
    const auto ref = parse_cited_ref(raw);
    keys_[*ref.rpy].push_back(normalize_key(ref));
  }

  std::string fresh_work(std::mt19937& rng, int year) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      auto w = random_work(rng, year);
      if (fits(w)) {
        add(w);
        return w;
      }
    }
    throw std::runtime_error("fixture: no distinct work found for " + std::to_string(year));
  }

 private:
  std::map<int, std::vector<RefKey>> keys_;
};

void check_variants(const PeakYear& p) {
  const auto canon = normalize_key(parse_cited_ref(p.canonical));
  if (canon.key.size() < kMinVariantKeyLength) {
    throw std::logic_error("fixture: key too short for " + p.canonical);
  }
  for (const auto& v : p.variants) {
    const auto ref = parse_cited_ref(v);
    if (ref.rpy != p.year || levenshtein(normalize_key(ref).key, canon.key) > 1) {
      throw std::logic_error("fixture: variant too far from canonical: " + v);
    }
  }
}

// Occurrences of the dominant work: canonical spelling first, each variant
// with a smaller count so the canonical spelling wins the election.
std::vector<std::string> dominant_refs(const PeakYear& p) {
  std::vector<std::string> out;
  long long used = 0;
  for (std::size_t i = 0; i < p.variants.size(); ++i) {
    const long long n = std::max<long long>(1, p.top_tcr / 12 - static_cast<long long>(i));
    out.insert(out.end(), static_cast<std::size_t>(n), p.variants[i]);
    used += n;
  }
  const long long canon = p.top_tcr - used;
  if (canon <= p.top_tcr / 12) throw std::logic_error("fixture: canonical not dominant for " + p.canonical);
  out.insert(out.end(), static_cast<std::size_t>(canon), p.canonical);
  return out;
}

struct RecordSpec {
  std::string id;
  int year;
  std::vector<std::string> refs;
};

std::vector<RecordSpec> pack_records(std::vector<std::string> refs, const std::string& id_prefix,
                                     std::mt19937& rng) {
  shuffle(refs, rng);
  std::vector<RecordSpec> out;
  std::size_t pos = 0;
  while (pos < refs.size()) {
    const std::size_t n = std::min(refs.size() - pos, 15 + pick(rng, 30));
    RecordSpec r;
    char id[32];
    std::snprintf(id, sizeof id, "%s%09zu", id_prefix.c_str(), out.size() + 1);
    r.id = id;
    r.year = 1953 + static_cast<int>(pick(rng, 62));
    r.refs.assign(refs.begin() + static_cast<std::ptrdiff_t>(pos),
                  refs.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
    out.push_back(std::move(r));
  }
  if (!out.empty()) out.front().year = 1953;
  if (out.size() > 1) out.back().year = 2014;
  return out;
}

std::string render(const std::vector<RecordSpec>& records, std::mt19937& rng) {
  std::ostringstream os;
  os << "FN Clarivate Analytics Web of Science\nVR 1.0\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << "PT J\n";
    os << "AU " << kSurnames[pick(rng, kSurnames.size())] << ", " << initials(rng) << '\n';
    os << "   " << kSurnames[pick(rng, kSurnames.size())] << ", " << initials(rng) << '\n';
    os << "TI Tribological behaviour of sliding contacts, part " << i + 1 << '\n';
    os << "SO " << kJournals[pick(rng, kJournals.size())] << '\n';
    os << "LA English\n";
    os << "DT " << (pick(rng, 8) == 0 ? "Review" : "Article") << '\n';
    for (std::size_t k = 0; k < r.refs.size(); ++k) os << (k == 0 ? "CR " : "   ") << r.refs[k] << '\n';
    os << "NR " << r.refs.size() << '\n';
    os << "PY " << r.year << '\n';
    os << "UT " << r.id << '\n';
    os << "ER\n\n";
  }
  os << "EF\n";
  return os.str();
}

}  // namespace

const std::vector<PeakYear>& peak_years() { return kPeakYears; }

std::string golden_peaks_export() {
  std::mt19937 rng(1805);
  YearBlocks blocks;
  std::vector<std::string> refs;
  for (const auto& p : kPeakYears) {
    check_variants(p);
    blocks.add(p.canonical);
    for (const auto& v : p.variants) blocks.add(v);
    auto dom = dominant_refs(p);
    refs.insert(refs.end(), dom.begin(), dom.end());

    // The rest of the year: other works, each smaller than the dominant one.
    long long remaining = p.tcr - p.top_tcr;
    const long long cap = std::min<long long>(p.top_tcr - 1, 45);
    while (remaining > 0) {
      const long long n = std::min<long long>(remaining, 1 + static_cast<long long>(pick(rng, static_cast<std::size_t>(cap))));
      const auto w = blocks.fresh_work(rng, p.year);
      refs.insert(refs.end(), static_cast<std::size_t>(n), w);
      remaining -= n;
    }
  }
  return render(pack_records(std::move(refs), "WOS:000100", rng), rng);
}

std::string golden_background_export() {
  std::mt19937 rng(1965);
  YearBlocks blocks;
  std::set<int> peak_set;
  for (const auto& p : kPeakYears) peak_set.insert(p.year);

  std::vector<std::string> refs;
  for (int year = 1801; year <= 1965; ++year) {
    if (peak_set.count(year)) continue;
    const auto n = pick(rng, 5);
    for (std::size_t i = 0; i < n; ++i) refs.push_back(blocks.fresh_work(rng, year));
  }
  // Modern literature, cited far more often than the early years.
  for (int year = 1966; year <= 2014; ++year) {
    const int total = 220 - 4 * std::abs(year - 2004) + static_cast<int>(pick(rng, 15));
    int remaining = std::max(total, 20);
    while (remaining > 0) {
      const int n = std::min(remaining, 1 + static_cast<int>(pick(rng, 8)));
      const auto w = blocks.fresh_work(rng, year);
      refs.insert(refs.end(), static_cast<std::size_t>(n), w);
      remaining -= n;
    }
  }
  for (std::size_t i = 0; i < kUndated.size(); ++i) {
    refs.insert(refs.end(), i + 1, kUndated[i]);
  }
  return render(pack_records(std::move(refs), "WOS:000200", rng), rng);
}

void write_golden_fixture(const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + name);
  };
  put("golden_peaks.txt", golden_peaks_export());
  put("golden_background.txt", golden_background_export());
}

std::string synthetic_export(std::size_t n_refs, unsigned seed) {
  std::mt19937 rng(seed);
  const std::size_t n_works = std::max<std::size_t>(1, n_refs / 20);
  std::vector<std::string> works;
  works.reserve(n_works);
  for (std::size_t i = 0; i < n_works; ++i) {
    works.push_back(random_work(rng, 1800 + static_cast<int>(pick(rng, 215))));
  }
  // Zipf-like popularity.
  std::vector<double> cumulative(n_works);
  double total = 0.0;
  for (std::size_t i = 0; i < n_works; ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    cumulative[i] = total;
  }

  std::vector<std::string> refs;
  refs.reserve(n_refs);
  for (std::size_t i = 0; i < n_refs; ++i) {
    const double u = unit(rng) * total;
    auto idx = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                        cumulative.begin());
    idx = std::min(idx, n_works - 1);
    std::string r = works[idx];
    if (pick(rng, 10) == 0) {
      // one-character misspelling inside the author name
      const auto pos = 1 + pick(rng, 3);
      r.erase(pos, 1);
    }
    refs.push_back(std::move(r));
  }

  std::vector<RecordSpec> records;
  for (std::size_t pos = 0; pos < refs.size(); pos += 30) {
    RecordSpec rec;
    rec.id = "SYN:" + std::to_string(records.size() + 1);
    rec.year = 1953 + static_cast<int>(pick(rng, 62));
    const auto end = std::min(refs.size(), pos + 30);
    rec.refs.assign(refs.begin() + static_cast<std::ptrdiff_t>(pos),
                    refs.begin() + static_cast<std::ptrdiff_t>(end));
    records.push_back(std::move(rec));
  }
  return render(records, rng);
}

}  // namespace rpys::fixture

#include "rpys/wos_ingest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rpys/errors.hpp"

namespace rpys {

namespace {

// Field tags of the tagged export format. Anything else is reported as
// UnknownTag and its contents are skipped.
constexpr std::array<std::string_view, 72> kKnownTags = {
    "FN", "VR", "PT", "AU", "AF", "BA", "BF", "CA", "GP", "BE", "TI", "SO", "SE", "BS",
    "LA", "DT", "CT", "CY", "CL", "SP", "HO", "DE", "ID", "AB", "C1", "C3", "RP", "EM",
    "RI", "OI", "FU", "FP", "FX", "CR", "NR", "TC", "Z9", "U1", "U2", "PU", "PI", "PA",
    "SN", "EI", "BN", "J9", "JI", "PD", "PY", "VL", "IS", "PN", "SU", "SI", "MA", "BP",
    "EP", "AR", "DI", "D2", "EA", "PG", "WC", "WE", "SC", "GA", "UT", "PM", "OA", "HC",
    "HP", "DA"};

bool is_known_tag(std::string_view tag) {
  return std::find(kKnownTags.begin(), kKnownTags.end(), tag) != kKnownTags.end();
}

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_tag_line(std::string_view line) {
  if (line.size() < 2) return false;
  const auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!upper(line[0]) || !(upper(line[1]) || digit(line[1]))) return false;
  return line.size() == 2 || line[2] == ' ';
}

// Returns the 1-based line of the first invalid byte sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  std::size_t line = 1;
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '\n') ++line;
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return line;
    }
    if (i + len > n) return line;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return line;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return line;
    }
    i += len;
  }
  return std::nullopt;
}

struct FieldLine {
  std::size_t line;
  std::string value;
};

struct PendingRecord {
  std::size_t start_line = 0;
  std::vector<std::pair<std::string, std::vector<FieldLine>>> fields;

  std::vector<FieldLine>* find(std::string_view tag) {
    for (auto& [t, lines] : fields) {
      if (t == tag) return &lines;
    }
    return nullptr;
  }
};

class ExportParser {
 public:
  explicit ExportParser(const std::string& source) : source_(source) {}

  ParseResult run(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    if (const auto bad = find_invalid_utf8(text)) {
      throw InputError(source_ + ": line " + std::to_string(*bad) + ": invalid UTF-8");
    }

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      auto line = text.substr(pos, end - pos);
      pos = end + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      if (done_) continue;
      handle_line(line, line_no);
    }
    if (current_) {
      warn(std::max<std::size_t>(line_no, 1), WarningKind::MissingTerminator,
           "record starting at line " + std::to_string(current_->start_line) +
               " has no ER before end of input");
      finish_record();
    }
    return std::move(result_);
  }

 private:
  void warn(std::size_t line, WarningKind kind, std::string detail) {
    result_.warnings.push_back({source_, line, kind, std::move(detail)});
  }

  void handle_line(std::string_view line, std::size_t line_no) {
    if (trim(line).empty()) {
      field_ = nullptr;
      skipping_ = false;
      return;
    }
    if (line.size() > 3 && line.substr(0, 3) == "   " && line[3] != ' ') {
      if (skipping_) return;
      if (field_ == nullptr) {
        warn(line_no, WarningKind::UnknownTag, "continuation line outside a field");
        return;
      }
      field_->push_back({line_no, std::string(trim(line))});
      return;
    }
    if (!is_tag_line(line)) {
      warn(line_no, WarningKind::UnknownTag, "unrecognized line '" + std::string(line) + "'");
      field_ = nullptr;
      skipping_ = false;
      return;
    }

    const auto tag = line.substr(0, 2);
    const auto value = line.size() > 3 ? trim(line.substr(3)) : std::string_view{};
    field_ = nullptr;
    skipping_ = false;

    if (tag == "ER" && value.empty()) {
      if (current_) {
        finish_record();
      } else {
        warn(line_no, WarningKind::UnknownTag, "ER outside a record");
      }
      return;
    }
    if (tag == "EF" && value.empty()) {
      if (current_) {
        warn(line_no, WarningKind::MissingTerminator,
             "record starting at line " + std::to_string(current_->start_line) +
                 " has no ER before EF");
        finish_record();
      }
      done_ = true;
      return;
    }
    if (!current_ && (tag == "FN" || tag == "VR")) return;

    if (current_ && tag == "PT") {
      warn(line_no, WarningKind::MissingTerminator,
           "record starting at line " + std::to_string(current_->start_line) +
               " has no ER before the next PT");
      finish_record();
    }
    if (!current_) {
      current_.emplace();
      current_->start_line = line_no;
    }
    if (!is_known_tag(tag)) {
      warn(line_no, WarningKind::UnknownTag, "unknown field tag '" + std::string(tag) + "'");
      skipping_ = true;
      return;
    }

    auto* lines = current_->find(tag);
    if (lines == nullptr) {
      current_->fields.emplace_back(std::string(tag), std::vector<FieldLine>{});
      lines = &current_->fields.back().second;
    }
    lines->push_back({line_no, std::string(value)});
    field_ = lines;
  }

  void finish_record() {
    auto pending = std::move(*current_);
    current_.reset();
    field_ = nullptr;
    skipping_ = false;

    BiblioRecord rec;
    ++ordinal_;

    for (const auto& [tag, lines] : pending.fields) {
      if (tag == "CR") {
        for (const auto& fl : lines) {
          if (fl.value.empty()) {
            warn(fl.line, WarningKind::EmptyField, "empty cited reference");
          } else {
            rec.cited_refs.push_back(fl.value);
          }
        }
        continue;
      }
      const auto& first = lines.front();
      if (first.value.empty()) {
        warn(first.line, WarningKind::EmptyField, "empty " + tag + " field");
        continue;
      }
      if (tag == "UT") {
        rec.record_id = first.value;
      } else if (tag == "DT") {
        rec.doc_type = first.value;
      } else if (tag == "PY") {
        const auto& v = first.value;
        const bool digits = v.size() == 4 && std::all_of(v.begin(), v.end(), [](char c) {
          return c >= '0' && c <= '9';
        });
        const int year = digits ? std::stoi(v) : 0;
        if (digits && year >= kMinPubYear && year <= kMaxPubYear) {
          rec.pub_year = year;
        } else {
          warn(first.line, WarningKind::BadYear, "publication year '" + v + "'");
        }
      }
    }
    if (rec.record_id.empty()) rec.record_id = source_ + ":" + std::to_string(ordinal_);
    result_.records.push_back(std::move(rec));
    result_.record_lines.push_back(pending.start_line);
  }

  std::string source_;
  ParseResult result_;
  std::optional<PendingRecord> current_;
  std::vector<FieldLine>* field_ = nullptr;
  bool skipping_ = false;
  bool done_ = false;
  std::size_t ordinal_ = 0;
};

ParseResult parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw InputError("cannot read '" + path.string() + "'");
  return parse_wos_export(std::string_view(text), path.string());
}

}  // namespace

std::string_view to_string(WarningKind kind) {
  switch (kind) {
    case WarningKind::UnknownTag: return "UnknownTag";
    case WarningKind::MissingTerminator: return "MissingTerminator";
    case WarningKind::BadYear: return "BadYear";
    case WarningKind::EmptyField: return "EmptyField";
    case WarningKind::DuplicateRecord: return "DuplicateRecord";
  }
  return "Unknown";
}

ParseResult parse_wos_export(std::string_view text, const std::string& source_name) {
  return ExportParser(source_name).run(text);
}

ParseResult parse_wos_export(std::istream& stream, const std::string& source_name) {
  std::string text((std::istreambuf_iterator<char>(stream)), std::istreambuf_iterator<char>());
  if (stream.bad()) throw InputError(source_name + ": read failure");
  return parse_wos_export(std::string_view(text), source_name);
}

void write_wos_export(const std::vector<BiblioRecord>& records, std::ostream& out) {
  out << "FN Clarivate Analytics Web of Science\nVR 1.0\n";
  for (const auto& rec : records) {
    out << "PT J\n";
    if (rec.doc_type) out << "DT " << *rec.doc_type << '\n';
    for (std::size_t i = 0; i < rec.cited_refs.size(); ++i) {
      out << (i == 0 ? "CR " : "   ") << rec.cited_refs[i] << '\n';
    }
    if (rec.pub_year) out << "PY " << *rec.pub_year << '\n';
    out << "UT " << rec.record_id << "\nER\n\n";
  }
  out << "EF\n";
}

CorpusLoad load_corpus(std::vector<std::filesystem::path> paths) {
  std::sort(paths.begin(), paths.end(),
            [](const auto& a, const auto& b) { return a.string() < b.string(); });

  std::vector<std::future<ParseResult>> jobs;
  jobs.reserve(paths.size());
  for (const auto& p : paths) {
    jobs.push_back(std::async(paths.size() > 1 ? std::launch::async : std::launch::deferred,
                              parse_file, p));
  }

  CorpusLoad out;
  std::unordered_set<std::string> seen;
  for (std::size_t f = 0; f < jobs.size(); ++f) {
    auto parsed = jobs[f].get();
    out.corpus.provenance.push_back(paths[f].string());
    std::move(parsed.warnings.begin(), parsed.warnings.end(), std::back_inserter(out.warnings));
    for (std::size_t r = 0; r < parsed.records.size(); ++r) {
      auto& rec = parsed.records[r];
      if (!seen.insert(rec.record_id).second) {
        out.warnings.push_back({paths[f].string(), parsed.record_lines[r],
                                WarningKind::DuplicateRecord,
                                "record '" + rec.record_id + "' already loaded; skipped"});
        continue;
      }
      out.corpus.records.push_back(std::move(rec));
    }
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n_records = corpus.records.size();
  for (const auto& rec : corpus.records) {
    stats.n_cited_refs += rec.cited_refs.size();
    if (!rec.pub_year) continue;
    const int y = *rec.pub_year;
    if (!stats.pub_year_min || y < *stats.pub_year_min) stats.pub_year_min = y;
    if (!stats.pub_year_max || y > *stats.pub_year_max) stats.pub_year_max = y;
  }
  return stats;
}

}  // namespace rpys

#ifndef RPYS_WOS_INGEST_HPP
#define RPYS_WOS_INGEST_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rpys {

/// One citing publication as read from a tagged export.
struct BiblioRecord {
  std::string record_id;
  std::optional<int> pub_year;
  std::vector<std::string> cited_refs;
  std::optional<std::string> doc_type;

  bool operator==(const BiblioRecord&) const = default;
};

enum class WarningKind { UnknownTag, MissingTerminator, BadYear, EmptyField, DuplicateRecord };

std::string_view to_string(WarningKind kind);

struct ParseWarning {
  std::string file;
  std::size_t line_number = 1;
  WarningKind kind = WarningKind::UnknownTag;
  std::string detail;

  bool operator==(const ParseWarning&) const = default;
};

struct ParseResult {
  std::vector<BiblioRecord> records;
  std::vector<ParseWarning> warnings;
  std::vector<std::size_t> record_lines;  // first line of each record
};

struct Corpus {
  std::vector<BiblioRecord> records;
  std::vector<std::string> provenance;

  bool operator==(const Corpus&) const = default;
};

struct CorpusLoad {
  Corpus corpus;
  std::vector<ParseWarning> warnings;
};

struct CorpusStats {
  std::size_t n_records = 0;
  std::size_t n_cited_refs = 0;
  std::optional<int> pub_year_min;
  std::optional<int> pub_year_max;

  bool operator==(const CorpusStats&) const = default;
};

inline constexpr int kMinPubYear = 1500;
inline constexpr int kMaxPubYear = 2100;

/// Parses a tagged plain-text export (FN/VR header, two-letter field tags,
/// three-space continuation lines, records closed by ER, file closed by EF).
///
/// Recoverable malformations become warnings. A stream that is not valid
/// UTF-8 throws InputError. Records without a UT field receive the id
/// "<source_name>:<ordinal>" with a 1-based ordinal inside the file.
ParseResult parse_wos_export(std::istream& stream, const std::string& source_name);
ParseResult parse_wos_export(std::string_view text, const std::string& source_name);

/// Writes records back in the tagged format; re-parsing the output
/// reproduces the records.
void write_wos_export(const std::vector<BiblioRecord>& records, std::ostream& out);

/// Reads and merges several export files. Paths are processed in
/// lexicographic order so the result does not depend on argument order;
/// a record id seen twice keeps its first occurrence and emits a
/// DuplicateRecord warning. Throws InputError naming an unreadable path.
CorpusLoad load_corpus(std::vector<std::filesystem::path> paths);

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace rpys

#endif

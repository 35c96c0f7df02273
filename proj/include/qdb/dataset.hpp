#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdb {

enum class FaceType { Wide, Narrow };

// One observed row of a categorization-decision experiment.
struct ExperimentRow {
  std::string dataset_id;
  FaceType face_type = FaceType::Narrow;
  double p_g = 0.0;
  double p_a_given_g = 0.0;
  double p_b = 0.0;
  double p_a_given_b = 0.0;
  double p_t = 0.0;  // total probability as printed by the source
  double p_a = 0.0;  // unknown-condition observation

  // Throws InvariantViolation naming the row.
  void validate() const;

  bool operator==(const ExperimentRow&) const = default;
};

// Source tables print two decimals, so p_g + p_b may be off by rounding.
inline constexpr double kPriorSumTolerance = 0.01;

enum class RowFormat { Csv, Json };

inline constexpr const char* kCsvHeader = "dataset,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t,p_a";

char face_code(FaceType face);  // 'W' or 'N'

std::vector<ExperimentRow> parse_rows_csv(std::istream& in);
std::vector<ExperimentRow> parse_rows_json(std::istream& in);

// Throws ParseError (with line or field) and InvariantViolation (with row id).
std::vector<ExperimentRow> load_rows(const std::filesystem::path& path, RowFormat format);

// Format from the file extension (.csv / .json); ParseError otherwise.
RowFormat format_for(const std::filesystem::path& path);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace qdb

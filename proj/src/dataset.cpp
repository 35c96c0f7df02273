#include "qdb/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "qdb/error.hpp"

namespace qdb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_error(std::size_t line, std::string_view field, const std::string& why) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", field '" +
                                         std::string(field) + "': " + why);
}

double parse_decimal(std::string_view text, std::size_t line, std::string_view field) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::fixed);
  if (text.empty() || ec != std::errc() || ptr != last) {
    parse_error(line, field, "not a decimal number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) parse_error(line, field, "non-finite value");
  return value;
}

FaceType parse_face(std::string_view text, std::size_t line) {
  if (text == "W") return FaceType::Wide;
  if (text == "N") return FaceType::Narrow;
  parse_error(line, "face_type", "expected W or N, got '" + std::string(text) + "'");
}

}  // namespace

char face_code(FaceType face) { return face == FaceType::Wide ? 'W' : 'N'; }

void ExperimentRow::validate() const {
  const std::string id = dataset_id + "/" + face_code(face_type);
  const std::pair<const char*, double> fields[] = {
      {"p_g", p_g}, {"p_a_given_g", p_a_given_g}, {"p_b", p_b},
      {"p_a_given_b", p_a_given_b}, {"p_t", p_t}, {"p_a", p_a}};
  for (const auto& [name, value] : fields) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::InvariantViolation,
                  "row " + id + ": " + name + " = " + std::to_string(value) + " outside [0, 1]");
    }
  }
  if (std::abs(p_g + p_b - 1.0) > kPriorSumTolerance + 1e-12) {
    throw Error(ErrorCode::InvariantViolation, "row " + id + ": p_g + p_b differs from 1");
  }
}

std::vector<ExperimentRow> parse_rows_csv(std::istream& in) {
  std::vector<ExperimentRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != kCsvHeader) {
        parse_error(line_no, "header", std::string("expected '") + kCsvHeader + "'");
      }
      header_seen = true;
      continue;
    }
    const auto cells = split(text, ',');
    if (cells.size() != 8) {
      parse_error(line_no, "row", "expected 8 fields, got " + std::to_string(cells.size()));
    }
    ExperimentRow row;
    row.dataset_id = std::string(cells[0]);
    if (row.dataset_id.empty()) parse_error(line_no, "dataset", "empty dataset id");
    row.face_type = parse_face(cells[1], line_no);
    row.p_g = parse_decimal(cells[2], line_no, "p_g");
    row.p_a_given_g = parse_decimal(cells[3], line_no, "p_a_given_g");
    row.p_b = parse_decimal(cells[4], line_no, "p_b");
    row.p_a_given_b = parse_decimal(cells[5], line_no, "p_a_given_b");
    row.p_t = parse_decimal(cells[6], line_no, "p_t");
    row.p_a = parse_decimal(cells[7], line_no, "p_a");
    row.validate();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ExperimentRow> parse_rows_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (trim(text).empty()) return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("rows")) throw Error(ErrorCode::ParseError, "expected a 'rows' array");
    list = &doc.at("rows");
  }
  if (!list->is_array()) throw Error(ErrorCode::ParseError, "expected an array of rows");

  std::vector<ExperimentRow> rows;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& item = (*list)[i];
    auto where = [i](const char* field) {
      return "row " + std::to_string(i) + ", field '" + field + "'";
    };
    auto number = [&](const char* field) {
      if (!item.contains(field) || !item.at(field).is_number()) {
        throw Error(ErrorCode::ParseError, where(field) + ": missing or not a number");
      }
      return item.at(field).get<double>();
    };
    auto string = [&](const char* field) {
      if (!item.contains(field) || !item.at(field).is_string()) {
        throw Error(ErrorCode::ParseError, where(field) + ": missing or not a string");
      }
      return item.at(field).get<std::string>();
    };
    ExperimentRow row;
    row.dataset_id = string("dataset");
    const auto face = string("face_type");
    if (face == "W") {
      row.face_type = FaceType::Wide;
    } else if (face == "N") {
      row.face_type = FaceType::Narrow;
    } else {
      throw Error(ErrorCode::ParseError, where("face_type") + ": expected W or N");
    }
    row.p_g = number("p_g");
    row.p_a_given_g = number("p_a_given_g");
    row.p_b = number("p_b");
    row.p_a_given_b = number("p_a_given_b");
    row.p_t = number("p_t");
    row.p_a = number("p_a");
    row.validate();
    rows.push_back(std::move(row));
  }
  return rows;
}

RowFormat format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return RowFormat::Csv;
  if (ext == ".json") return RowFormat::Json;
  throw Error(ErrorCode::ParseError, "cannot infer format from '" + path.string() + "'");
}

std::vector<ExperimentRow> load_rows(const std::filesystem::path& path, RowFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  return format == RowFormat::Csv ? parse_rows_csv(in) : parse_rows_json(in);
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  char buffer[32];
  for (const auto& r : rows) {
    out << r.dataset_id << ',' << face_code(r.face_type);
    for (double v : {r.p_g, r.p_a_given_g, r.p_b, r.p_a_given_b, r.p_t, r.p_a}) {
      const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
      out << ',' << std::string_view(buffer, static_cast<std::size_t>(end - buffer));
    }
    out << '\n';
  }
}

}  // namespace qdb

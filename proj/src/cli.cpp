#include "qdb/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdb/error.hpp"
#include "qdb/evidence.hpp"
#include "qdb/experiments.hpp"
#include "qdb/model.hpp"

namespace qdb::cli {

namespace {

using nlohmann::json;

enum class Format { Table, Json, Csv };

struct Options {
  std::optional<std::string> format;
  double t = model::kDefaultTime;
  std::string sign = "+";

  double h1 = 0.0;
  double h2 = 0.0;
  double p_b1 = 0.0;

  double target_b1 = 0.0;
  double target_b2 = 0.0;

  std::string data;
  bool builtin = false;
  bool fit_wide = false;
  std::string out_path;
  std::string chart_path;

  std::string bpa_path;
};

Format resolve_format(const Options& o, Format fallback) {
  if (!o.format) return fallback;
  if (*o.format == "json") return Format::Json;
  if (*o.format == "csv") return Format::Csv;
  return Format::Table;
}

model::InterferenceSign parse_sign(const std::string& s) {
  return s == "-" ? model::InterferenceSign::Negative : model::InterferenceSign::Positive;
}

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

// Writes to the --out file when given, otherwise to stdout.
template <typename Writer>
void emit(const Options& o, std::ostream& out, Writer&& write) {
  if (o.out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(o.out_path);
  if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + o.out_path + "'");
  write(file);
}

void print_rows(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  }
}

int run_predict(const Options& o, std::ostream& out) {
  const model::QdbParams params{
      .h1 = o.h1, .h2 = o.h2, .p_b1 = o.p_b1, .t = o.t, .sign = parse_sign(o.sign)};
  const model::BeliefActionBasis basis;
  const auto r = model::run_pipeline(params, basis);
  const auto labels = basis.basis_labels();
  const auto m1 = r.known_masses();
  const auto m2 = r.unknown_masses();
  const std::array<std::string, 3> unknown_labels{
      basis.actions[0] + "U", basis.actions[1] + "U", basis.actions[2] + "U"};
  const std::string cond1 = "P(" + basis.actions[0] + "|" + basis.beliefs[0] + ")";
  const std::string cond2 = "P(" + basis.actions[0] + "|" + basis.beliefs[1] + ")";
  const std::string total = "P(" + basis.actions[0] + ")";

  json doc;
  doc["params"] = {{"h1", o.h1}, {"h2", o.h2}, {"p_b1", o.p_b1}, {"t", o.t},
                   {"sign", static_cast<int>(params.sign)}};
  for (std::size_t i = 0; i < 6; ++i) doc["m_known"][labels[i]] = m1[i];
  for (std::size_t i = 0; i < 3; ++i) doc["m_unknown"][unknown_labels[i]] = m2[i];
  doc["ed_known"] = r.ed_known;
  doc["ed_unknown"] = r.ed_unknown;
  doc["gamma"] = r.gamma;
  doc["p_cond_target_b1"] = r.p_cond_target_b1 ? json(*r.p_cond_target_b1) : json(nullptr);
  doc["p_cond_target_b2"] = r.p_cond_target_b2 ? json(*r.p_cond_target_b2) : json(nullptr);
  doc["p_total"] = r.p_total;
  doc["p_unknown"] = r.p_unknown;
  doc["interference"] = r.interference;
  doc["clamped"] = r.clamped;
  doc["degenerate_belief"] = r.degenerate_belief;

  const auto format = resolve_format(o, o.out_path.empty() ? Format::Table : Format::Json);
  emit(o, out, [&](std::ostream& os) {
    if (format == Format::Json) {
      os << doc.dump(2) << '\n';
      return;
    }
    auto opt = [](const std::optional<double>& v, bool full) {
      if (!v) return std::string("undefined");
      if (!full) return fixed4(*v);
      std::ostringstream s;
      s << std::setprecision(17) << *v;
      return s.str();
    };
    const bool full = format == Format::Csv;
    auto num = [&](double v) { return opt(v, full); };
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < 6; ++i) rows.emplace_back("m(" + labels[i] + ")", num(m1[i]));
    for (std::size_t i = 0; i < 3; ++i) {
      rows.emplace_back("m(" + unknown_labels[i] + ")", num(m2[i]));
    }
    rows.emplace_back("E_d1", num(r.ed_known));
    rows.emplace_back("E_d2", num(r.ed_unknown));
    rows.emplace_back("gamma", num(r.gamma));
    rows.emplace_back(cond1, opt(r.p_cond_target_b1, full));
    rows.emplace_back(cond2, opt(r.p_cond_target_b2, full));
    rows.emplace_back("P_T", num(r.p_total));
    rows.emplace_back(total, num(r.p_unknown));
    rows.emplace_back("Int", num(r.interference));
    if (format == Format::Csv) {
      os << "quantity,value\n";
      for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
    } else {
      print_rows(os, rows);
      if (r.clamped) os << "note: P(A) clamped to [0, 1]\n";
      if (r.degenerate_belief) os << "note: a belief prior is 0 or 1\n";
    }
  });
  return kExitOk;
}

int run_fit(const Options& o, std::ostream& out) {
  const double h1 = model::fit_h(o.target_b1, o.t);
  const double h2 = model::fit_h(o.target_b2, o.t);
  const auto format = resolve_format(o, Format::Table);
  if (format == Format::Json) {
    out << json{{"h1", h1}, {"h2", h2}, {"t", o.t}}.dump(2) << '\n';
  } else if (format == Format::Csv) {
    out << std::setprecision(17) << "parameter,value\nh1," << h1 << "\nh2," << h2 << '\n';
  } else {
    print_rows(out, {{"h1", fixed4(h1)}, {"h2", fixed4(h2)}});
  }
  return kExitOk;
}

std::vector<ExperimentRow> select_rows(const Options& o) {
  if (!o.data.empty()) return load_rows(o.data, format_for(o.data));
  return experiments::builtin_datasets();
}

int emit_report(const Options& o, std::ostream& out, const experiments::PredictionReport& report) {
  const auto format = resolve_format(o, o.out_path.empty() ? Format::Table : Format::Json);
  emit(o, out, [&](std::ostream& os) {
    switch (format) {
      case Format::Json: os << experiments::to_json(report).dump(2) << '\n'; break;
      case Format::Csv: experiments::write_csv(os, report); break;
      case Format::Table: experiments::write_table(os, report); break;
    }
  });
  return report.has_failures() ? kExitFitFailure : kExitOk;
}

experiments::ReportOptions report_options(const Options& o) {
  return {.t = o.t, .sign = parse_sign(o.sign), .fit_wide = o.fit_wide};
}

int run_reproduce(const Options& o, std::ostream& out) {
  return emit_report(o, out, experiments::reproduce_qdb(select_rows(o), report_options(o)));
}

int run_compare(const Options& o, std::ostream& out) {
  const auto report = experiments::compare_models(select_rows(o), report_options(o));
  if (!o.chart_path.empty()) {
    std::ofstream chart(o.chart_path);
    if (!chart) throw Error(ErrorCode::ParseError, "cannot write '" + o.chart_path + "'");
    experiments::write_chart_csv(chart, report);
  }
  return emit_report(o, out, report);
}

evidence::MassFunction read_bpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  try {
    evidence::Frame frame(doc.at("frame").get<std::vector<std::string>>());
    std::vector<std::pair<std::vector<std::string>, double>> entries;
    for (const auto& item : doc.at("masses")) {
      const auto& mass = item.at("mass");
      if (!mass.is_number()) throw Error(ErrorCode::ParseError, "mass must be a number");
      entries.emplace_back(item.at("set").get<std::vector<std::string>>(), mass.get<double>());
    }
    return evidence::validate_bpa(frame, entries);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed BPA: ") + e.what());
  }
}

int run_entropy(const Options& o, std::ostream& out) {
  const auto m = read_bpa(o.bpa_path);
  const double deng = evidence::deng_entropy(m);
  const double shannon = evidence::shannon_entropy(evidence::ppt(m));
  const auto format = resolve_format(o, Format::Table);
  if (format == Format::Json) {
    out << json{{"deng", deng}, {"shannon_pignistic", shannon}, {"focal_sets", m.focal_count()}}
               .dump(2)
        << '\n';
  } else if (format == Format::Csv) {
    out << std::setprecision(17) << "quantity,value\ndeng," << deng << "\nshannon_pignistic,"
        << shannon << '\n';
  } else {
    print_rows(out, {{"Deng entropy", fixed4(deng)},
                     {"Shannon entropy (pignistic)", fixed4(shannon)},
                     {"focal sets", std::to_string(m.focal_count())}});
  }
  return kExitOk;
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "table"}));
}

void add_dynamics(CLI::App* cmd, Options& o, bool with_sign) {
  cmd->add_option("--t", o.t, "Evolution time (default pi/2)")->check(CLI::PositiveNumber);
  if (with_sign) {
    cmd->add_option("--sign", o.sign, "Interference sign, + or -")
        ->check(CLI::IsMember({"+", "-"}));
  }
}

void add_data(CLI::App* cmd, Options& o) {
  auto* data = cmd->add_option("--data", o.data, "Dataset file (.csv or .json)")
                   ->check(CLI::ExistingFile);
  auto* builtin = cmd->add_flag("--builtin", o.builtin, "Use the built-in datasets (default)");
  data->excludes(builtin);
  cmd->add_option("--out", o.out_path, "Write the report to this file");
  cmd->add_flag("--fit-wide", o.fit_wide, "Also fit wide-face rows");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum dynamic belief decision model", "qdb"};
  app.set_version_flag("--version", std::string("qdb ") + experiments::kVersion);
  app.require_subcommand(1, 1);

  auto* predict = app.add_subcommand("predict", "Run the model for given parameters");
  predict->add_option("--h1", o.h1, "Payoff parameter of belief 1")->required();
  predict->add_option("--h2", o.h2, "Payoff parameter of belief 2")->required();
  predict->add_option("--p-b1", o.p_b1, "Prior probability of belief 1")->required();
  predict->add_option("--out", o.out_path, "Write the result to this file");
  add_dynamics(predict, o, true);
  add_format(predict, o);

  auto* fit = app.add_subcommand("fit", "Fit payoff parameters to conditional probabilities");
  fit->add_option("--target-b1", o.target_b1, "Observed P(target|belief 1)")->required();
  fit->add_option("--target-b2", o.target_b2, "Observed P(target|belief 2)")->required();
  add_dynamics(fit, o, false);
  add_format(fit, o);

  auto* reproduce = app.add_subcommand("reproduce", "Fit and run the model on every dataset row");
  add_data(reproduce, o);
  add_dynamics(reproduce, o, true);
  add_format(reproduce, o);

  auto* compare = app.add_subcommand("compare", "Compare against the Markov and BAE models");
  add_data(compare, o);
  compare->add_option("--chart", o.chart_path, "Write chart data CSV to this file");
  add_dynamics(compare, o, true);
  add_format(compare, o);

  auto* entropy = app.add_subcommand("entropy", "Deng and Shannon entropies of a BPA file");
  entropy->add_option("--bpa", o.bpa_path, "BPA JSON file")->required()->check(CLI::ExistingFile);
  add_format(entropy, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (predict->parsed()) return run_predict(o, out);
    if (fit->parsed()) return run_fit(o, out);
    if (reproduce->parsed()) return run_reproduce(o, out);
    if (compare->parsed()) return run_compare(o, out);
    if (entropy->parsed()) return run_entropy(o, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    const bool fit_failure =
        e.code() == ErrorCode::TargetUnreachable || e.code() == ErrorCode::NonMonotoneBracket;
    return fit_failure ? kExitFitFailure : kExitValidation;
  }
  err << "error[usage]: no subcommand\n";
  return kExitValidation;
}

}  // namespace qdb::cli

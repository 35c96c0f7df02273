#include "qdb/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "qdb/error.hpp"

namespace qdb::experiments {

namespace {

RowReport reproduce_row(const ExperimentRow& row, const ReportOptions& options) {
  RowReport report;
  report.observed = row;
  report.p_t_recomputed =
      baselines::markov_total_probability(row.p_g, row.p_a_given_g, row.p_a_given_b);
  if (row.face_type == FaceType::Wide && !options.fit_wide) return report;
  try {
    const double h1 = model::fit_h(row.p_a_given_g, options.t);
    const double h2 = model::fit_h(row.p_a_given_b, options.t);
    const model::QdbParams params{
        .h1 = h1, .h2 = h2, .p_b1 = row.p_g, .t = options.t, .sign = options.sign};
    report.qdb = QdbRowPrediction{h1, h2, model::run_pipeline(params)};
  } catch (const Error& e) {
    report.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return report;
}

void add_baselines(RowReport& report, const ReportOptions& options) {
  const auto& row = report.observed;
  report.markov = report.p_t_recomputed;
  if (row.face_type == FaceType::Wide && !options.fit_wide) return;
  try {
    report.bae = baselines::bae_fit(row, options.t);
  } catch (const Error& e) {
    if (!report.error.empty()) report.error += "; ";
    report.error += "BAE " + std::string(to_string(e.code())) + ": " + e.what();
  }
  if (row.face_type == FaceType::Narrow && report.qdb && report.bae) {
    const double markov = *report.markov;
    report.ordering_holds = markov < row.p_a &&
                            report.qdb->result.p_unknown > markov &&
                            report.bae->prediction.p_unknown > markov;
  }
}

std::optional<ModelError> summarize(const std::vector<double>& errors) {
  if (errors.empty()) return std::nullopt;
  ModelError out;
  out.rows = errors.size();
  double sum = 0.0;
  for (double e : errors) {
    sum += e;
    out.max_abs_error = std::max(out.max_abs_error, e);
  }
  out.mean_abs_error = sum / static_cast<double>(errors.size());
  return out;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json model_error_json(const std::optional<ModelError>& e) {
  if (!e) return nullptr;
  return {{"rows", e->rows}, {"mae", e->mean_abs_error}, {"max_error", e->max_abs_error}};
}

}  // namespace

std::vector<ExperimentRow> builtin_datasets() {
  using F = FaceType;
  return {
      {"Townsend2000", F::Wide, 0.84, 0.35, 0.16, 0.52, 0.37, 0.39},
      {"Townsend2000", F::Narrow, 0.17, 0.41, 0.83, 0.63, 0.59, 0.69},
      {"Busemeyer2009", F::Wide, 0.80, 0.37, 0.20, 0.53, 0.40, 0.39},
      {"Busemeyer2009", F::Narrow, 0.20, 0.45, 0.80, 0.64, 0.60, 0.69},
      {"WangBusemeyer2016-E1", F::Wide, 0.78, 0.39, 0.22, 0.52, 0.42, 0.42},
      {"WangBusemeyer2016-E1", F::Narrow, 0.21, 0.41, 0.79, 0.58, 0.54, 0.59},
      {"WangBusemeyer2016-E2", F::Wide, 0.78, 0.33, 0.22, 0.53, 0.37, 0.37},
      {"WangBusemeyer2016-E2", F::Narrow, 0.24, 0.37, 0.76, 0.61, 0.55, 0.60},
      {"WangBusemeyer2016-E3", F::Wide, 0.77, 0.34, 0.23, 0.58, 0.40, 0.39},
      {"WangBusemeyer2016-E3", F::Narrow, 0.24, 0.33, 0.76, 0.66, 0.58, 0.62},
      {"Average", F::Wide, 0.79, 0.36, 0.21, 0.54, 0.39, 0.39},
      {"Average", F::Narrow, 0.21, 0.39, 0.79, 0.62, 0.57, 0.64},
  };
}

bool PredictionReport::has_failures() const {
  for (const auto& r : rows) {
    if (!r.error.empty()) return true;
  }
  return false;
}

PredictionReport reproduce_qdb(const std::vector<ExperimentRow>& rows,
                               const ReportOptions& options) {
  PredictionReport report;
  report.options = options;
  report.rows.reserve(rows.size());
  for (const auto& row : rows) {
    row.validate();
    report.rows.push_back(reproduce_row(row, options));
  }
  if (!report.rows.empty()) report.aggregate = error_metrics(report);
  return report;
}

PredictionReport compare_models(const std::vector<ExperimentRow>& rows,
                                const ReportOptions& options) {
  PredictionReport report = reproduce_qdb(rows, options);
  for (auto& r : report.rows) add_baselines(r, options);
  if (!report.rows.empty()) report.aggregate = error_metrics(report);
  return report;
}

AggregateErrors error_metrics(const PredictionReport& report) {
  if (report.rows.empty()) {
    throw Error(ErrorCode::EmptyReport, "error metrics need at least one row");
  }
  std::vector<double> qdb;
  std::vector<double> markov;
  std::vector<double> bae;
  for (const auto& r : report.rows) {
    const double observed = r.observed.p_a;
    if (r.qdb) qdb.push_back(std::abs(r.qdb->result.p_unknown - observed));
    if (r.markov) markov.push_back(std::abs(*r.markov - observed));
    if (r.bae) bae.push_back(std::abs(r.bae->prediction.p_unknown - observed));
  }
  return {summarize(qdb), summarize(markov), summarize(bae)};
}

nlohmann::json to_json(const PredictionReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    const auto& o = r.observed;
    nlohmann::json row;
    row["dataset"] = o.dataset_id;
    row["face_type"] = std::string(1, face_code(o.face_type));
    row["observed"] = {{"p_g", o.p_g},   {"p_a_given_g", o.p_a_given_g},
                       {"p_b", o.p_b},   {"p_a_given_b", o.p_a_given_b},
                       {"p_t", o.p_t},   {"p_a", o.p_a}};
    row["p_t_recomputed"] = r.p_t_recomputed;
    if (r.qdb) {
      const auto& q = r.qdb->result;
      const auto m1 = q.known_masses();
      const auto m2 = q.unknown_masses();
      row["qdb"] = {
          {"h1", r.qdb->h1},
          {"h2", r.qdb->h2},
          {"m_known", std::vector<double>(m1.begin(), m1.end())},
          {"m_unknown", std::vector<double>(m2.begin(), m2.end())},
          {"ed_known", q.ed_known},
          {"ed_unknown", q.ed_unknown},
          {"gamma", q.gamma},
          {"p_a_given_g", optional_number(q.p_cond_target_b1)},
          {"p_a_given_b", optional_number(q.p_cond_target_b2)},
          {"p_t", q.p_total},
          {"p_a", q.p_unknown},
          {"interference", q.interference},
          {"clamped", q.clamped},
      };
    } else {
      row["qdb"] = nullptr;
    }
    row["markov"] = optional_number(r.markov);
    if (r.bae) {
      const auto& b = *r.bae;
      row["bae"] = {
          {"h_g", b.params.h_g},
          {"h_b", b.params.h_b},
          {"c", b.params.c},
          {"p_a_given_g", b.prediction.p_cond_target_b1},
          {"p_a_given_b", b.prediction.p_cond_target_b2},
          {"p_t", b.prediction.p_total},
          {"p_a", b.prediction.p_unknown},
          {"residual", b.residual},
          {"converged", b.converged},
      };
    } else {
      row["bae"] = nullptr;
    }
    row["ordering_holds"] = r.ordering_holds ? nlohmann::json(*r.ordering_holds) : nullptr;
    row["error"] = r.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.error);
    rows.push_back(std::move(row));
  }
  return {
      {"rows", std::move(rows)},
      {"aggregate",
       {{"qdb", model_error_json(report.aggregate.qdb)},
        {"markov", model_error_json(report.aggregate.markov)},
        {"bae", model_error_json(report.aggregate.bae)}}},
      {"meta",
       {{"t", report.options.t},
        {"sign", static_cast<int>(report.options.sign)},
        {"version", kVersion}}},
  };
}

void write_table(std::ostream& out, const PredictionReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(24) << "dataset" << std::setw(4) << "F" << std::right;
  for (const char* h : {"P(G)", "P(A|G)", "P(A|B)", "P_T", "P(A)", "QDB P_T", "QDB P(A)",
                        "gamma", "Int", "Markov", "BAE P(A)"}) {
    out << std::setw(10) << h;
  }
  out << '\n';
  auto cell = [&](const std::optional<double>& v) {
    if (v) {
      out << std::setw(10) << *v;
    } else {
      out << std::setw(10) << "-";
    }
  };
  for (const auto& r : report.rows) {
    const auto& o = r.observed;
    out << std::left << std::setw(24) << o.dataset_id << std::setw(4) << face_code(o.face_type)
        << std::right;
    cell(o.p_g);
    cell(o.p_a_given_g);
    cell(o.p_a_given_b);
    cell(o.p_t);
    cell(o.p_a);
    if (r.qdb) {
      const auto& q = r.qdb->result;
      cell(q.p_total);
      cell(q.p_unknown);
      cell(q.gamma);
      cell(q.interference);
    } else {
      for (int i = 0; i < 4; ++i) cell(std::nullopt);
    }
    cell(r.markov);
    cell(r.bae ? std::optional<double>(r.bae->prediction.p_unknown) : std::nullopt);
    out << '\n';
    if (!r.error.empty()) out << "  ! " << r.error << '\n';
  }
  const auto& agg = report.aggregate;
  for (const auto& [name, e] : {std::pair{"QDB", agg.qdb}, std::pair{"Markov", agg.markov},
                                std::pair{"BAE", agg.bae}}) {
    if (e) {
      out << name << " P(A) error: mean " << e->mean_abs_error << ", max " << e->max_abs_error
          << " over " << e->rows << " rows\n";
    }
  }
  out.flags(flags);
  out.precision(precision);
}

void write_csv(std::ostream& out, const PredictionReport& report) {
  const auto precision = out.precision();
  out << std::setprecision(10);
  out << "dataset,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t,p_a,p_t_recomputed,"
         "qdb_h1,qdb_h2,qdb_p_a_given_g,qdb_p_a_given_b,qdb_p_t,qdb_p_a,qdb_gamma,"
         "qdb_interference,markov,bae_c,bae_p_a,bae_residual\n";
  auto field = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << *v;
  };
  for (const auto& r : report.rows) {
    const auto& o = r.observed;
    out << o.dataset_id << ',' << face_code(o.face_type);
    for (double v : {o.p_g, o.p_a_given_g, o.p_b, o.p_a_given_b, o.p_t, o.p_a, r.p_t_recomputed}) {
      field(v);
    }
    if (r.qdb) {
      const auto& q = r.qdb->result;
      field(r.qdb->h1);
      field(r.qdb->h2);
      field(q.p_cond_target_b1);
      field(q.p_cond_target_b2);
      field(q.p_total);
      field(q.p_unknown);
      field(q.gamma);
      field(q.interference);
    } else {
      for (int i = 0; i < 8; ++i) field(std::nullopt);
    }
    field(r.markov);
    if (r.bae) {
      field(r.bae->params.c);
      field(r.bae->prediction.p_unknown);
      field(r.bae->residual);
    } else {
      for (int i = 0; i < 3; ++i) field(std::nullopt);
    }
    out << '\n';
  }
  out.precision(precision);
}

void write_chart_csv(std::ostream& out, const PredictionReport& report) {
  const auto precision = out.precision();
  out << std::setprecision(10);
  out << "dataset,observed,markov,qdb,bae\n";
  for (const auto& r : report.rows) {
    if (r.observed.face_type != FaceType::Narrow) continue;
    out << r.observed.dataset_id << ',' << r.observed.p_a << ',';
    if (r.markov) out << *r.markov;
    out << ',';
    if (r.qdb) out << r.qdb->result.p_unknown;
    out << ',';
    if (r.bae) out << r.bae->prediction.p_unknown;
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace qdb::experiments

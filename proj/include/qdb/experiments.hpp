#pragma once

// Built-in categorization-decision datasets and per-row reproduction reports
// for the QDB model and the two baselines.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdb/baselines.hpp"
#include "qdb/dataset.hpp"
#include "qdb/model.hpp"

namespace qdb::experiments {

inline constexpr const char* kVersion = "1.0.0";

// Twelve rows (five studies plus their average, wide and narrow faces).
std::vector<ExperimentRow> builtin_datasets();

struct QdbRowPrediction {
  double h1 = 0.0;
  double h2 = 0.0;
  model::QdbResult result;
};

struct RowReport {
  ExperimentRow observed;
  double p_t_recomputed = 0.0;  // total probability from the printed inputs
  std::optional<QdbRowPrediction> qdb;
  std::optional<double> markov;
  std::optional<baselines::BaeFit> bae;
  // Narrow rows in a comparison: Markov below the observation and both
  // quantum models above the Markov prediction.
  std::optional<bool> ordering_holds;
  std::string error;  // "Code: message" when a fit failed for this row
};

struct ModelError {
  std::size_t rows = 0;
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
};

struct AggregateErrors {
  std::optional<ModelError> qdb;
  std::optional<ModelError> markov;
  std::optional<ModelError> bae;
};

struct ReportOptions {
  double t = model::kDefaultTime;
  model::InterferenceSign sign = model::InterferenceSign::Positive;
  bool fit_wide = false;  // wide-face rows are reported but not fitted by default
};

struct PredictionReport {
  std::vector<RowReport> rows;
  AggregateErrors aggregate;
  ReportOptions options;

  bool has_failures() const;
};

PredictionReport reproduce_qdb(const std::vector<ExperimentRow>& rows,
                               const ReportOptions& options = {});

// reproduce_qdb plus Markov and fitted-BAE predictions.
PredictionReport compare_models(const std::vector<ExperimentRow>& rows,
                                const ReportOptions& options = {});

// Mean and max |model P(A) - observed P(A)| per model. Throws EmptyReport.
AggregateErrors error_metrics(const PredictionReport& report);

nlohmann::json to_json(const PredictionReport& report);
void write_table(std::ostream& out, const PredictionReport& report);
void write_csv(std::ostream& out, const PredictionReport& report);

// dataset,observed,markov,qdb,bae for every narrow row.
void write_chart_csv(std::ostream& out, const PredictionReport& report);

}  // namespace qdb::experiments

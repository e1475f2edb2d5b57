#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathbench/harness.hpp"

namespace pathbench {

enum class Metric { em, tok_acc };
const char* metric_name(Metric m);

struct JoinedRow {
  const TaskInstance* task;
  const EvalRecord* eval;
};

// Joined view over task and eval files; every eval must resolve to a task.
struct Dataset {
  std::vector<TaskInstance> tasks;
  std::vector<EvalRecord> evals;
  std::vector<JoinedRow> rows;
};

Dataset join_dataset(std::vector<TaskInstance> tasks, std::vector<EvalRecord> evals);

// confound counts bucketed {0, 1-2, 3+}
int confound_bucket(int count);
const char* confound_bucket_name(int bucket);

struct CellRow {
  int tbin, sbin, n_points, confound_bucket;
  double mean;
  int count;
};

std::vector<CellRow> cell_table(const Dataset& ds, Metric metric);

struct WindowCurve {
  int k = 0;  // which crossing (1-based)
  std::vector<int> offsets;
  std::vector<double> mean;
  std::vector<int> count;
  std::vector<double> control_mean;
  std::vector<int> control_count;
};

WindowCurve crossing_windows(const Dataset& ds, int k, int w);

struct PrefixControlRow {
  std::string model;
  double intersecting_prefix_exact;    // percent
  double matched_no_cross_prefix_exact;
  double delta_pts;
  double mean_pre_len;
  int n;
};

std::vector<PrefixControlRow> matched_prefix_control(const Dataset& ds);

struct BucketRow {
  int bucket;  // previously encountered confounds
  double mean;
  int count;
};

struct ConfoundCurves {
  WindowCurve local;  // anchored at the first encounter token
  std::vector<BucketRow> cumulative;
};

ConfoundCurves confound_curves(const Dataset& ds, int w);

struct RegressionResult {
  std::vector<std::string> terms;  // includes "intercept"
  std::vector<double> coefficients;  // percentage points
  std::vector<double> std_errors;
  int n = 0;
  double get(const std::string& term) const;
};

RegressionResult ols(const Dataset& ds, bool include_lr, Metric outcome);

struct RegimeDeltaRow {
  std::string model;
  Regime regime;
  double macro_tok_acc;
  double delta_pts;
};

std::vector<RegimeDeltaRow> regime_deltas(const Dataset& ds);

struct AnswerRateRow {
  std::map<std::string, std::string> keys;
  int count;
  double answer_rate;
  double em_overall;
  double em_conditional;
};

std::vector<AnswerRateRow> answer_rate_tables(const Dataset& ds,
                                              const std::vector<std::string>& group_keys);

// CSV writers with fixed headers
void write_cell_table_csv(const std::string& path, const std::vector<CellRow>& rows, Metric m);
void write_window_curves_csv(const std::string& path, const std::vector<WindowCurve>& curves);
void write_prefix_control_csv(const std::string& path,
                              const std::vector<PrefixControlRow>& rows);
void write_confound_curves_csv(const std::string& local_path, const std::string& cumulative_path,
                               const ConfoundCurves& curves);
void write_regression_csv(const std::string& path, const RegressionResult& r);
void write_regime_deltas_csv(const std::string& path, const std::vector<RegimeDeltaRow>& rows);
void write_answer_rate_csv(const std::string& path, const std::vector<AnswerRateRow>& rows,
                           const std::vector<std::string>& group_keys);

// Least squares via Householder QR; throws RankDeficient naming the column.
std::vector<double> qr_least_squares(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& y,
                                     const std::vector<std::string>& names,
                                     std::vector<double>* std_errors);

}  // namespace pathbench

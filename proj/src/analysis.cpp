#include "pathbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

namespace pathbench {

const char* metric_name(Metric m) { return m == Metric::em ? "em" : "tok_acc"; }

Dataset join_dataset(std::vector<TaskInstance> tasks, std::vector<EvalRecord> evals) {
  Dataset ds;
  ds.tasks = std::move(tasks);
  ds.evals = std::move(evals);
  std::unordered_map<std::string, const TaskInstance*> by_id;
  for (const auto& t : ds.tasks) by_id[t.task_id] = &t;
  std::vector<std::string> orphans;
  for (const auto& e : ds.evals) {
    auto it = by_id.find(e.task_id);
    if (it == by_id.end()) {
      orphans.push_back(e.task_id);
      continue;
    }
    ds.rows.push_back({it->second, &e});
  }
  if (!orphans.empty()) {
    std::string msg = std::to_string(orphans.size()) + " eval records without tasks:";
    for (size_t i = 0; i < std::min<size_t>(orphans.size(), 5); ++i) msg += " " + orphans[i];
    throw Error(ErrorKind::JoinFailure, msg);
  }
  return ds;
}

int confound_bucket(int count) { return count <= 0 ? 0 : (count <= 2 ? 1 : 2); }

const char* confound_bucket_name(int bucket) {
  switch (bucket) {
    case 0: return "0";
    case 1: return "1-2";
    default: return "3+";
  }
}

namespace {

double metric_of(const JoinedRow& r, Metric m) {
  return m == Metric::em ? static_cast<double>(r.eval->em) : r.eval->tok_acc;
}

}  // namespace

std::vector<CellRow> cell_table(const Dataset& ds, Metric metric) {
  std::map<std::tuple<int, int, int, int>, std::pair<double, int>> acc;
  for (const auto& r : ds.rows) {
    if (r.task->meta.benchmark != Benchmark::main) continue;
    auto key = std::make_tuple(r.task->meta.tbin, r.task->meta.sbin, r.task->meta.n_points,
                               confound_bucket(r.task->meta.confound_count));
    acc[key].first += metric_of(r, metric);
    acc[key].second += 1;
  }
  std::vector<CellRow> out;
  for (const auto& [key, v] : acc)
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key),
                   v.first / v.second, v.second});
  return out;
}

namespace {

// Position-matched control: every treatment sample at absolute position p adds
// weight to the control estimate at p, taken over the given control rows.
struct PositionControl {
  std::map<int, std::pair<double, int>> by_position;  // sum, count over control rows

  void build(const std::vector<const JoinedRow*>& controls) {
    for (const JoinedRow* r : controls)
      for (size_t p = 0; p < r->eval->per_position.size(); ++p) {
        auto& slot = by_position[static_cast<int>(p)];
        slot.first += r->eval->per_position[p];
        slot.second += 1;
      }
  }

  // weighted mean over positions, weights = treatment frequency
  std::pair<double, int> estimate(const std::map<int, int>& weights) const {
    double num = 0.0, den = 0.0;
    int support = 0;
    for (const auto& [pos, w] : weights) {
      auto it = by_position.find(pos);
      if (it == by_position.end() || it->second.second == 0) continue;
      num += w * (it->second.first / it->second.second);
      den += w;
      support += w;
    }
    if (den <= 0.0) return {0.0, 0};
    return {num / den, support};
  }
};

}  // namespace

WindowCurve crossing_windows(const Dataset& ds, int k, int w) {
  if (k < 1) throw Error(ErrorKind::UsageError, "crossing index k is 1-based");
  std::vector<const JoinedRow*> treatment, control;
  for (const auto& r : ds.rows) {
    if (r.task->meta.benchmark != Benchmark::main) continue;
    if (static_cast<int>(r.task->meta.crossing_tokens.size()) >= k)
      treatment.push_back(&r);
    else if (r.task->meta.crossing_tokens.empty())
      control.push_back(&r);
  }
  if (treatment.empty())
    throw Error(ErrorKind::InsufficientData,
                "no task has " + std::to_string(k) + " or more crossings");

  PositionControl pc;
  pc.build(control);

  WindowCurve curve;
  curve.k = k;
  for (int o = -w; o <= w; ++o) {
    double sum = 0.0;
    int count = 0;
    std::map<int, int> weights;
    for (const JoinedRow* r : treatment) {
      int anchor = r->task->meta.crossing_tokens[static_cast<size_t>(k - 1)];
      int pos = anchor + o;
      if (pos < 0 || pos >= static_cast<int>(r->eval->per_position.size())) continue;
      sum += r->eval->per_position[static_cast<size_t>(pos)];
      ++count;
      weights[pos] += 1;
    }
    auto [cmean, ccount] = pc.estimate(weights);
    curve.offsets.push_back(o);
    curve.mean.push_back(count ? sum / count : 0.0);
    curve.count.push_back(count);
    curve.control_mean.push_back(cmean);
    curve.control_count.push_back(ccount);
  }
  return curve;
}

std::vector<PrefixControlRow> matched_prefix_control(const Dataset& ds) {
  std::set<std::string> models;
  for (const auto& r : ds.rows) models.insert(r.eval->model);

  std::vector<PrefixControlRow> out;
  for (const auto& model : models) {
    std::vector<const JoinedRow*> treatment, control;
    for (const auto& r : ds.rows) {
      if (r.eval->model != model || r.task->meta.benchmark != Benchmark::main) continue;
      if (!r.task->meta.crossing_tokens.empty())
        treatment.push_back(&r);
      else
        control.push_back(&r);
    }
    if (treatment.empty() || control.empty())
      throw Error(ErrorKind::InsufficientData,
                  "matched-prefix control needs both intersecting and zero-crossing tasks");

    double exact_sum = 0.0, len_sum = 0.0;
    std::map<int, int> len_weights;
    for (const JoinedRow* r : treatment) {
      int L = r->task->meta.crossing_tokens[0];
      bool exact = r->eval->prefix_exact_len >= L;
      exact_sum += exact ? 1.0 : 0.0;
      len_sum += L;
      len_weights[L] += 1;
    }
    double treat = exact_sum / treatment.size();

    double base_num = 0.0, base_den = 0.0;
    for (const auto& [L, wgt] : len_weights) {
      double sum = 0.0;
      int cnt = 0;
      for (const JoinedRow* r : control) {
        if (static_cast<int>(r->eval->per_position.size()) < L) continue;
        sum += (r->eval->prefix_exact_len >= L) ? 1.0 : 0.0;
        ++cnt;
      }
      if (cnt == 0) continue;
      base_num += wgt * (sum / cnt);
      base_den += wgt;
    }
    if (base_den <= 0.0)
      throw Error(ErrorKind::InsufficientData, "no control covers the prefix lengths");
    double baseline = base_num / base_den;

    PrefixControlRow row;
    row.model = model;
    row.intersecting_prefix_exact = 100.0 * treat;
    row.matched_no_cross_prefix_exact = 100.0 * baseline;
    row.delta_pts = 100.0 * (treat - baseline);
    row.mean_pre_len = len_sum / treatment.size();
    row.n = static_cast<int>(treatment.size());
    out.push_back(std::move(row));
  }
  return out;
}

ConfoundCurves confound_curves(const Dataset& ds, int w) {
  std::vector<const JoinedRow*> treatment, control;
  for (const auto& r : ds.rows) {
    if (r.task->meta.benchmark != Benchmark::main) continue;
    if (!r.task->meta.confound_encounters.empty())
      treatment.push_back(&r);
    else if (r.task->meta.confound_count == 0)
      control.push_back(&r);
  }

  ConfoundCurves out;
  out.local.k = 1;
  if (!treatment.empty()) {
    PositionControl pc;
    pc.build(control);
    for (int o = -w; o <= w; ++o) {
      double sum = 0.0;
      int count = 0;
      std::map<int, int> weights;
      for (const JoinedRow* r : treatment) {
        int pos = r->task->meta.confound_encounters[0] + o;
        if (pos < 0 || pos >= static_cast<int>(r->eval->per_position.size())) continue;
        sum += r->eval->per_position[static_cast<size_t>(pos)];
        ++count;
        weights[pos] += 1;
      }
      auto [cmean, ccount] = pc.estimate(weights);
      out.local.offsets.push_back(o);
      out.local.mean.push_back(count ? sum / count : 0.0);
      out.local.count.push_back(count);
      out.local.control_mean.push_back(cmean);
      out.local.control_count.push_back(ccount);
    }
  }

  std::map<int, std::pair<double, int>> buckets;
  for (const auto& r : ds.rows) {
    if (r.task->meta.benchmark != Benchmark::main) continue;
    for (size_t i = 0; i < r.eval->per_position.size(); ++i) {
      int exposures = 0;
      for (int e : r.task->meta.confound_encounters)
        if (e < static_cast<int>(i)) ++exposures;
      auto& slot = buckets[exposures];
      slot.first += r.eval->per_position[i];
      slot.second += 1;
    }
  }
  if (buckets.empty()) throw Error(ErrorKind::InsufficientData, "no positions to bucket");
  for (const auto& [b, v] : buckets) out.cumulative.push_back({b, v.first / v.second, v.second});
  return out;
}

std::vector<double> qr_least_squares(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& y,
                                     const std::vector<std::string>& names,
                                     std::vector<double>* std_errors) {
  const int n = static_cast<int>(X.size());
  const int p = n > 0 ? static_cast<int>(X[0].size()) : 0;
  if (n < p || p == 0) throw Error(ErrorKind::RankDeficient, "more columns than rows");

  // Householder QR on a working copy, y transformed alongside
  std::vector<std::vector<double>> A = X;
  std::vector<double> b = y;
  std::vector<double> rdiag(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    double norm_col = 0.0;
    for (int i = j; i < n; ++i) norm_col += A[i][j] * A[i][j];
    norm_col = std::sqrt(norm_col);
    if (norm_col < 1e-10)
      throw Error(ErrorKind::RankDeficient, "column '" + names[static_cast<size_t>(j)] +
                                                "' is linearly dependent");
    if (A[j][j] > 0) norm_col = -norm_col;
    for (int i = j; i < n; ++i) A[i][j] /= -norm_col;
    A[j][j] += 1.0;
    for (int k = j + 1; k < p; ++k) {
      double s = 0.0;
      for (int i = j; i < n; ++i) s += A[i][j] * A[i][k];
      s = -s / A[j][j];
      for (int i = j; i < n; ++i) A[i][k] += s * A[i][j];
    }
    double s = 0.0;
    for (int i = j; i < n; ++i) s += A[i][j] * b[static_cast<size_t>(i)];
    s = -s / A[j][j];
    for (int i = j; i < n; ++i) b[static_cast<size_t>(i)] += s * A[i][j];
    rdiag[static_cast<size_t>(j)] = norm_col;
  }

  // back substitution: R beta = Qt y
  std::vector<double> beta(static_cast<size_t>(p));
  for (int j = p - 1; j >= 0; --j) {
    double s = b[static_cast<size_t>(j)];
    for (int k = j + 1; k < p; ++k) s -= A[j][k] * beta[static_cast<size_t>(k)];
    beta[static_cast<size_t>(j)] = s / rdiag[static_cast<size_t>(j)];
  }

  if (std_errors) {
    double rss = 0.0;
    for (int i = p; i < n; ++i) rss += b[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
    double sigma2 = n > p ? rss / (n - p) : 0.0;
    // Rinv, then diag of sigma2 * Rinv Rinv^T
    std::vector<std::vector<double>> rinv(static_cast<size_t>(p),
                                          std::vector<double>(static_cast<size_t>(p), 0.0));
    for (int j = p - 1; j >= 0; --j) {
      rinv[j][j] = 1.0 / rdiag[static_cast<size_t>(j)];
      for (int k = j + 1; k < p; ++k) {
        double s = 0.0;
        for (int m = j + 1; m <= k; ++m) s += A[j][m] * rinv[m][k];
        rinv[j][k] = -s / rdiag[static_cast<size_t>(j)];
      }
    }
    std_errors->assign(static_cast<size_t>(p), 0.0);
    for (int j = 0; j < p; ++j) {
      double v = 0.0;
      for (int k = j; k < p; ++k) v += rinv[j][k] * rinv[j][k];
      (*std_errors)[static_cast<size_t>(j)] = std::sqrt(sigma2 * v);
    }
  }
  return beta;
}

double RegressionResult::get(const std::string& term) const {
  for (size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == term) return coefficients[i];
  throw Error(ErrorKind::UsageError, "no term '" + term + "' in regression result");
}

RegressionResult ols(const Dataset& ds, bool include_lr, Metric outcome) {
  std::vector<const JoinedRow*> rows;
  for (const auto& r : ds.rows) {
    if (r.task->meta.benchmark != Benchmark::main) continue;
    if (include_lr && r.task->meta.lr == LrFlag::ambiguous) continue;
    rows.push_back(&r);
  }
  if (rows.empty()) throw Error(ErrorKind::InsufficientData, "no rows for regression");

  auto levels_of = [&](auto getter) {
    std::set<int> s;
    for (const JoinedRow* r : rows) s.insert(getter(*r));
    return std::vector<int>(s.begin(), s.end());
  };
  auto sbins = levels_of([](const JoinedRow& r) { return r.task->meta.sbin; });
  auto tbins = levels_of([](const JoinedRow& r) { return r.task->meta.tbin; });
  auto npoints = levels_of([](const JoinedRow& r) { return r.task->meta.n_points; });
  if (sbins.size() < 2) throw Error(ErrorKind::RankDeficient, "sbin has a single level");
  if (tbins.size() < 2) throw Error(ErrorKind::RankDeficient, "tbin has a single level");
  if (npoints.size() < 2) throw Error(ErrorKind::RankDeficient, "n_points has a single level");
  if (include_lr) {
    std::set<LrFlag> lrs;
    for (const JoinedRow* r : rows) lrs.insert(r->task->meta.lr);
    if (lrs.size() < 2) throw Error(ErrorKind::RankDeficient, "lr flag has a single level");
  }

  std::vector<std::string> names{"intercept"};
  for (size_t i = 1; i < sbins.size(); ++i) names.push_back("sbin_" + std::to_string(sbins[i]));
  for (size_t i = 1; i < tbins.size(); ++i) names.push_back("tbin_" + std::to_string(tbins[i]));
  for (size_t i = 1; i < npoints.size(); ++i) names.push_back("np_" + std::to_string(npoints[i]));
  if (include_lr) names.push_back("lr");

  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (const JoinedRow* r : rows) {
    std::vector<double> row{1.0};
    for (size_t i = 1; i < sbins.size(); ++i)
      row.push_back(r->task->meta.sbin == sbins[i] ? 1.0 : 0.0);
    for (size_t i = 1; i < tbins.size(); ++i)
      row.push_back(r->task->meta.tbin == tbins[i] ? 1.0 : 0.0);
    for (size_t i = 1; i < npoints.size(); ++i)
      row.push_back(r->task->meta.n_points == npoints[i] ? 1.0 : 0.0);
    if (include_lr) row.push_back(r->task->meta.lr == LrFlag::lr ? 1.0 : 0.0);
    X.push_back(std::move(row));
    y.push_back(100.0 * metric_of(*r, outcome));
  }

  RegressionResult result;
  result.terms = names;
  result.n = static_cast<int>(rows.size());
  result.coefficients = qr_least_squares(X, y, names, &result.std_errors);
  return result;
}

std::vector<RegimeDeltaRow> regime_deltas(const Dataset& ds) {
  // model -> regime -> (lane, n) -> accumulator
  std::map<std::string, std::map<int, std::map<std::pair<int, int>, std::pair<double, int>>>> acc;
  for (const auto& r : ds.rows) {
    if (r.task->meta.benchmark != Benchmark::reading_order || !r.task->meta.regime) continue;
    auto& slot = acc[r.eval->model][static_cast<int>(*r.task->meta.regime)]
                    [{r.task->meta.lane_count, r.task->meta.n_points}];
    slot.first += r.eval->tok_acc;
    slot.second += 1;
  }
  if (acc.empty()) throw Error(ErrorKind::InsufficientData, "no reading-order rows");

  std::vector<RegimeDeltaRow> out;
  for (const auto& [model, regimes] : acc) {
    if (regimes.size() != 4)
      throw Error(ErrorKind::InsufficientData,
                  "model " + model + " missing reading-order regimes");
    std::set<std::pair<int, int>> grid;
    for (const auto& [regime, cells] : regimes)
      for (const auto& [cell, v] : cells) grid.insert(cell);
    for (const auto& [regime, cells] : regimes)
      for (const auto& cell : grid)
        if (!cells.count(cell))
          throw Error(ErrorKind::InsufficientData,
                      "model " + model + " has uneven (lane, n) coverage across regimes");

    std::map<int, double> macro;
    for (const auto& [regime, cells] : regimes) {
      double sum = 0.0;
      for (const auto& [cell, v] : cells) sum += v.first / v.second;
      macro[regime] = sum / static_cast<double>(cells.size());
    }
    double mean = 0.0;
    for (const auto& [regime, m] : macro) mean += m;
    mean /= 4.0;
    for (const auto& [regime, m] : macro)
      out.push_back({model, static_cast<Regime>(regime), m, 100.0 * (m - mean)});
  }
  return out;
}

namespace {

std::string key_value(const JoinedRow& r, const std::string& key) {
  if (key == "model") return r.eval->model;
  if (key == "tbin") return std::to_string(r.task->meta.tbin);
  if (key == "sbin") return std::to_string(r.task->meta.sbin);
  if (key == "n_points") return std::to_string(r.task->meta.n_points);
  if (key == "confound_bucket")
    return confound_bucket_name(confound_bucket(r.task->meta.confound_count));
  if (key == "benchmark") return benchmark_name(r.task->meta.benchmark);
  if (key == "regime")
    return r.task->meta.regime ? regime_name(*r.task->meta.regime) : "none";
  if (key == "lr_flag") return lr_flag_name(r.task->meta.lr);
  throw Error(ErrorKind::UsageError, "unknown group key '" + key + "'");
}

}  // namespace

std::vector<AnswerRateRow> answer_rate_tables(const Dataset& ds,
                                              const std::vector<std::string>& group_keys) {
  struct Acc {
    int count = 0, answered = 0, em_sum = 0, em_answered_sum = 0;
  };
  std::map<std::vector<std::string>, Acc> groups;
  for (const auto& r : ds.rows) {
    std::vector<std::string> key;
    for (const auto& k : group_keys) key.push_back(key_value(r, k));
    Acc& a = groups[key];
    ++a.count;
    a.em_sum += r.eval->em;
    if (r.eval->answered) {
      ++a.answered;
      a.em_answered_sum += r.eval->em;
    }
  }
  std::vector<AnswerRateRow> out;
  for (const auto& [key, a] : groups) {
    AnswerRateRow row;
    for (size_t i = 0; i < group_keys.size(); ++i) row.keys[group_keys[i]] = key[i];
    row.count = a.count;
    row.answer_rate = a.count ? static_cast<double>(a.answered) / a.count : 0.0;
    row.em_overall = a.count ? static_cast<double>(a.em_sum) / a.count : 0.0;
    row.em_conditional = a.answered ? static_cast<double>(a.em_answered_sum) / a.answered : 0.0;
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_cell_table_csv(const std::string& path, const std::vector<CellRow>& rows, Metric m) {
  auto out = open_csv(path);
  out << "tbin,sbin,n_points,confound_bucket,metric,mean,count\n";
  for (const auto& r : rows)
    out << r.tbin << "," << r.sbin << "," << r.n_points << ","
        << confound_bucket_name(r.confound_bucket) << "," << metric_name(m) << "," << num(r.mean)
        << "," << r.count << "\n";
}

void write_window_curves_csv(const std::string& path, const std::vector<WindowCurve>& curves) {
  auto out = open_csv(path);
  out << "k,offset,mean,count,control_mean,control_count\n";
  for (const auto& c : curves)
    for (size_t i = 0; i < c.offsets.size(); ++i)
      out << c.k << "," << c.offsets[i] << "," << num(c.mean[i]) << "," << c.count[i] << ","
          << num(c.control_mean[i]) << "," << c.control_count[i] << "\n";
}

void write_prefix_control_csv(const std::string& path,
                              const std::vector<PrefixControlRow>& rows) {
  auto out = open_csv(path);
  out << "model,intersecting_prefix_exact,matched_no_cross_prefix_exact,"
         "delta_vs_matched_no_cross,mean_pre_len,n\n";
  for (const auto& r : rows)
    out << r.model << "," << num(r.intersecting_prefix_exact) << ","
        << num(r.matched_no_cross_prefix_exact) << "," << num(r.delta_pts) << ","
        << num(r.mean_pre_len) << "," << r.n << "\n";
}

void write_confound_curves_csv(const std::string& local_path, const std::string& cumulative_path,
                               const ConfoundCurves& curves) {
  {
    auto out = open_csv(local_path);
    out << "offset,mean,count,control_mean,control_count\n";
    for (size_t i = 0; i < curves.local.offsets.size(); ++i)
      out << curves.local.offsets[i] << "," << num(curves.local.mean[i]) << ","
          << curves.local.count[i] << "," << num(curves.local.control_mean[i]) << ","
          << curves.local.control_count[i] << "\n";
  }
  auto out = open_csv(cumulative_path);
  out << "bucket,mean,count\n";
  for (const auto& b : curves.cumulative)
    out << b.bucket << "," << num(b.mean) << "," << b.count << "\n";
}

void write_regression_csv(const std::string& path, const RegressionResult& r) {
  auto out = open_csv(path);
  out << "term,coefficient_pts,std_error,n\n";
  for (size_t i = 0; i < r.terms.size(); ++i)
    out << r.terms[i] << "," << num(r.coefficients[i]) << "," << num(r.std_errors[i]) << ","
        << r.n << "\n";
}

void write_regime_deltas_csv(const std::string& path, const std::vector<RegimeDeltaRow>& rows) {
  auto out = open_csv(path);
  out << "model,regime,macro_tok_acc,delta_pts\n";
  for (const auto& r : rows)
    out << r.model << "," << regime_name(r.regime) << "," << num(r.macro_tok_acc) << ","
        << num(r.delta_pts) << "\n";
}

void write_answer_rate_csv(const std::string& path, const std::vector<AnswerRateRow>& rows,
                           const std::vector<std::string>& group_keys) {
  auto out = open_csv(path);
  for (const auto& k : group_keys) out << k << ",";
  out << "count,answer_rate,em_overall,em_conditional\n";
  for (const auto& r : rows) {
    for (const auto& k : group_keys) out << r.keys.at(k) << ",";
    out << r.count << "," << num(r.answer_rate) << "," << num(r.em_overall) << ","
        << num(r.em_conditional) << "\n";
  }
}

}  // namespace pathbench

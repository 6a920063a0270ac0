#include <algorithm>
#include <filesystem>
#include <string>

#include <fmt/format.h>

#include "firetke/csv.hpp"
#include "firetke/evaluate.hpp"
#include "firetke/svg.hpp"

namespace firetke::evaluate {

namespace {

std::string metric_csv(const EvaluationReport& report, double ModelEvaluation::*val,
                       double ModelEvaluation::*test) {
  std::string out = "model,val,test\n";
  for (const auto& m : report.models) {
    out += models::kind_display_name(m.kind);
    if (m.ok) {
      out += ',';
      out += csv::format_double(m.*val);
      out += ',';
      out += csv::format_double(m.*test);
    } else {
      out += ",failed,failed";
    }
    out += '\n';
  }
  return out;
}

std::string loss_trace_csv(const std::vector<double>& trace) {
  std::string out = "epoch_or_stage,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += fmt::format("{},{}\n", i + 1, csv::format_double(trace[i]));
  }
  return out;
}

std::string grid_csv(const ModelEvaluation& eval) {
  std::string out = "config,val_r2,error\n";
  for (const auto& cell : eval.grid) {
    out += '"';
    out += cell.config.summary();
    out += '"';
    if (cell.ok) {
      out += ',';
      out += csv::format_double(cell.val_r2);
      out += ',';
    } else {
      out += ",,\"";
      out += cell.error;
      out += '"';
    }
    out += '\n';
  }
  return out;
}

std::string summary_text(const EvaluationReport& report) {
  std::string out;
  out += fmt::format("dataset: {}\n",
                     report.dataset_label.empty() ? "(unlabeled)"
                                                  : report.dataset_label);
  out += fmt::format("target: {}\n", report.target_name);
  out += fmt::format("split: {} train={} val={} test={} seed={}\n",
                     strategy_name(report.split.strategy), report.split.train,
                     report.split.val, report.split.test, report.split.seed);
  out += fmt::format("rows: train={} val={} test={}\n\n", report.n_train,
                     report.n_val, report.n_test);
  for (const auto& note : report.notes) out += fmt::format("note: {}\n", note);
  if (!report.notes.empty()) out += '\n';

  out += fmt::format("{:<6} {:>9} {:>9} {:>11} {:>11} {:>9} {:>9}  {}\n", "model",
                     "val R2", "test R2", "val MSE", "test MSE", "val MAE",
                     "test MAE", "hyperparameters");
  for (const auto& m : report.models) {
    if (!m.ok) {
      out += fmt::format("{:<6} failed: {}\n",
                         models::kind_display_name(m.kind), m.error);
      continue;
    }
    out += fmt::format(
        "{:<6} {:>9.4f} {:>9.4f} {:>11.5g} {:>11.5g} {:>9.5g} {:>9.5g}  {}\n",
        models::kind_display_name(m.kind), m.val_r2, m.test_r2, m.val_mse,
        m.test_mse, m.val_mae, m.test_mae, m.best_config.summary());
  }
  out += '\n';

  bool any_reference = false;
  for (const auto& m : report.models) {
    const auto ref_test = reference_r2(report.dataset_label, m.kind, true);
    const auto ref_val = reference_r2(report.dataset_label, m.kind, false);
    if (ref_test && ref_val) {
      if (!any_reference) {
        out += fmt::format(
            "published reference R2 (%) for SLEF dataset {} (annotation "
            "only, split rules differ):\n",
            report.dataset_label);
        any_reference = true;
      }
      out += fmt::format("{:<6} val {:>5.2f}%  test {:>5.2f}%",
                         models::kind_display_name(m.kind), *ref_val, *ref_test);
      if (m.ok)
        out += fmt::format("   (computed: val {:>6.2f}%  test {:>6.2f}%)\n",
                           100.0 * m.val_r2, 100.0 * m.test_r2);
      else
        out += "   (computed: failed)\n";
    }
  }
  if (any_reference) out += '\n';

  out += "runtimes (wall clock, informational):\n";
  for (const auto& m : report.models)
    out += fmt::format("{:<6} {:.3f} s\n", models::kind_display_name(m.kind),
                       m.runtime_seconds);
  return out;
}

}  // namespace

void write_report(const EvaluationReport& report,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  csv::atomic_write(out_dir / "r2.csv",
                    metric_csv(report, &ModelEvaluation::val_r2,
                               &ModelEvaluation::test_r2));
  csv::atomic_write(out_dir / "mse.csv",
                    metric_csv(report, &ModelEvaluation::val_mse,
                               &ModelEvaluation::test_mse));
  csv::atomic_write(out_dir / "mae.csv",
                    metric_csv(report, &ModelEvaluation::val_mae,
                               &ModelEvaluation::test_mae));

  for (const auto& m : report.models) {
    const std::string kind(models::kind_name(m.kind));
    csv::atomic_write(out_dir / fmt::format("grid_{}.csv", kind), grid_csv(m));
    if (!m.ok) continue;
    if (!m.loss_trace.empty())
      csv::atomic_write(out_dir / fmt::format("loss_{}.csv", kind),
                        loss_trace_csv(m.loss_trace));
    stats::write_kde_csv(out_dir / fmt::format("residual_kde_{}.csv", kind),
                         m.residual_kde);
  }

  // residual KDE overlay
  {
    std::vector<svg::Series> series;
    for (const auto& m : report.models) {
      if (!m.ok) continue;
      series.push_back(svg::Series{std::string(models::kind_display_name(m.kind)),
                                   m.residual_kde.grid, m.residual_kde.density});
    }
    if (!series.empty())
      svg::write_line_chart(out_dir / "residual_kde.svg",
                            "Test residual distributions", "residual",
                            "density", series);
  }

  // error evolution (training loss traces)
  {
    std::vector<svg::Series> series;
    for (const auto& m : report.models) {
      if (!m.ok || m.loss_trace.empty()) continue;
      svg::Series s;
      s.label = models::kind_display_name(m.kind);
      s.y = m.loss_trace;
      s.x.resize(s.y.size());
      for (std::size_t i = 0; i < s.x.size(); ++i)
        s.x[i] = static_cast<double>(i + 1);
      series.push_back(std::move(s));
    }
    if (!series.empty())
      svg::write_line_chart(out_dir / "error_evolution.svg",
                            "Training error evolution", "epoch / stage",
                            "training MSE", series);
  }

  // predicted vs actual per model (first stretch of the test split)
  for (const auto& m : report.models) {
    if (!m.ok) continue;
    const Eigen::Index n =
        std::min<Eigen::Index>(report.test_actual.size(), 300);
    svg::Series actual{"actual", {}, {}};
    svg::Series predicted{"predicted", {}, {}};
    for (Eigen::Index i = 0; i < n; ++i) {
      actual.x.push_back(static_cast<double>(i));
      actual.y.push_back(report.test_actual(i));
      predicted.x.push_back(static_cast<double>(i));
      predicted.y.push_back(m.test_pred(i));
    }
    svg::write_line_chart(
        out_dir / fmt::format("pred_vs_actual_{}.svg",
                              std::string(models::kind_name(m.kind))),
        fmt::format("{}: predicted vs actual (test)",
                    models::kind_display_name(m.kind)),
        "test sample", report.target_name, {actual, predicted});
  }

  // metric comparison bars
  {
    std::vector<svg::Bar> mse_bars, mae_bars;
    for (const auto& m : report.models) {
      if (!m.ok) continue;
      mse_bars.push_back(
          svg::Bar{std::string(models::kind_display_name(m.kind)), m.test_mse});
      mae_bars.push_back(
          svg::Bar{std::string(models::kind_display_name(m.kind)), m.test_mae});
    }
    if (!mse_bars.empty()) {
      svg::write_bar_chart(out_dir / "error_comparison_mse.svg",
                           "Test MSE by model", "MSE", mse_bars);
      svg::write_bar_chart(out_dir / "error_comparison_mae.svg",
                           "Test MAE by model", "MAE", mae_bars);
    }
  }

  csv::atomic_write(out_dir / "summary.txt", summary_text(report));
}

}  // namespace firetke::evaluate

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cpg/chart.hpp"

namespace cpg {

struct CheckEntry {
  std::string name;
  std::string anchor;  // identity being checked, in words
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  int samples = 0;
  int excluded = 0;
  std::string note;
};

struct ResidualReport {
  std::vector<CheckEntry> entries;
  bool pass() const;
  void append(const ResidualReport& other);
  void add(CheckEntry e);
  // Entrywise combination of reports over disjoint sample sets.
  void merge(const ResidualReport& other);
  const CheckEntry* find(const std::string& name) const;
  double residual(const std::string& name) const;  // throws if missing
};

// Chart samples evaluated once and shared by all checks of a scenario.
class SampleBatch {
 public:
  SampleBatch(const Chart& chart, const GridSpec& grid, int order);
  SampleBatch(const Chart& chart, const std::vector<std::vector<double>>& xs, int order);
  const Chart& chart() const { return *chart_; }
  int order() const { return order_; }
  std::vector<std::unique_ptr<Point>>& points() { return points_; }
  int rejected() const { return rejected_; }  // samples whose fields failed to evaluate
  const std::string& first_rejection() const { return first_rejection_; }

 private:
  void build(const std::vector<std::vector<double>>& xs);
  const Chart* chart_;
  int order_;
  std::vector<std::unique_ptr<Point>> points_;
  int rejected_ = 0;
  std::string first_rejection_;
};

// Running maxima of named residuals over samples.
class Tally {
 public:
  void add(const std::string& name, double r, const std::vector<double>& x);
  void exclude(const std::string& name);
  void declare(const std::string& name);
  void merge(const Tally& o);
  // Entries in first-seen order; tolerance looked up by name, else `tol`.
  ResidualReport report(double tol, const std::map<std::string, std::string>& anchors = {},
                        const std::map<std::string, double>& tols = {}) const;
  double max(const std::string& name) const;
  const std::vector<double>& worst(const std::string& name) const;

 private:
  struct Slot {
    double max = 0.0;
    int samples = 0;
    int excluded = 0;
    std::vector<double> worst;
  };
  std::vector<std::string> order_;
  std::map<std::string, Slot> slots_;
  Slot& slot(const std::string& name);
};

// Runs fn on every point (worker pool); DomainError on a point excludes it from
// every name in `names`.
void for_each_point(SampleBatch& batch, Tally& tally, const std::vector<std::string>& names,
                    const std::function<void(Point&, Tally&)>& fn);

// Builds the samples in chunks of at most `chunk` points, runs `suites` on each
// chunk and merges the reports, so cached per-point data stays bounded.
// Samples whose fields fail to evaluate count as excluded in every entry.
ResidualReport run_chunked(const Chart& chart, const std::vector<std::vector<double>>& xs, int order,
                           const std::function<ResidualReport(SampleBatch&)>& suites,
                           int chunk = 512);

// Worker count used by for_each_point; 0 means hardware concurrency.
void set_worker_count(int n);
int worker_count();

std::string format_point(const std::vector<double>& x);

}  // namespace cpg

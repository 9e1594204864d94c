#include "cpg/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cpg {

bool ResidualReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

void ResidualReport::append(const ResidualReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

void ResidualReport::add(CheckEntry e) { entries.push_back(std::move(e)); }

void ResidualReport::merge(const ResidualReport& other) {
  for (const auto& b : other.entries) {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const CheckEntry& a) { return a.name == b.name; });
    if (it == entries.end()) {
      entries.push_back(b);
      continue;
    }
    CheckEntry& a = *it;
    if (b.samples > 0 && (a.samples == 0 || b.residual > a.residual)) {
      a.residual = b.residual;
      a.note = b.note;
    }
    a.samples += b.samples;
    a.excluded += b.excluded;
    a.tol = std::max(a.tol, b.tol);
    a.pass = a.samples > 0 ? a.residual <= a.tol : true;
    if (a.samples > 0 && a.note.rfind("vacuous", 0) == 0) a.note.clear();
    if (a.pass && a.note.rfind("worst sample", 0) == 0) a.note.clear();
  }
}

const CheckEntry* ResidualReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

double ResidualReport::residual(const std::string& name) const {
  const CheckEntry* e = find(name);
  if (!e) throw std::out_of_range("no check named " + name);
  return e->residual;
}

SampleBatch::SampleBatch(const Chart& chart, const GridSpec& grid, int order)
    : chart_(&chart), order_(order) {
  build(sample_points(chart, grid));
}

SampleBatch::SampleBatch(const Chart& chart, const std::vector<std::vector<double>>& xs,
                         int order)
    : chart_(&chart), order_(order) {
  build(xs);
}

void SampleBatch::build(const std::vector<std::vector<double>>& xs) {
  std::vector<std::unique_ptr<Point>> slots(xs.size());
  std::vector<std::string> errors(xs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < xs.size();) {
      try {
        slots[i] = std::make_unique<Point>(*chart_, xs[i], order_);
      } catch (const DomainError& e) {
        errors[i] = format_point(xs[i]) + ": " + e.what();
      }
    }
  };
  const int nw = std::min<int>(worker_count(), static_cast<int>(xs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (slots[i]) {
      points_.push_back(std::move(slots[i]));
    } else {
      if (rejected_++ == 0) first_rejection_ = errors[i];
    }
  }
}

Tally::Slot& Tally::slot(const std::string& name) {
  auto it = slots_.find(name);
  if (it == slots_.end()) {
    order_.push_back(name);
    it = slots_.emplace(name, Slot{}).first;
  }
  return it->second;
}

void Tally::add(const std::string& name, double r, const std::vector<double>& x) {
  Slot& s = slot(name);
  ++s.samples;
  if (std::isnan(r)) r = INFINITY;
  if (s.samples == 1 || r > s.max || (r == s.max && x < s.worst)) {
    s.max = r;
    s.worst = x;
  }
}

void Tally::exclude(const std::string& name) { ++slot(name).excluded; }

void Tally::declare(const std::string& name) { slot(name); }

void Tally::merge(const Tally& o) {
  for (const auto& name : o.order_) {
    const Slot& b = o.slots_.at(name);
    Slot& a = slot(name);
    if (b.samples > 0 &&
        (a.samples == 0 || b.max > a.max || (b.max == a.max && b.worst < a.worst))) {
      a.max = b.max;
      a.worst = b.worst;
    }
    a.samples += b.samples;
    a.excluded += b.excluded;
  }
}

double Tally::max(const std::string& name) const {
  auto it = slots_.find(name);
  return it == slots_.end() ? 0.0 : it->second.max;
}

const std::vector<double>& Tally::worst(const std::string& name) const {
  static const std::vector<double> none;
  auto it = slots_.find(name);
  return it == slots_.end() ? none : it->second.worst;
}

ResidualReport Tally::report(double tol, const std::map<std::string, std::string>& anchors,
                             const std::map<std::string, double>& tols) const {
  ResidualReport r;
  for (const auto& name : order_) {
    const Slot& s = slots_.at(name);
    CheckEntry e;
    e.name = name;
    auto a = anchors.find(name);
    if (a != anchors.end()) e.anchor = a->second;
    auto t = tols.find(name);
    e.tol = t == tols.end() ? tol : t->second;
    e.residual = s.max;
    e.samples = s.samples;
    e.excluded = s.excluded;
    e.pass = s.samples > 0 ? s.max <= e.tol : true;
    if (s.samples == 0) e.note = "vacuous: no applicable samples";
    if (!e.pass && !s.worst.empty()) e.note = "worst sample " + format_point(s.worst);
    r.add(std::move(e));
  }
  return r;
}

ResidualReport run_chunked(const Chart& chart, const std::vector<std::vector<double>>& xs, int order,
                           const std::function<ResidualReport(SampleBatch&)>& suites, int chunk) {
  if (chunk < 1) throw std::invalid_argument("chunk size must be positive");
  ResidualReport total;
  int rejected = 0;
  for (std::size_t k = 0; k < xs.size(); k += chunk) {
    const std::vector<std::vector<double>> part(
        xs.begin() + k, xs.begin() + std::min(xs.size(), k + static_cast<std::size_t>(chunk)));
    SampleBatch batch(chart, part, order);
    rejected += batch.rejected();
    total.merge(suites(batch));
  }
  for (auto& e : total.entries) e.excluded += rejected;
  return total;
}

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_count(int n) { g_workers = n; }

int worker_count() {
  const int n = g_workers.load();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_point(SampleBatch& batch, Tally& tally, const std::vector<std::string>& names,
                    const std::function<void(Point&, Tally&)>& fn) {
  auto& pts = batch.points();
  const int nw = std::max(1, std::min<int>(worker_count(), static_cast<int>(pts.size())));
  std::vector<Tally> local(nw);
  std::atomic<std::size_t> next{0};
  auto work = [&](int w) {
    for (std::size_t i; (i = next++) < pts.size();) {
      Tally t;
      try {
        fn(*pts[i], t);
      } catch (const DomainError&) {
        t = Tally();
        for (const auto& n : names) t.exclude(n);
      }
      local[w].merge(t);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  // names first so report order is stable regardless of scheduling
  Tally ordered;
  for (const auto& n : names) ordered.declare(n);
  for (const auto& t : local) ordered.merge(t);
  tally.merge(ordered);
}

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace cpg

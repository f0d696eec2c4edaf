#include "penta/echelon.hpp"

#include <omp.h>

#include <algorithm>

namespace penta {

void Echelon::index() {
  pivot.clear();
  pivot.reserve(rows.size() * 2);
  for (std::uint32_t i = 0; i < rows.size(); ++i) pivot.emplace(rows[i].lead(), i);
}

void axpy(SparseRow& dst, const Rational& c, const SparseRow& src) {
  SparseRow out;
  out.cols.reserve(dst.cols.size() + src.cols.size());
  out.vals.reserve(dst.cols.size() + src.cols.size());
  std::size_t i = 0, j = 0;
  Rational t;
  while (i < dst.cols.size() || j < src.cols.size()) {
    if (j == src.cols.size() || (i < dst.cols.size() && dst.cols[i] < src.cols[j])) {
      out.cols.push_back(dst.cols[i]);
      out.vals.push_back(std::move(dst.vals[i]));
      ++i;
    } else if (i == dst.cols.size() || src.cols[j] < dst.cols[i]) {
      t = c * src.vals[j];
      out.cols.push_back(src.cols[j]);
      out.vals.push_back(-t);
      ++j;
    } else {
      t = c * src.vals[j];
      t = dst.vals[i] - t;
      if (sgn(t) != 0) {
        out.cols.push_back(dst.cols[i]);
        out.vals.push_back(t);
      }
      ++i;
      ++j;
    }
  }
  dst = std::move(out);
}

namespace {

void normalize(SparseRow& r) {
  Rational inv = 1 / r.vals.back();
  for (auto& v : r.vals) v *= inv;
}

using PivotMap = std::unordered_map<std::uint64_t, std::uint32_t>;

// Eliminate the leading entry while it sits on a pivot.
void reduce_lead(const std::vector<SparseRow>& semi, const PivotMap& piv, SparseRow& r) {
  while (!r.empty()) {
    auto it = piv.find(r.lead());
    if (it == piv.end()) return;
    Rational c = r.vals.back();
    axpy(r, c, semi[it->second]);
  }
}

// Eliminate every pivot entry against (possibly non-reduced) semi-echelon rows, keeping
// the leading entry when keep_lead is set. Elimination only introduces smaller columns,
// so a single downward sweep suffices.
void reduce_tail_semi(const std::vector<SparseRow>& semi, const PivotMap& piv, SparseRow& r,
                      bool keep_lead) {
  if (r.empty()) return;
  std::uint64_t bound = keep_lead ? r.lead() : ~std::uint64_t(0);
  bool first = true;
  while (true) {
    // largest column < bound (or <= when first pass without keep_lead) that is a pivot
    std::size_t pos = std::lower_bound(r.cols.begin(), r.cols.end(), bound) - r.cols.begin();
    if (!keep_lead && first && pos < r.cols.size() && r.cols[pos] == bound) ++pos;
    first = false;
    bool found = false;
    while (pos > 0) {
      --pos;
      auto it = piv.find(r.cols[pos]);
      if (it != piv.end()) {
        std::uint64_t col = r.cols[pos];
        Rational c = r.vals[pos];
        axpy(r, c, semi[it->second]);
        bound = col;
        found = true;
        break;
      }
    }
    if (!found) return;
  }
}

void sort_and_index(std::vector<SparseRow>& rows, Echelon& e) {
  std::sort(rows.begin(), rows.end(),
            [](const SparseRow& a, const SparseRow& b) { return a.lead() < b.lead(); });
  e.rows = std::move(rows);
  e.index();
}

}  // namespace

Echelon echelon_serial(std::vector<SparseRow> input) {
  std::vector<SparseRow> semi;
  PivotMap piv;
  for (auto& r : input) {
    reduce_lead(semi, piv, r);
    if (r.empty()) continue;
    normalize(r);
    piv.emplace(r.lead(), static_cast<std::uint32_t>(semi.size()));
    semi.push_back(std::move(r));
  }
  Echelon e;
  sort_and_index(semi, e);
  // back substitution in increasing pivot order: earlier rows are already reduced
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    SparseRow& r = e.rows[i];
    std::vector<std::pair<std::uint64_t, Rational>> hits;
    for (std::size_t k = 0; k + 1 < r.cols.size(); ++k)
      if (e.pivot.count(r.cols[k])) hits.emplace_back(r.cols[k], r.vals[k]);
    for (auto& [col, c] : hits) axpy(r, c, e.rows[e.pivot.at(col)]);
  }
  return e;
}

Echelon echelon_omp(std::vector<SparseRow> input, std::size_t batch) {
  std::vector<SparseRow> semi;
  PivotMap piv;
  for (std::size_t start = 0; start < input.size(); start += batch) {
    const std::size_t stop = std::min(input.size(), start + batch);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = start; i < stop; ++i) reduce_lead(semi, piv, input[i]);
    for (std::size_t i = start; i < stop; ++i) {
      SparseRow& r = input[i];
      reduce_lead(semi, piv, r);
      if (r.empty()) continue;
      normalize(r);
      piv.emplace(r.lead(), static_cast<std::uint32_t>(semi.size()));
      semi.push_back(std::move(r));
    }
  }
  std::vector<SparseRow> full(semi.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < semi.size(); ++i) {
    full[i] = semi[i];
    reduce_tail_semi(semi, piv, full[i], true);
  }
  Echelon e;
  sort_and_index(full, e);
  return e;
}

void reduce_full(const Echelon& e, SparseRow& r) {
  std::vector<std::pair<std::uint64_t, Rational>> hits;
  for (std::size_t k = 0; k < r.cols.size(); ++k)
    if (e.pivot.count(r.cols[k])) hits.emplace_back(r.cols[k], r.vals[k]);
  for (auto& [col, c] : hits) axpy(r, c, e.rows[e.pivot.at(col)]);
}

std::vector<SparseRow> normal_forms_serial(const Echelon& e, std::vector<SparseRow> rs) {
  for (auto& r : rs) reduce_full(e, r);
  return rs;
}

std::vector<SparseRow> normal_forms_omp(const Echelon& e, std::vector<SparseRow> rs) {
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < rs.size(); ++i) reduce_full(e, rs[i]);
  return rs;
}

}  // namespace penta

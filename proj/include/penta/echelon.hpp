#pragma once

// Sparse exact row reduction over Q. Columns are 64-bit monomial ranks; the pivot of a
// row is its largest column. Serial reference and OpenMP variants must agree exactly.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "penta/rational.hpp"

namespace penta {

struct SparseRow {
  std::vector<std::uint64_t> cols;  // strictly ascending
  std::vector<Rational> vals;       // nonzero
  bool empty() const { return cols.empty(); }
  std::uint64_t lead() const { return cols.back(); }
  bool operator==(const SparseRow& o) const { return cols == o.cols && vals == o.vals; }
};

// Fully reduced echelon form: every row has leading coefficient 1 and no other entry
// sits on a pivot column.
struct Echelon {
  std::vector<SparseRow> rows;  // sorted by pivot ascending
  std::unordered_map<std::uint64_t, std::uint32_t> pivot;  // pivot column -> row index

  std::size_t rank() const { return rows.size(); }
  bool is_pivot(std::uint64_t c) const { return pivot.count(c) != 0; }
  void index();  // rebuild pivot map after rows change
};

// dst <- dst - c * src
void axpy(SparseRow& dst, const Rational& c, const SparseRow& src);

Echelon echelon_serial(std::vector<SparseRow> rows);
Echelon echelon_omp(std::vector<SparseRow> rows, std::size_t batch = 64);

// Normal form against a fully reduced echelon (single pass).
void reduce_full(const Echelon& e, SparseRow& r);
std::vector<SparseRow> normal_forms_serial(const Echelon& e, std::vector<SparseRow> rs);
std::vector<SparseRow> normal_forms_omp(const Echelon& e, std::vector<SparseRow> rs);

}  // namespace penta

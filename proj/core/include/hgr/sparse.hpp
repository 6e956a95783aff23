#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace hgr {

/// Sparse non-negative vector: sorted unique indices, no explicit zeros.
struct SparseVector {
    std::int64_t dim = 0;
    std::vector<std::pair<std::int64_t, double>> entries;

    SparseVector() = default;
    explicit SparseVector(std::int64_t d) : dim(d) {}

    bool empty() const { return entries.empty(); }
    std::size_t nnz() const { return entries.size(); }
    double get(std::int64_t i) const;
    void set(std::int64_t i, double v);

    /// Entrywise sum; dimensions must match.
    SparseVector plus(const SparseVector& other) const;
    /// In-place entrywise accumulation.
    void accumulate(const SparseVector& other);
    SparseVector scaled(double factor) const;
    /// Keep entries strictly greater than eps.
    SparseVector pruned(double eps) const;
    /// Entrywise max (used when several query entities anchor the same node).
    void maxWith(std::int64_t i, double v);

    std::vector<double> toDense() const;
    static SparseVector fromDense(const std::vector<double>& dense, double drop_below = 0.0);

    /// Asserts sorted unique indices, finite nonzero values, indices in range.
    void validate() const;
};

struct Triplet {
    std::int64_t row = 0;
    std::int64_t col = 0;
    double value = 0.0;
};

/// Immutable sparse matrix with both row-compressed and column-compressed views.
/// Duplicate coordinates, explicit zeros and non-finite values are rejected.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::int64_t rows, std::int64_t cols, std::vector<Triplet> triplets);

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    SparseMatrix transpose() const;

    /// y = M * x for sparse x (column-gather over x's support).
    SparseVector multiply(const SparseVector& x) const;
    /// y = M * x for dense x (row-major accumulation).
    std::vector<double> multiply(const std::vector<double>& x) const;

    std::vector<double> rowSums() const;
    std::vector<double> colSums() const;

    /// Triplets in row-major order (row, then col ascending).
    std::vector<Triplet> toTriplets() const;

    /// Iterate one column's entries: (row, value) pairs.
    void forEachInColumn(std::int64_t col, const auto& fn) const {
        for (std::int64_t p = col_ptr_[col]; p < col_ptr_[col + 1]; ++p)
            fn(csc_rows_[p], csc_values_[p]);
    }
    void forEachInRow(std::int64_t row, const auto& fn) const {
        for (std::int64_t p = row_ptr_[row]; p < row_ptr_[row + 1]; ++p)
            fn(csr_cols_[p], values_[p]);
    }

    /// Little-endian binary block: rows, cols, nnz, then row/col/value arrays.
    void serialize(std::ostream& out) const;
    static SparseMatrix deserialize(std::istream& in);

    bool operator==(const SparseMatrix& other) const;

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    // CSR view
    std::vector<std::int64_t> row_ptr_{0};
    std::vector<std::int64_t> csr_cols_;
    std::vector<double> values_;
    // CSC view (rebuilt at construction)
    std::vector<std::int64_t> col_ptr_{0};
    std::vector<std::int64_t> csc_rows_;
    std::vector<double> csc_values_;

    void buildColumnView();
};

} // namespace hgr

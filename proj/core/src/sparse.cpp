#include <hgr/sparse.hpp>

#include <hgr/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace hgr {

double SparseVector::get(std::int64_t i) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), i,
                               [](const auto& e, std::int64_t k) { return e.first < k; });
    if (it != entries.end() && it->first == i) return it->second;
    return 0.0;
}

void SparseVector::set(std::int64_t i, double v) {
    auto it = std::lower_bound(entries.begin(), entries.end(), i,
                               [](const auto& e, std::int64_t k) { return e.first < k; });
    if (it != entries.end() && it->first == i) {
        if (v == 0.0)
            entries.erase(it);
        else
            it->second = v;
    } else if (v != 0.0) {
        entries.insert(it, {i, v});
    }
}

void SparseVector::maxWith(std::int64_t i, double v) {
    if (v <= 0.0) return;
    auto it = std::lower_bound(entries.begin(), entries.end(), i,
                               [](const auto& e, std::int64_t k) { return e.first < k; });
    if (it != entries.end() && it->first == i)
        it->second = std::max(it->second, v);
    else
        entries.insert(it, {i, v});
}

SparseVector SparseVector::plus(const SparseVector& other) const {
    SparseVector out = *this;
    out.accumulate(other);
    return out;
}

void SparseVector::accumulate(const SparseVector& other) {
    if (dim != other.dim) throw DimensionError("SparseVector::accumulate: dimension mismatch");
    std::vector<std::pair<std::int64_t, double>> merged;
    merged.reserve(entries.size() + other.entries.size());
    std::size_t a = 0, b = 0;
    while (a < entries.size() || b < other.entries.size()) {
        if (b == other.entries.size() ||
            (a < entries.size() && entries[a].first < other.entries[b].first)) {
            merged.push_back(entries[a++]);
        } else if (a == entries.size() || other.entries[b].first < entries[a].first) {
            merged.push_back(other.entries[b++]);
        } else {
            double v = entries[a].second + other.entries[b].second;
            if (v != 0.0) merged.emplace_back(entries[a].first, v);
            ++a;
            ++b;
        }
    }
    entries = std::move(merged);
}

SparseVector SparseVector::scaled(double factor) const {
    SparseVector out(dim);
    if (factor == 0.0) return out;
    out.entries.reserve(entries.size());
    for (const auto& [i, v] : entries) out.entries.emplace_back(i, v * factor);
    return out;
}

SparseVector SparseVector::pruned(double eps) const {
    SparseVector out(dim);
    for (const auto& [i, v] : entries)
        if (v > eps) out.entries.emplace_back(i, v);
    return out;
}

std::vector<double> SparseVector::toDense() const {
    std::vector<double> dense(static_cast<std::size_t>(dim), 0.0);
    for (const auto& [i, v] : entries) dense[static_cast<std::size_t>(i)] = v;
    return dense;
}

SparseVector SparseVector::fromDense(const std::vector<double>& dense, double drop_below) {
    SparseVector out(static_cast<std::int64_t>(dense.size()));
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (std::abs(dense[i]) > drop_below && dense[i] != 0.0)
            out.entries.emplace_back(static_cast<std::int64_t>(i), dense[i]);
    return out;
}

void SparseVector::validate() const {
    std::int64_t prev = -1;
    for (const auto& [i, v] : entries) {
        if (i <= prev) throw DimensionError("SparseVector: indices not sorted unique");
        if (i < 0 || i >= dim) throw DimensionError("SparseVector: index out of range");
        if (!std::isfinite(v) || v == 0.0) throw DimensionError("SparseVector: bad value");
        prev = i;
    }
}

SparseMatrix::SparseMatrix(std::int64_t rows, std::int64_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionError("SparseMatrix: negative shape");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    csr_cols_.reserve(triplets.size());
    values_.reserve(triplets.size());
    std::int64_t prev_row = -1, prev_col = -1;
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw DimensionError("SparseMatrix: triplet index out of range");
        if (t.row == prev_row && t.col == prev_col)
            throw DimensionError("SparseMatrix: duplicate (row, col) pair");
        if (!std::isfinite(t.value) || t.value == 0.0)
            throw DimensionError("SparseMatrix: values must be finite and nonzero");
        ++row_ptr_[static_cast<std::size_t>(t.row) + 1];
        csr_cols_.push_back(t.col);
        values_.push_back(t.value);
        prev_row = t.row;
        prev_col = t.col;
    }
    for (std::size_t r = 1; r < row_ptr_.size(); ++r) row_ptr_[r] += row_ptr_[r - 1];
    buildColumnView();
}

void SparseMatrix::buildColumnView() {
    col_ptr_.assign(static_cast<std::size_t>(cols_) + 1, 0);
    csc_rows_.assign(values_.size(), 0);
    csc_values_.assign(values_.size(), 0.0);
    for (std::int64_t c : csr_cols_) ++col_ptr_[static_cast<std::size_t>(c) + 1];
    for (std::size_t c = 1; c < col_ptr_.size(); ++c) col_ptr_[c] += col_ptr_[c - 1];
    std::vector<std::int64_t> next(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::int64_t r = 0; r < rows_; ++r) {
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            std::int64_t c = csr_cols_[p];
            std::int64_t q = next[static_cast<std::size_t>(c)]++;
            csc_rows_[q] = r;
            csc_values_[q] = values_[p];
        }
    }
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> flipped;
    flipped.reserve(values_.size());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            flipped.push_back({csr_cols_[p], r, values_[p]});
    return SparseMatrix(cols_, rows_, std::move(flipped));
}

SparseVector SparseMatrix::multiply(const SparseVector& x) const {
    if (x.dim != cols_) throw DimensionError("SparseMatrix::multiply: dimension mismatch");
    std::vector<double> acc(static_cast<std::size_t>(rows_), 0.0);
    for (const auto& [c, xv] : x.entries) {
        for (std::int64_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p)
            acc[static_cast<std::size_t>(csc_rows_[p])] += csc_values_[p] * xv;
    }
    SparseVector out(rows_);
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (acc[i] != 0.0) out.entries.emplace_back(static_cast<std::int64_t>(i), acc[i]);
    return out;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
    if (static_cast<std::int64_t>(x.size()) != cols_)
        throw DimensionError("SparseMatrix::multiply: dimension mismatch");
    std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
    for (std::int64_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            acc += values_[p] * x[static_cast<std::size_t>(csr_cols_[p])];
        y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
}

std::vector<double> SparseMatrix::rowSums() const {
    std::vector<double> sums(static_cast<std::size_t>(rows_), 0.0);
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            sums[static_cast<std::size_t>(r)] += values_[p];
    return sums;
}

std::vector<double> SparseMatrix::colSums() const {
    std::vector<double> sums(static_cast<std::size_t>(cols_), 0.0);
    for (std::size_t p = 0; p < values_.size(); ++p)
        sums[static_cast<std::size_t>(csr_cols_[p])] += values_[p];
    return sums;
}

std::vector<Triplet> SparseMatrix::toTriplets() const {
    std::vector<Triplet> out;
    out.reserve(values_.size());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            out.push_back({r, csr_cols_[p], values_[p]});
    return out;
}

namespace {

template <typename T>
void writeLE(std::ostream& out, T value) {
    // Host is little-endian on every supported target.
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T readLE(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IndexError("SparseMatrix::deserialize: truncated stream");
    return value;
}

} // namespace

void SparseMatrix::serialize(std::ostream& out) const {
    writeLE<std::int64_t>(out, rows_);
    writeLE<std::int64_t>(out, cols_);
    writeLE<std::int64_t>(out, nnz());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            writeLE<std::int64_t>(out, r);
            writeLE<std::int64_t>(out, csr_cols_[p]);
            writeLE<double>(out, values_[p]);
        }
}

SparseMatrix SparseMatrix::deserialize(std::istream& in) {
    auto rows = readLE<std::int64_t>(in);
    auto cols = readLE<std::int64_t>(in);
    auto count = readLE<std::int64_t>(in);
    if (rows < 0 || cols < 0 || count < 0)
        throw IndexError("SparseMatrix::deserialize: corrupt header");
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        Triplet t;
        t.row = readLE<std::int64_t>(in);
        t.col = readLE<std::int64_t>(in);
        t.value = readLE<double>(in);
        triplets.push_back(t);
    }
    return SparseMatrix(rows, cols, std::move(triplets));
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
           csr_cols_ == other.csr_cols_ && values_ == other.values_;
}

} // namespace hgr

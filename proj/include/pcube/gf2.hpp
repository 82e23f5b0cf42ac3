#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcube {

/// Dense bit-packed vector over GF(2). Length is fixed at construction.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }

    bool get(size_t i) const {
        check_range(i);
        return (w_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(size_t i, bool v) {
        check_range(i);
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(size_t i) {
        check_range(i);
        w_[i >> 6] ^= uint64_t{1} << (i & 63);
    }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    BitVector& operator^=(const BitVector& o) {
        if (o.n_ != n_) throw std::invalid_argument("BitVector xor: length mismatch");
        for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    BitVector operator|(const BitVector& o) const {
        if (o.n_ != n_) throw std::invalid_argument("BitVector or: length mismatch");
        BitVector r(n_);
        for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
        return r;
    }

    bool operator==(const BitVector&) const = default;

    /// Sorted indices of set bits.
    std::vector<uint32_t> ones() const {
        std::vector<uint32_t> out;
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            uint64_t w = w_[wi];
            while (w) {
                out.push_back(uint32_t(wi * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    const std::vector<uint64_t>& words() const { return w_; }
    std::vector<uint64_t>& words() { return w_; }

private:
    void check_range(size_t i) const {
        if (i >= n_) throw std::out_of_range("BitVector index " + std::to_string(i) +
                                             " out of range " + std::to_string(n_));
    }
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

/// Sparse GF(2) matrix: one sorted, duplicate-free column-index sequence per
/// row. Check matrices have constant row weight while the column count grows
/// combinatorially, so this is the storage of record; dense packed rows are
/// materialized only inside elimination.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), row_(rows) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    const std::vector<uint32_t>& row(size_t r) const { return row_.at(r); }

    void set_row(size_t r, std::vector<uint32_t> cols) {
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        if (!cols.empty() && cols.back() >= cols_)
            throw std::out_of_range("BitMatrix row entry exceeds column count");
        row_.at(r) = std::move(cols);
    }

    bool get(size_t r, size_t c) const {
        const auto& e = row_.at(r);
        return std::binary_search(e.begin(), e.end(), uint32_t(c));
    }

    /// y = M v over GF(2); v.size() must equal cols().
    BitVector mul(const BitVector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("BitMatrix::mul: length mismatch");
        BitVector y(rows_);
        for (size_t r = 0; r < rows_; ++r) {
            unsigned parity = 0;
            for (uint32_t c : row_[r]) parity ^= unsigned(v.get(c));
            if (parity) y.set(r, true);
        }
        return y;
    }

    BitVector packed_row(size_t r) const {
        BitVector v(cols_);
        for (uint32_t c : row_.at(r)) v.set(c, true);
        return v;
    }

    std::vector<BitVector> packed_rows() const {
        std::vector<BitVector> out;
        out.reserve(rows_);
        for (size_t r = 0; r < rows_; ++r) out.push_back(packed_row(r));
        return out;
    }

    /// Column degree sequence (number of rows touching each column).
    std::vector<size_t> column_degrees() const {
        std::vector<size_t> deg(cols_, 0);
        for (const auto& e : row_)
            for (uint32_t c : e) ++deg[c];
        return deg;
    }

    /// Per-column lists of incident rows.
    std::vector<std::vector<uint32_t>> column_lists() const {
        std::vector<std::vector<uint32_t>> cols(cols_);
        for (size_t r = 0; r < rows_; ++r)
            for (uint32_t c : row_[r]) cols[c].push_back(uint32_t(r));
        return cols;
    }

    bool operator==(const BitMatrix&) const = default;

    /// Text form: "rows cols" on the first line, then one line of
    /// space-separated column indices per row.
    std::string to_text() const {
        std::ostringstream os;
        os << rows_ << ' ' << cols_ << '\n';
        for (size_t r = 0; r < rows_; ++r) {
            const auto& e = row_[r];
            for (size_t i = 0; i < e.size(); ++i) {
                if (i) os << ' ';
                os << e[i];
            }
            os << '\n';
        }
        return os.str();
    }

    static BitMatrix from_text(std::istream& in) {
        size_t rows = 0, cols = 0;
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("BitMatrix::from_text: empty input");
        {
            std::istringstream hs(line);
            if (!(hs >> rows >> cols)) throw std::runtime_error("BitMatrix::from_text: bad header");
        }
        BitMatrix m(rows, cols);
        for (size_t r = 0; r < rows; ++r) {
            if (!std::getline(in, line)) throw std::runtime_error("BitMatrix::from_text: truncated");
            std::istringstream ls(line);
            std::vector<uint32_t> entries;
            uint32_t c;
            while (ls >> c) entries.push_back(c);
            m.set_row(r, std::move(entries));
        }
        return m;
    }

    static BitMatrix from_text(const std::string& text) {
        std::istringstream in(text);
        return from_text(in);
    }

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<std::vector<uint32_t>> row_;
};

/// Reduced row echelon form of a matrix, kept for repeated rowspace-membership
/// queries and kernel extraction.
class RowBasis {
public:
    RowBasis() = default;

    explicit RowBasis(const BitMatrix& m) : RowBasis(m.packed_rows(), m.cols()) {}

    RowBasis(std::vector<BitVector> rows, size_t cols) : cols_(cols) {
        for (BitVector& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("RowBasis: length mismatch");
            reduce_in_place(r);
            auto one = first_one(r);
            if (one < cols_) {
                insert_sorted(std::move(r), one);
            }
        }
    }

    size_t rank() const { return rows_.size(); }
    size_t cols() const { return cols_; }
    const std::vector<size_t>& pivots() const { return pivot_; }

    /// True iff v lies in the rowspace.
    bool contains(BitVector v) const {
        if (v.size() != cols_) throw std::invalid_argument("RowBasis::contains: length mismatch");
        reduce_in_place(v);
        return v.none();
    }

    /// Canonical coset representative: v reduced against the RREF rows.
    BitVector reduced(BitVector v) const {
        if (v.size() != cols_) throw std::invalid_argument("RowBasis::reduced: length mismatch");
        reduce_in_place(v);
        return v;
    }

    /// Basis of the kernel {v : Mv = 0}; size = cols - rank.
    std::vector<BitVector> kernel_basis() const {
        std::vector<bool> is_pivot(cols_, false);
        for (size_t p : pivot_) is_pivot[p] = true;
        std::vector<BitVector> basis;
        for (size_t f = 0; f < cols_; ++f) {
            if (is_pivot[f]) continue;
            BitVector v(cols_);
            v.set(f, true);
            for (size_t i = 0; i < rows_.size(); ++i)
                if (rows_[i].get(f)) v.set(pivot_[i], true);
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    size_t first_one(const BitVector& v) const {
        const auto& w = v.words();
        for (size_t wi = 0; wi < w.size(); ++wi)
            if (w[wi]) return wi * 64 + std::countr_zero(w[wi]);
        return cols_;
    }
    void reduce_in_place(BitVector& v) const {
        for (size_t i = 0; i < rows_.size(); ++i)
            if (v.get(pivot_[i])) v ^= rows_[i];
    }
    void insert_sorted(BitVector v, size_t piv) {
        // keep pivots ascending and the basis fully reduced
        for (size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i].get(piv)) rows_[i] ^= v;
        auto pos = std::lower_bound(pivot_.begin(), pivot_.end(), piv);
        size_t idx = size_t(pos - pivot_.begin());
        pivot_.insert(pos, piv);
        rows_.insert(rows_.begin() + idx, std::move(v));
    }

    size_t cols_ = 0;
    std::vector<BitVector> rows_;   // RREF rows, pivot columns ascending
    std::vector<size_t> pivot_;
};

/// GF(2) row rank.
inline size_t rank(const BitMatrix& m) { return RowBasis(m).rank(); }

/// Basis of {v : Mv = 0}.
inline std::vector<BitVector> kernel_basis(const BitMatrix& m) {
    return RowBasis(m).kernel_basis();
}

/// True iff v is a GF(2) combination of rows of m.
inline bool in_rowspace(const BitMatrix& m, const BitVector& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("in_rowspace: length mismatch");
    return RowBasis(m).contains(v);
}

}  // namespace pcube

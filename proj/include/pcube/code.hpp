#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pcube/bits.hpp"
#include "pcube/face.hpp"
#include "pcube/face_index.hpp"
#include "pcube/gf2.hpp"

namespace pcube {

/// Pauli error on n qubits as the usual pair of GF(2) vectors.
/// Y on qubit i means bit i is set in both parts.
struct PauliError {
    BitVector x;  // X-part
    BitVector z;  // Z-part

    PauliError() = default;
    explicit PauliError(size_t n) : x(n), z(n) {}

    size_t n() const { return x.size(); }

    /// Number of qubits with non-identity action.
    size_t weight() const { return (x | z).popcount(); }

    std::vector<uint32_t> support() const { return (x | z).ones(); }

    bool operator==(const PauliError&) const = default;
};

struct Syndrome {
    BitVector x_syndrome;  // from X-checks (detects Z-part)
    BitVector z_syndrome;  // from Z-checks (detects X-part)
    size_t weight() const { return x_syndrome.popcount() + z_syndrome.popcount(); }
    bool none() const { return x_syndrome.none() && z_syndrome.none(); }
};

/// CSS code given by a pair of orthogonal parity-check matrices.
/// For the projective construction, X-check rows are indexed by (p-1)-classes
/// and supported on their projective upper shadows; Z-check rows by
/// (p+1)-classes via lower shadows; qubits are p-classes.
class CssCode {
public:
    CssCode(BitMatrix h_x, BitMatrix h_z, int n_dim = 0, int p = 0, FaceIndex faces = {})
        : h_x_(std::move(h_x)),
          h_z_(std::move(h_z)),
          n_dim_(n_dim),
          p_(p),
          faces_(std::move(faces)) {
        if (h_x_.cols() != h_z_.cols())
            throw std::invalid_argument("CssCode: matrices disagree on qubit count");
        cols_x_ = h_x_.column_lists();
        cols_z_ = h_z_.column_lists();
    }

    size_t n() const { return h_x_.cols(); }
    size_t m_x() const { return h_x_.rows(); }
    size_t m_z() const { return h_z_.rows(); }
    size_t m() const { return m_x() + m_z(); }
    int n_dim() const { return n_dim_; }
    int p() const { return p_; }
    const FaceIndex& faces() const { return faces_; }
    const BitMatrix& h_x() const { return h_x_; }
    const BitMatrix& h_z() const { return h_z_; }

    /// Rows of h_x incident on qubit q.
    const std::vector<uint32_t>& x_checks_of(size_t q) const { return cols_x_[q]; }
    /// Rows of h_z incident on qubit q.
    const std::vector<uint32_t>& z_checks_of(size_t q) const { return cols_z_[q]; }

    /// h_x h_z^T = 0 over GF(2), i.e. every X check commutes with every Z check.
    bool css_valid() const {
        // count (x-row, z-row) pairs sharing each qubit; all pair parities must be even
        std::unordered_map<uint64_t, unsigned> pair_parity;
        for (size_t q = 0; q < n(); ++q)
            for (uint32_t rx : cols_x_[q])
                for (uint32_t rz : cols_z_[q])
                    pair_parity[(uint64_t(rx) << 32) | rz] ^= 1u;
        for (const auto& [_, par] : pair_parity)
            if (par) return false;
        return true;
    }

    /// RREF of h_z rows (Z-type stabilizer group), built on first use.
    const RowBasis& z_stabilizers() const {
        std::call_once(z_once_, [this] { z_basis_ = RowBasis(h_z_); });
        return z_basis_;
    }
    /// RREF of h_x rows (X-type stabilizer group), built on first use.
    const RowBasis& x_stabilizers() const {
        std::call_once(x_once_, [this] { x_basis_ = RowBasis(h_x_); });
        return x_basis_;
    }

private:
    BitMatrix h_x_, h_z_;
    std::vector<std::vector<uint32_t>> cols_x_, cols_z_;
    int n_dim_ = 0, p_ = 0;
    FaceIndex faces_;
    mutable std::once_flag x_once_, z_once_;
    mutable RowBasis x_basis_, z_basis_;
};

using CssCodePtr = std::shared_ptr<const CssCode>;

/// The (N, p = N/2) projective code.
inline CssCodePtr build_projective_code(int n_dim) {
    if (n_dim < 2 || n_dim % 2 != 0)
        throw std::invalid_argument("build_projective_code: N must be even and >= 2");
    int p = n_dim / 2;
    FaceIndex idx(n_dim, p);
    size_t n = idx.qubits.size();

    BitMatrix h_x(idx.xchecks.size(), n);
    for (size_t r = 0; r < idx.xchecks.size(); ++r) {
        std::vector<uint32_t> sup;
        for (const ProjFace& f : proj_shadow(idx.xchecks.face(r), ShadowDir::Up))
            sup.push_back(idx.qubits.id(f));
        h_x.set_row(r, std::move(sup));
    }
    BitMatrix h_z(idx.zchecks.size(), n);
    for (size_t r = 0; r < idx.zchecks.size(); ++r) {
        std::vector<uint32_t> sup;
        for (const ProjFace& f : proj_shadow(idx.zchecks.face(r), ShadowDir::Down))
            sup.push_back(idx.qubits.id(f));
        h_z.set_row(r, std::move(sup));
    }
    return std::make_shared<CssCode>(std::move(h_x), std::move(h_z), n_dim, p, std::move(idx));
}

/// X-checks detect the Z-part and vice versa.
inline Syndrome syndrome(const CssCode& code, const PauliError& e) {
    if (e.n() != code.n()) throw std::invalid_argument("syndrome: length mismatch");
    return Syndrome{code.h_x().mul(e.z), code.h_z().mul(e.x)};
}

struct DistanceReport {
    size_t k = 0;     // logical qubit count
    size_t d_x = 0;   // 0 when there is no logical of that type
    size_t d_z = 0;
    size_t rank_x = 0, rank_z = 0;
};

namespace detail {
/// Min weight over the span of `basis`, excluding vectors inside `mod`;
/// exhaustive over 2^|basis| combinations via Gray code.
inline size_t min_logical_weight(const std::vector<BitVector>& basis, const RowBasis& mod,
                                 size_t n) {
    if (basis.size() > 26) throw std::invalid_argument("min_logical_weight: kernel too large");
    size_t best = 0;
    BitVector cur(n);
    uint64_t count = uint64_t{1} << basis.size();
    uint64_t prev_gray = 0;
    for (uint64_t i = 1; i < count; ++i) {
        uint64_t gray = i ^ (i >> 1);
        uint64_t changed = gray ^ prev_gray;
        prev_gray = gray;
        cur ^= basis[size_t(std::countr_zero(changed))];
        if (mod.contains(cur)) continue;
        size_t w = cur.popcount();
        if (best == 0 || w < best) best = w;
    }
    return best;
}
}  // namespace detail

/// Smallest nonzero weight among centralizer elements (stabilizers and
/// logicals of either type). Below half of this, raw Hamming weight equals
/// coset-minimal weight. Exhaustive; refused above n = 24.
inline size_t min_centralizer_weight(const CssCode& code) {
    if (code.n() > 24)
        throw std::invalid_argument("min_centralizer_weight: n too large for exhaustion");
    auto scan = [&](const std::vector<BitVector>& basis) -> size_t {
        size_t best = SIZE_MAX;
        if (basis.empty()) return best;
        BitVector cur(code.n());
        uint64_t prev_gray = 0;
        for (uint64_t i = 1; i < (uint64_t{1} << basis.size()); ++i) {
            uint64_t gray = i ^ (i >> 1);
            uint64_t changed = gray ^ prev_gray;
            prev_gray = gray;
            cur ^= basis[size_t(std::countr_zero(changed))];
            best = std::min(best, cur.popcount());
        }
        return best;
    };
    // centralizer = ker(h_z) x ker(h_x) in the (x-part, z-part) picture
    return std::min(scan(code.z_stabilizers().kernel_basis()),
                    scan(code.x_stabilizers().kernel_basis()));
}

/// Exact k and distances by exhausting the kernels. Refused above n = 24.
inline DistanceReport estimate_distance_bruteforce(const CssCode& code) {
    if (code.n() > 24)
        throw std::invalid_argument("estimate_distance_bruteforce: n too large for exhaustion");
    DistanceReport rep;
    const RowBasis& bx = code.x_stabilizers();
    const RowBasis& bz = code.z_stabilizers();
    rep.rank_x = bx.rank();
    rep.rank_z = bz.rank();
    rep.k = code.n() - rep.rank_x - rep.rank_z;
    // d_z: min weight of v with h_x v = 0, v not a Z-stabilizer product
    rep.d_z = detail::min_logical_weight(bx.kernel_basis(), bz, code.n());
    rep.d_x = detail::min_logical_weight(bz.kernel_basis(), bx, code.n());
    return rep;
}

}  // namespace pcube

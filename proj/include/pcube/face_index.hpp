#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pcube/face.hpp"

namespace pcube {

/// Bidirectional ProjFace <-> dense id map for one face dimension.
/// Ids follow the canonical enumeration order, so qubit and check numbering
/// is reproducible byte-for-byte across runs and platforms.
class DimIndex {
public:
    DimIndex() = default;
    explicit DimIndex(std::vector<ProjFace> faces) : by_id_(std::move(faces)) {
        to_id_.reserve(by_id_.size() * 2);
        for (size_t i = 0; i < by_id_.size(); ++i) to_id_.emplace(by_id_[i], uint32_t(i));
    }

    size_t size() const { return by_id_.size(); }
    const ProjFace& face(size_t id) const { return by_id_.at(id); }

    uint32_t id(const ProjFace& f) const {
        auto it = to_id_.find(f);
        if (it == to_id_.end()) throw std::out_of_range("DimIndex: face not indexed");
        return it->second;
    }
    bool contains(const ProjFace& f) const { return to_id_.count(f) != 0; }

private:
    std::vector<ProjFace> by_id_;
    std::unordered_map<ProjFace, uint32_t, ProjFaceHash> to_id_;
};

/// Face numbering for the three dimensions p-1, p, p+1 that the code uses.
struct FaceIndex {
    int n_dim = 0;   // cube dimension N
    int p = 0;       // qubit face dimension
    DimIndex xchecks;  // (p-1)-classes
    DimIndex qubits;   // p-classes
    DimIndex zchecks;  // (p+1)-classes

    FaceIndex() = default;
    FaceIndex(int n, int p_)
        : n_dim(n),
          p(p_),
          xchecks(enumerate_proj_faces(n, p_ - 1)),
          qubits(enumerate_proj_faces(n, p_)),
          zchecks(enumerate_proj_faces(n, p_ + 1)) {}
};

}  // namespace pcube

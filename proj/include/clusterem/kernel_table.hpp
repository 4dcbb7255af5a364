#pragma once
#include <array>
#include <functional>
#include <vector>

#include "clusterem/geometry.hpp"
#include "clusterem/linalg.hpp"

namespace clusterem {

// Translation-invariant block kernel on a regular lattice, cached by integer offset.
// entry(0,0,0) is the self block.
class LatticeKernelTable {
public:
    using OffsetKernel = std::function<Dyadic(const Point& offset)>;

    LatticeKernelTable(const std::vector<LatticeIndex>& sites, double pitch, const OffsetKernel& kernel,
                       const Dyadic& self_block);

    const Dyadic& at(const LatticeIndex& a, const LatticeIndex& b) const {
        return table_[flat(a[0] - b[0], a[1] - b[1], a[2] - b[2])];
    }

    // out_i = sum_j K(i, j) * in_j over all sites, blocks of 3
    void apply(const CVector& in, CVector& out) const;
    // dense 3N x 3N copy
    Eigen::MatrixXcd dense() const;

    std::size_t size() const { return sites_.size(); }

private:
    std::size_t flat(int di, int dj, int dl) const {
        return (static_cast<std::size_t>(di + span_[0]) * dim_[1] + (dj + span_[1])) * dim_[2] + (dl + span_[2]);
    }

    std::vector<LatticeIndex> sites_;
    std::array<int, 3> span_{}, dim_{};
    std::vector<Dyadic> table_;
};

}  // namespace clusterem

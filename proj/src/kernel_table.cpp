#include "clusterem/kernel_table.hpp"

#include <algorithm>

namespace clusterem {

LatticeKernelTable::LatticeKernelTable(const std::vector<LatticeIndex>& sites, double pitch,
                                       const OffsetKernel& kernel, const Dyadic& self_block)
    : sites_(sites) {
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    if (!sites.empty()) {
        lo = hi = sites[0];
        for (const auto& s : sites)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], s[a]);
                hi[a] = std::max(hi[a], s[a]);
            }
    }
    for (int a = 0; a < 3; ++a) {
        span_[a] = hi[a] - lo[a];
        dim_[a] = 2 * span_[a] + 1;
    }
    table_.resize(static_cast<std::size_t>(dim_[0]) * dim_[1] * dim_[2]);
#pragma omp parallel for schedule(static)
    for (int i = -span_[0]; i <= span_[0]; ++i)
        for (int j = -span_[1]; j <= span_[1]; ++j)
            for (int l = -span_[2]; l <= span_[2]; ++l) {
                if (i == 0 && j == 0 && l == 0)
                    table_[flat(0, 0, 0)] = self_block;
                else
                    table_[flat(i, j, l)] = kernel(pitch * Point(i, j, l));
            }
}

void LatticeKernelTable::apply(const CVector& in, CVector& out) const {
    const std::size_t n = sites_.size();
    out.resize(3 * n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        CVec3 acc = CVec3::Zero();
        const LatticeIndex& si = sites_[i];
        for (std::size_t j = 0; j < n; ++j) acc.noalias() += at(si, sites_[j]) * in.segment<3>(3 * j);
        out.segment<3>(3 * i) = acc;
    }
}

Eigen::MatrixXcd LatticeKernelTable::dense() const {
    const std::size_t n = sites_.size();
    Eigen::MatrixXcd A(3 * n, 3 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A.block<3, 3>(3 * i, 3 * j) = at(sites_[i], sites_[j]);
    return A;
}

}  // namespace clusterem

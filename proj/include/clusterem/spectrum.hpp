#pragma once
#include <functional>
#include <string>
#include <vector>

#include "clusterem/volume.hpp"

namespace clusterem {

// dense real k=0 magnetization matrix (3 cells x 3 cells), for small grids
Eigen::MatrixXd magnetization_matrix(const VolumeGrid& g);

// Eigendecomposition of the k=0 magnetization matrix on a grid that is symmetric under the
// three coordinate reflections through the domain centre. The matrix splits into 8 blocks,
// one per character of the reflection group, each solved densely.
class MagnetizationEigensystem {
public:
    explicit MagnetizationEigensystem(const VolumeGrid& g);

    struct Mode {
        double value;
        int irrep;
        int column;
    };
    // all modes sorted by eigenvalue, ties broken by (irrep, column)
    std::vector<Mode> modes() const;
    std::size_t mode_count() const;

    Eigen::VectorXd mode_vector(const Mode& m) const;  // unit Euclidean norm, 3*cells
    GridField apply_function(const GridField& f, const std::function<double(double)>& fn) const;
    // Rayleigh quotient matrix of a set of real orthonormal columns
    Eigen::MatrixXd project(const Eigen::MatrixXd& Q) const;
    // squared overlaps of every mode with a (real or complex) field, same order as modes()
    std::vector<double> overlaps(const GridField& f) const;

    static bool symmetric_grid(const VolumeGrid& g);

private:
    Eigen::MatrixXd to_block(const Eigen::MatrixXd& F, int irrep) const;
    Eigen::VectorXd from_blocks(const std::vector<Eigen::VectorXd>& y) const;

    const VolumeGrid* grid_;
    std::vector<std::size_t> reps_;                 // orbit representatives
    std::vector<std::array<std::size_t, 8>> orbit_;  // cell of g(rep) for each group element g
    std::vector<Eigen::VectorXd> values_;           // per irrep
    std::vector<Eigen::MatrixXd> vectors_;          // per irrep
};

// Rayleigh-Ritz values of the magnetization matrix on gradients of harmonic polynomials of
// degree <= `degree` (constants dropped)
std::vector<double> gradient_ritz_values(const VolumeGrid& g, const MagnetizationEigensystem& es, int degree);

struct SpectrumReport {
    int n = 0;
    std::vector<double> eigenvalues;     // full discrete spectrum restricted to (0,1)
    std::vector<std::string> tags;       // advisory: "gradient-like" when h*|curl| <= 1e-3 |v|
    std::size_t total_modes = 0;
    std::size_t outside_unit_interval = 0;
    int ritz_degree = 0;
    std::vector<double> gradient_eigenvalues;  // the filtered (gradient-harmonic) spectrum
};

SpectrumReport magnetization_spectrum(const VolumeGrid& g, const MagnetizationEigensystem& es, std::size_t count,
                                      int ritz_degree);
SpectrumReport magnetization_spectrum(const VolumeGrid& g, std::size_t count, int ritz_degree = 8);

// eigenvalue above 1/3 whose mode overlaps most with the given source
MagnetizationEigensystem::Mode resonant_mode(const MagnetizationEigensystem& es, const GridField& source);

}  // namespace clusterem

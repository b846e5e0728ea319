#ifndef PPSLAB_ALGEBRA_HPP
#define PPSLAB_ALGEBRA_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppslab/types.hpp"

namespace ppslab {

/// A finite partial boolean algebra of projectors: the closure of a generator
/// set under complements and products of commuting pairs, together with its
/// commutation structure. Indices refer to `elements`.
struct ProjectorAlgebra {
    Index dim = 0;
    std::vector<Projector> elements;
    std::vector<std::string> names;
    int zero_index = -1;
    int identity_index = -1;
    std::vector<int> complement_of;                 // total involution
    std::vector<std::pair<int, int>> commuting_pairs; // i < j
    std::map<std::pair<int, int>, int> product_of;  // (i, j) with i < j -> index of P_i P_j
    std::vector<int> generator_indices;

    int size() const { return static_cast<int>(elements.size()); }

    /// Index of the element equal to `p` (projector_equal), or -1.
    int find(const Projector& p, const Tolerances& tol = Tolerances::defaults()) const;

    /// Product index for an unordered commuting pair. Throws MissingElement if
    /// the pair is not commuting or the product is absent.
    int product_index(int i, int j) const;

    bool pair_commutes(int i, int j) const;

    /// Index of P_i + P_j - P_i P_j, located as I - (I-P_i)(I-P_j).
    /// Throws MissingElement on structural gaps.
    int join_index(int i, int j) const;
};

/// Worklist fixpoint of the two closure rules (complement; product of each
/// commuting pair), starting from the generators plus 0 and I. Deduplicates
/// with projector_equal. Throws ClosureBudgetExceeded when the fixpoint is not
/// reached within max_size elements.
ProjectorAlgebra close(const std::vector<Projector>& generators,
                       int max_size = Limits{}.max_closure,
                       const Tolerances& tol = Tolerances::defaults(),
                       const std::vector<std::string>& labels = {});

/// All unordered commuting index pairs of the algebra (including pairs with 0
/// and I).
std::vector<std::pair<int, int>> commuting_pairs_of(const ProjectorAlgebra& alg);

} // namespace ppslab

#endif // PPSLAB_ALGEBRA_HPP

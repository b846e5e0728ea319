#ifndef PPSLAB_FIXTURES_HPP
#define PPSLAB_FIXTURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "ppslab/pps.hpp"

namespace ppslab {

/// Ball-in-three-boxes scenario: pre (1,1,1)/sqrt(3), post (1,1,-1)/sqrt(3),
/// generators {P1, I-P1, P2, I-P2}.
Scenario three_box_scenario();

/// Two-qubit scenario with pre |+>|0> and post the maximally entangled state.
/// The polarisation generators carry the joint three-outcome measurement
/// {P1 x P+, P1 x P-, P0 x I} as their context.
Scenario cheshire_cat_scenario();

/// Orthogonal pre/post with a computational-basis measurement: the
/// post-selection never succeeds, so the conditionals are undefined.
Scenario qubit_orthogonal_scenario();

/// Orthogonal pre/post with the x-basis intermediate measurement; the
/// conditionals are defined (1/2 each) but never binary.
Scenario qubit_xmeasure_scenario();

std::optional<Scenario> fixture_by_name(const std::string& name);
std::vector<std::string> fixture_names();

/// Kronecker product (row-major block convention).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace ppslab

#endif // PPSLAB_FIXTURES_HPP

// The acceptance suite: each check pins one library-level guarantee at its
// stated tolerance and reports the worst measured value.
#ifndef BETHELAB_VERIFY_HPP
#define BETHELAB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bethelab::verify {

struct CheckResult {
  std::string name;
  std::string module;  // subset tag for --only
  bool passed = false;
  double measured = 0.0;   // worst observed value
  double tolerance = 0.0;  // pinned bound it is compared against
  std::string detail;
  double seconds = 0.0;
};

CheckResult check_structured_determinants(std::uint64_t seed);
CheckResult check_cv_inversion_duality(std::uint64_t seed);
CheckResult check_bethe_vs_exact_diagonalization();
CheckResult check_two_spinon_scaling();
CheckResult check_barnes_integral_identity();
CheckResult check_density_closed_forms();
CheckResult check_higher_level_combinatorics(std::uint64_t seed);
CheckResult check_spinon_dispersion_and_tau(std::uint64_t seed);
CheckResult check_four_spinon_assembly();

// All checks, optionally restricted to the given module tags.
std::vector<CheckResult> run_all(std::uint64_t seed,
                                 const std::vector<std::string>& only = {});

// Data row shared between the scaling check and the scaling command.
struct ScalingRow {
  int sites = 0;
  double hole1 = 0.0, hole2 = 0.0;  // realized rapidities
  double m2_finite = 0.0;           // M^2 |F|^2 from the determinant route
  double m2_thermo = 0.0;           // closed form at the realized rapidities
  double gap = 0.0;                 // relative difference
};
ScalingRow two_spinon_scaling_row(int sites, double theta1, double theta2);

}  // namespace bethelab::verify

#endif

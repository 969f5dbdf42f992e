#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcid {

enum class Errc {
  malformed_matrix,
  shape_mismatch,
  not_irreducible,
  not_reversible,
  alpha_out_of_range,
  empty_subset,
  negative_entry,
  zero_denominator,
  zero_mass_subset,
  bad_subset,
  too_large,
  infeasible,
  solver_stall,
  degenerate_embedding,
  certification_failed,
  bad_nu,
  bad_args,
  alphabet_mismatch,
  too_few_samples,
  not_reversible_reference,
  trajectory_alphabet_mismatch,
  parse_error,
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::malformed_matrix: return "MalformedMatrix";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::not_irreducible: return "NotIrreducible";
    case Errc::not_reversible: return "NotReversible";
    case Errc::alpha_out_of_range: return "AlphaOutOfRange";
    case Errc::empty_subset: return "EmptySubset";
    case Errc::negative_entry: return "NegativeEntry";
    case Errc::zero_denominator: return "ZeroDenominator";
    case Errc::zero_mass_subset: return "ZeroMassSubset";
    case Errc::bad_subset: return "BadSubset";
    case Errc::too_large: return "TooLarge";
    case Errc::infeasible: return "Infeasible";
    case Errc::solver_stall: return "SolverStall";
    case Errc::degenerate_embedding: return "DegenerateEmbedding";
    case Errc::certification_failed: return "CertificationFailed";
    case Errc::bad_nu: return "BadNu";
    case Errc::bad_args: return "BadArgs";
    case Errc::alphabet_mismatch: return "AlphabetMismatch";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::not_reversible_reference: return "NotReversibleReference";
    case Errc::trajectory_alphabet_mismatch: return "TrajectoryAlphabetMismatch";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mcid

#include "trex/errors.hpp"

namespace trex {

const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::invalid_vertex: return "InvalidVertex";
    case errc::invalid_weight: return "InvalidWeight";
    case errc::unsupported_size: return "UnsupportedSize";
    case errc::unsupported_kind: return "UnsupportedKind";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::empty_grid: return "EmptyGrid";
    case errc::invalid_parameters: return "InvalidParameters";
    case errc::insufficient_data: return "InsufficientData";
    case errc::disconnected: return "Disconnected";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::singular_base: return "SingularBase";
    case errc::coupling_too_strong: return "CouplingTooStrong";
    case errc::inverse_too_small: return "InverseTooSmall";
    case errc::degenerate_kernel: return "DegenerateKernel";
    case errc::zero_overlap: return "ZeroOverlap";
    case errc::window_on_spectrum: return "WindowOnSpectrum";
    case errc::zero_cross_coupling: return "ZeroCrossCoupling";
    case errc::degenerate_slope: return "DegenerateSlope";
    case errc::assumption_violated: return "AssumptionViolated";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::zero_matrix: return "ZeroMatrix";
    case errc::singular: return "Singular";
    case errc::on_spectrum: return "OnSpectrum";
    case errc::singular_restriction: return "SingularRestriction";
    case errc::singular_core: return "SingularCore";
  }
  return "UnknownError";
}

int exit_code_for(errc c) noexcept {
  switch (c) {
    case errc::invalid_vertex:
    case errc::invalid_weight:
    case errc::unsupported_size:
    case errc::unsupported_kind:
    case errc::dimension_mismatch:
    case errc::empty_grid:
    case errc::invalid_parameters:
    case errc::insufficient_data:
    case errc::disconnected:
    case errc::config_invalid:
      return 2;
    case errc::singular_base:
    case errc::coupling_too_strong:
    case errc::inverse_too_small:
    case errc::degenerate_kernel:
    case errc::zero_overlap:
    case errc::window_on_spectrum:
    case errc::zero_cross_coupling:
    case errc::degenerate_slope:
    case errc::assumption_violated:
      return 3;
    default:
      return 4;
  }
}

}  // namespace trex

#pragma once

#include <stdexcept>
#include <string>

namespace trex {

enum class errc {
  // argument / configuration
  invalid_vertex,
  invalid_weight,
  unsupported_size,
  unsupported_kind,
  dimension_mismatch,
  empty_grid,
  invalid_parameters,
  insufficient_data,
  disconnected,
  config_invalid,
  // hypothesis violations (an experiment's preconditions do not hold)
  singular_base,
  coupling_too_strong,
  inverse_too_small,
  degenerate_kernel,
  zero_overlap,
  window_on_spectrum,
  zero_cross_coupling,
  degenerate_slope,
  assumption_violated,
  // numerical failures
  not_symmetric,
  zero_matrix,
  singular,
  on_spectrum,
  singular_restriction,
  singular_core,
};

const char* errc_name(errc c) noexcept;

/// Process exit code classes used by the CLI: 2 = configuration error,
/// 3 = hypothesis violation, 4 = numerical failure.
int exit_code_for(errc c) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace trex

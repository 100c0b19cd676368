#pragma once

#include <stdexcept>
#include <string>

namespace ribetor {

enum class errc {
    not_prime,
    degree_zero,
    too_large,
    bad_characteristic,
    division_by_zero,
    ctx_mismatch,
    zero_element,
    curve_mismatch,
    not_on_curve,
    not_found,
    incompatible_generator,
    unsupported_shape,
    on_line,
    miller_degenerate,
    support_hit,
    exhausted_retries,
    not_torsion,
    bad_orbit,
    hypothesis_violated,
    not_a_morphism,
    singular_automorphy,
    config_error,
    internal,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

} // namespace ribetor

#include "udmac/errors.hpp"

#include <sstream>

namespace udmac {

namespace {

std::string admissibility_message(double payload_bits, double bound_bits) {
  std::ostringstream os;
  os << "payload-channel bound violated: E[P] = " << payload_bits
     << " bits exceeds T_s * M * r_tr = " << bound_bits << " bits";
  return os.str();
}

}  // namespace

AdmissibilityError::AdmissibilityError(double payload_bits, double bound_bits)
    : ConfigError(admissibility_message(payload_bits, bound_bits)),
      payload_bits_(payload_bits),
      bound_bits_(bound_bits) {}

ConvergenceError::ConvergenceError(const std::string& what, double residual)
    : Error(what), residual_(residual) {}

}  // namespace udmac

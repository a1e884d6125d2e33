#pragma once

#include <gsl/gsl_errno.h>

#include <mutex>

namespace susy::detail {

// GSL's default handler aborts; every status is checked by the caller instead.
inline void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace susy::detail

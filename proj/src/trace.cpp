#include "cimsolve/trace.hpp"

namespace cimsolve {

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::target_reached: return "target_reached";
    case RunStatus::settled: return "settled";
    case RunStatus::diverged: return "diverged";
  }
  return "unknown";
}

}  // namespace cimsolve

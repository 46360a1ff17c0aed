#include "seriesolve/opcounter.hpp"

namespace seriesolve::detail {

OpCounter*& active_counter_slot() {
  thread_local OpCounter* slot = nullptr;
  return slot;
}

}  // namespace seriesolve::detail

#pragma once

#include <stdexcept>

#include "mmarena/env/action.hpp"

namespace mmarena::agent {

// Flat action index: idx = b*55 + s*5 + h with ascending grids.
inline int encode_action(const env::MMAction& a) {
  return a.buy_index() * 55 + a.sell_index() * 5 + a.hedge_index();
}

inline env::MMAction decode_action(int idx) {
  if (idx < 0 || idx >= env::kActionCount)
    throw std::out_of_range("action index out of range");
  return env::MMAction::from_indices(idx / 55, (idx / 5) % 11, idx % 5);
}

}  // namespace mmarena::agent

#pragma once

#include <stdexcept>

namespace kcob {

// Malformed user input (bad PD text, bad movie, bad flags).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Refusal to compute (generator budget exceeded).
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kcob

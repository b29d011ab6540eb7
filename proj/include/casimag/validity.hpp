#pragma once

#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace casimag {

/// While an instance is alive on the current thread, failed validity gates are recorded
/// instead of thrown. Used for forced evaluation outside the documented domains.
class RelaxedGates {
 public:
  RelaxedGates() : previous_(current()) { current() = this; }
  ~RelaxedGates() { current() = previous_; }
  RelaxedGates(const RelaxedGates&) = delete;
  RelaxedGates& operator=(const RelaxedGates&) = delete;

  const std::vector<std::string>& violations() const { return violations_; }
  void record(std::string message) { violations_.push_back(std::move(message)); }

  static RelaxedGates*& current() {
    thread_local RelaxedGates* active = nullptr;
    return active;
  }

 private:
  RelaxedGates* previous_;
  std::vector<std::string> violations_;
};

/// Throws ValidityError when ok is false, unless gates are relaxed on this thread.
inline void check_gate(bool ok, const std::string& message) {
  if (ok) return;
  if (RelaxedGates* g = RelaxedGates::current()) {
    g->record(message);
    return;
  }
  throw ValidityError(message);
}

}  // namespace casimag

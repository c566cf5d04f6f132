#ifndef CWP_ERROR_HPP
#define CWP_ERROR_HPP

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cwp {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  int line = 0;
  ParseError(const std::string& msg, int ln = 0)
      : Error(ln ? ("line " + std::to_string(ln) + ": " + msg) : msg), line(ln) {}
};

struct IndexError : Error {
  using Error::Error;
};

// Decompression refused: value longer than the caller's cap.
struct TooLongError : Error {
  using Error::Error;
};

// A bounded witness search was exhausted. This signals that the active
// ConstantsBundle is too small for the instance; it is never silently
// swallowed. Carries enough context to recalibrate.
struct NoWitnessError : Error {
  std::string where;    // operation / variable being processed
  int radius = 0;       // search radius that was exhausted
  std::string detail;   // triangle / decomposition data
  NoWitnessError(std::string where_, int radius_, std::string detail_)
      : Error("no witness found in " + where_ + " within radius " +
              std::to_string(radius_) + " (" + detail_ + ")"),
        where(std::move(where_)), radius(radius_), detail(std::move(detail_)) {}
};

struct InternalError : Error {
  using Error::Error;
};

// Run-time checked invariants (kept on in release; the acceptance suite counts
// them). check_count() totals every bound assertion that was evaluated.
namespace checks {
std::atomic<std::uint64_t>& counter();
inline void count() { counter().fetch_add(1, std::memory_order_relaxed); }
inline std::uint64_t check_count() { return counter().load(); }
}  // namespace checks

inline void require(bool cond, const char* what) {
  if (!cond) throw InternalError(std::string("invariant violated: ") + what);
}

}  // namespace cwp

#endif

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mwb/error.hpp"

namespace mwb {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Exact counting
//
// The bounds compared here grow as towers like 2^(ems * 2^ems); at ems = 32
// that is a 2^37-bit number, far beyond anything worth materializing. Count
// therefore keeps the exact value in scaled form mantissa * 2^shift with an
// odd arbitrary-precision mantissa and an arbitrary-precision shift, so
// powers of two of any height stay cheap while products, powers and
// comparisons remain exact. Sums are exact too, but require aligning the
// mantissas; a sum whose aligned mantissa would exceed an internal bit cap
// throws instead of approximating. No operation ever rounds.
// ---------------------------------------------------------------------------

class Count {
 public:
  Count() = default;  // zero
  Count(std::uint64_t n) : Count(BigInt(n)) {}
  explicit Count(BigInt n);

  static Count pow2(BigInt shift);

  bool is_zero() const { return mantissa_.is_zero(); }

  // Bits needed to write the value out: 0 for zero, shift + mantissa bits
  // otherwise.
  BigInt bit_length() const;

  // The plain integer value; throws Error when it would exceed max_bits
  // bits.
  BigInt value(std::uint64_t max_bits = 1ull << 22) const;

  // Decimal when the value fits 4096 bits, else "2^<shift>" or
  // "<mantissa>*2^<shift>".
  std::string str() const;

  Count operator+(const Count& rhs) const;
  Count operator*(const Count& rhs) const;
  Count pow(std::uint64_t exponent) const;

  bool operator==(const Count& rhs) const;
  std::strong_ordering operator<=>(const Count& rhs) const;

  const BigInt& mantissa() const { return mantissa_; }
  const BigInt& shift() const { return shift_; }

 private:
  BigInt mantissa_;  // odd, or zero (then shift_ is zero too)
  BigInt shift_;
};

// 2^bits: the number of states of a memory of that many bits.
Count state_count(std::uint64_t bits);

// The two sides of the counting inequality for an external memory of ems
// bits (ems even, >= 2, so every exponent is an integer):
//   reachable_transformation_bound = ((2^(ems/2))^(2^(ems/2)))^(2^(ems/2)) * 2^ems
//                                  = 2^((ems/2) * 2^ems + ems)
//   all_transformations            = (2^ems)^(2^ems) = 2^(ems * 2^ems)
// The first bounds what machines with at most ems/2 working bits, at most
// 2^(ems/2) instructions and at most 2^ems applicable threads can reach;
// the second counts every transformation on the external memory states.
Count reachable_transformation_bound(std::uint64_t ems);
Count all_transformations(std::uint64_t ems);

// The inequality bound < all, reduced symbolically: with x = 2^(ems/2) it
// becomes (x^2 - 2) * log2(x) > 0, which holds exactly when ems > 1. Takes
// a positive rational ems = num/den so the boundary cases stay exact; for
// even integer ems this agrees with comparing the two exact values above.
bool counting_inequality_holds(std::uint64_t ems_num, std::uint64_t ems_den = 1);

// ((d+w) * e^2 + 2)^e: an upper bound on the number of threads over d data
// and w load/store instructions with at most e states — each state picks an
// instruction and two successor states, or is S or D. Requires d, w, e >= 1.
Count thread_count_bound(std::uint64_t d, std::uint64_t w, std::uint64_t e);

// The exact number of threads with at most `e` states over `alphabet_size`
// actions, counted up to bisimilarity by exhaustive enumeration. Throws
// StateSpaceTooLarge when the raw assignment count exceeds the cap.
Count exact_thread_count(std::uint32_t alphabet_size, std::uint32_t e,
                         std::uint64_t cap = 2'000'000);

// ---------------------------------------------------------------------------
// Parameter-regime classification
// ---------------------------------------------------------------------------

struct RegimeParams {
  std::uint32_t k = 0, l = 1;
  std::uint32_t m = 0;
  std::uint64_t d = 0;
  std::uint64_t e = 0;
  bool f = false;
  std::uint32_t u = 1, v = 1;
  std::uint64_t ims = 0;  // used internal data memory size, in bits

  std::uint64_t w() const { return static_cast<std::uint64_t>(u) + v; }
  std::uint64_t dms() const { return (1ull << k) * l; }
  std::uint64_t ems() const { return dms() / 2; }  // k >= 1

  // Throws Error naming the violated condition: l,d,e,u,v >= 1, k <= 20,
  // l <= 32, and k >= 1 whenever f is set (the external half needs at
  // least two words).
  void validate() const;
};

enum class Regime : std::uint8_t {
  complete_mirror_ou,      // m = dms+k+1, d = 5, e = 6+w: mirror the whole
                           // data memory in the operating unit
  complete_register_file,  // m = ems+k, d = 5, e = 6+w, f, u = 2^k,
                           // v = 2^(k-1): hold the memory in the registers
  incomplete_budget,       // f, m+ims <= ems/2, d <= 2^l-w-1, e <= 2^(k-2)
  incomplete_counting,     // f, m+ims <= ems/2, d <= 2^(ems/2), and the
                           // thread bound stays within 2^ems
  unknown,
};

std::string_view regime_name(Regime r);

struct PremiseCheck {
  std::string rule;     // which verdict the premise belongs to
  std::string premise;  // the condition with its computed numbers
  bool holds = false;
};

struct RegimeVerdict {
  Regime regime = Regime::unknown;
  std::vector<PremiseCheck> checklist;

  bool complete() const {
    return regime == Regime::complete_mirror_ou ||
           regime == Regime::complete_register_file;
  }
  std::string to_text() const;
};

// Evaluates the four rules in a fixed order (mirror, register file, budget,
// counting) and returns the first whose premises all hold, else unknown.
// Every premise of every rule lands in the checklist with its truth value.
// The thread-count premise of the counting rule is evaluated through
// thread_count_bound as a sufficient condition and is labelled as such.
RegimeVerdict classify_regime(const RegimeParams& p);

// ---------------------------------------------------------------------------
// The thread-count chain
//
// The budget rule rests on the chain
//   ((d+w)*e^2 + 2)^e  <  ((d+w)*e^2 + e^2)^e  <=  2^ems
// whose second link needs the side conditions l >= 2k-4 and l >= 2. The
// report evaluates every link with exact integers; a failing link flags a
// parameter point where the chain does not carry.
// ---------------------------------------------------------------------------

struct ChainReport {
  std::uint32_t k = 0, l = 0;
  std::uint64_t d = 0, e = 0, w = 0;
  Count lower;   // ((d+w)*e^2 + 2)^e
  Count middle;  // ((d+w)*e^2 + e^2)^e
  Count budget;  // 2^ems
  bool strict_link = false;   // lower < middle
  bool budget_link = false;   // middle <= budget
  bool side_l_wide_enough = false;  // l >= 2k-4
  bool side_l_at_least_2 = false;   // l >= 2

  bool holds() const { return strict_link && budget_link; }
  std::string to_text() const;
};

// Requires k >= 1 (for ems) and d, w, e >= 1.
ChainReport thread_count_chain(std::uint32_t k, std::uint32_t l,
                               std::uint64_t d, std::uint64_t e,
                               std::uint64_t w);

}  // namespace mwb

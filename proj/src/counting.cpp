#include "mwb/counting.hpp"

#include <sstream>

#include "mwb/thread.hpp"

namespace mwb {

namespace {

// Guard rails for the two places a Count can be forced into plain binary:
// aligning a sum and expanding a power. Both caps are far above anything
// the bounds here produce when they hold, and far below anything worth
// allocating when they do not.
constexpr std::uint64_t kAlignBits = 1ull << 22;
constexpr std::uint64_t kPowerBits = 1ull << 25;

std::uint64_t bits_of(const BigInt& n) {
  return n.is_zero() ? 0 : boost::multiprecision::msb(n) + 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Count
// ---------------------------------------------------------------------------

Count::Count(BigInt n) {
  if (n < 0) throw Error("counts are nonnegative");
  if (n.is_zero()) return;
  const unsigned low = boost::multiprecision::lsb(n);
  mantissa_ = n >> low;
  shift_ = low;
}

Count Count::pow2(BigInt shift) {
  if (shift < 0) throw Error("counts are nonnegative");
  Count c;
  c.mantissa_ = 1;
  c.shift_ = std::move(shift);
  return c;
}

BigInt Count::bit_length() const {
  if (is_zero()) return 0;
  return shift_ + bits_of(mantissa_);
}

BigInt Count::value(std::uint64_t max_bits) const {
  if (is_zero()) return 0;
  if (bit_length() > max_bits) {
    throw Error("count needs " + bit_length().str() +
                " bits, beyond the cap of " + std::to_string(max_bits));
  }
  return mantissa_ << shift_.convert_to<std::uint64_t>();
}

std::string Count::str() const {
  if (is_zero()) return "0";
  if (bit_length() <= 4096) return value(4096).str();
  if (mantissa_ == 1) return "2^" + shift_.str();
  return mantissa_.str() + "*2^" + shift_.str();
}

Count Count::operator+(const Count& rhs) const {
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  const Count& high = shift_ >= rhs.shift_ ? *this : rhs;
  const Count& low = shift_ >= rhs.shift_ ? rhs : *this;
  const BigInt diff = high.shift_ - low.shift_;
  if (diff + bits_of(high.mantissa_) > kAlignBits) {
    throw Error("exact sum would need more than " +
                std::to_string(kAlignBits) + " mantissa bits");
  }
  Count out((high.mantissa_ << diff.convert_to<std::uint64_t>()) +
            low.mantissa_);
  out.shift_ += low.shift_;
  return out;
}

Count Count::operator*(const Count& rhs) const {
  if (is_zero() || rhs.is_zero()) return Count();
  Count out;
  out.mantissa_ = mantissa_ * rhs.mantissa_;  // odd * odd stays odd
  out.shift_ = shift_ + rhs.shift_;
  return out;
}

Count Count::pow(std::uint64_t exponent) const {
  if (exponent == 0) return Count(1);
  if (is_zero()) return Count();
  if (bits_of(mantissa_) * exponent > kPowerBits) {
    throw Error("exact power would need more than " +
                std::to_string(kPowerBits) + " mantissa bits");
  }
  Count out;
  out.mantissa_ = boost::multiprecision::pow(
      mantissa_, static_cast<unsigned>(exponent));
  out.shift_ = shift_ * exponent;
  return out;
}

bool Count::operator==(const Count& rhs) const {
  // The representation is canonical: odd mantissa, zero as zero/zero.
  return mantissa_ == rhs.mantissa_ && shift_ == rhs.shift_;
}

std::strong_ordering Count::operator<=>(const Count& rhs) const {
  if (is_zero() || rhs.is_zero()) {
    return (is_zero() ? 0 : 1) <=> (rhs.is_zero() ? 0 : 1);
  }
  const BigInt lb = bit_length(), rb = rhs.bit_length();
  if (lb != rb) return lb < rb ? std::strong_ordering::less
                               : std::strong_ordering::greater;
  // Equal bit lengths: the shift gap is at most the wider mantissa, so
  // aligning is cheap.
  const BigInt diff = shift_ - rhs.shift_;
  BigInt a = mantissa_, b = rhs.mantissa_;
  if (diff >= 0) {
    a <<= diff.convert_to<std::uint64_t>();
  } else {
    b <<= (-diff).convert_to<std::uint64_t>();
  }
  if (a == b) return std::strong_ordering::equal;
  return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
}

// ---------------------------------------------------------------------------
// The counting inequality
// ---------------------------------------------------------------------------

namespace {

// The shift values themselves contain a 2^ems factor, so keep ems small
// enough that even the exponent stays comfortably allocatable.
constexpr std::uint64_t kMaxEms = 1ull << 20;

void require_even_ems(std::uint64_t ems) {
  if (ems < 2) throw Error("ems must be at least 2");
  if (ems % 2 != 0) {
    throw Error("ems must be even for the exact form; use the symbolic "
                "predicate for odd ems");
  }
  if (ems > kMaxEms) throw Error("ems too large for exact evaluation");
}

}  // namespace

Count state_count(std::uint64_t bits) { return Count::pow2(bits); }

Count reachable_transformation_bound(std::uint64_t ems) {
  require_even_ems(ems);
  const BigInt pow_ems = BigInt(1) << ems;
  return Count::pow2(BigInt(ems / 2) * pow_ems + ems);
}

Count all_transformations(std::uint64_t ems) {
  require_even_ems(ems);
  const BigInt pow_ems = BigInt(1) << ems;
  return Count::pow2(BigInt(ems) * pow_ems);
}

bool counting_inequality_holds(std::uint64_t ems_num, std::uint64_t ems_den) {
  if (ems_den == 0) throw Error("ems denominator must be positive");
  if (ems_num == 0) throw Error("ems must be positive");
  // With x = 2^(ems/2) the inequality reduces to (x^2 - 2) * log2(x) > 0,
  // which holds exactly when x > sqrt(2), i.e. ems > 1.
  return ems_num > ems_den;
}

Count thread_count_bound(std::uint64_t d, std::uint64_t w, std::uint64_t e) {
  if (d < 1 || w < 1 || e < 1) throw Error("d, w and e must be at least 1");
  const BigInt base = BigInt(d + w) * e * e + 2;
  return Count(base).pow(e);
}

Count exact_thread_count(std::uint32_t alphabet_size, std::uint32_t e,
                         std::uint64_t cap) {
  if (e < 1) throw Error("e must be at least 1");
  // Raw assignment count before canonicity filtering: every one of s nodes
  // picks S, D, or an action with two successors.
  BigInt assignments = 0;
  for (std::uint32_t s = 1; s <= e; ++s) {
    const BigInt choices = BigInt(2) + BigInt(alphabet_size) * s * s;
    assignments += boost::multiprecision::pow(choices, s);
    if (assignments > cap) {
      throw StateSpaceTooLarge("thread enumeration would visit " +
                               assignments.str() + "+ assignments, cap is " +
                               std::to_string(cap));
    }
  }
  std::vector<ActionId> alphabet;
  for (std::uint32_t i = 0; i < alphabet_size; ++i) {
    alphabet.emplace_back("a" + std::to_string(i));
  }
  std::uint64_t count = 0;
  enumerate_threads(alphabet, e, [&](const ThreadGraph&) { ++count; });
  return Count(count);
}

// ---------------------------------------------------------------------------
// Regime classification
// ---------------------------------------------------------------------------

void RegimeParams::validate() const {
  if (l < 1 || l > 32) throw Error("word width l must be in [1, 32]");
  if (k > 20) throw Error("address width k must be at most 20");
  if (d < 1) throw Error("instruction budget d must be at least 1");
  if (e < 1) throw Error("residual budget e must be at least 1");
  if (u < 1 || v < 1) throw Error("register counts u and v must be at least 1");
  if (f && k < 1) throw Error("the external-half clause needs k >= 1");
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::complete_mirror_ou: return "complete_mirror_ou";
    case Regime::complete_register_file: return "complete_register_file";
    case Regime::incomplete_budget: return "incomplete_budget";
    case Regime::incomplete_counting: return "incomplete_counting";
    case Regime::unknown: return "unknown";
  }
  return "unknown";
}

std::string RegimeVerdict::to_text() const {
  std::ostringstream out;
  out << "verdict: " << regime_name(regime) << "\n";
  for (const PremiseCheck& c : checklist) {
    out << "  [" << (c.holds ? "x" : " ") << "] " << c.rule << ": "
        << c.premise << "\n";
  }
  return out.str();
}

RegimeVerdict classify_regime(const RegimeParams& p) {
  p.validate();
  RegimeVerdict verdict;

  const std::uint64_t w = p.w();
  const std::uint64_t dms = p.dms();

  struct Rule {
    Regime regime;
    std::string label;
    bool all = true;
  };

  auto check = [&](Rule& rule, bool holds, std::string premise) {
    verdict.checklist.push_back({rule.label, std::move(premise), holds});
    rule.all = rule.all && holds;
  };
  auto num = [](const auto& n) {
    std::ostringstream s;
    s << n;
    return s.str();
  };

  // Complete: mirror the whole data memory into the operating unit.
  Rule mirror{Regime::complete_mirror_ou, "mirror operating unit"};
  check(mirror, p.m == dms + p.k + 1,
        "m = " + num(p.m) + " equals dms+k+1 = " + num(dms + p.k + 1));
  check(mirror, p.d == 5, "d = " + num(p.d) + " equals 5");
  check(mirror, p.e == 6 + w,
        "e = " + num(p.e) + " equals 6+w = " + num(6 + w));

  // Complete: hold the data memory in the load registers.
  Rule reg_file{Regime::complete_register_file, "register file"};
  check(reg_file, p.k >= 1, "k = " + num(p.k) + " is at least 1");
  check(reg_file, p.f, "f is set (external half)");
  if (p.k >= 1) {
    const std::uint64_t ems = p.ems();
    check(reg_file, p.u == (1u << p.k),
          "u = " + num(p.u) + " equals 2^k = " + num(1u << p.k));
    check(reg_file, p.v == (1u << (p.k - 1)),
          "v = " + num(p.v) + " equals 2^(k-1) = " + num(1u << (p.k - 1)));
    check(reg_file, p.m == ems + p.k,
          "m = " + num(p.m) + " equals ems+k = " + num(ems + p.k));
  } else {
    check(reg_file, false, "u equals 2^k (not evaluated: needs k >= 1)");
    check(reg_file, false, "v equals 2^(k-1) (not evaluated: needs k >= 1)");
    check(reg_file, false, "m equals ems+k (not evaluated: needs k >= 1)");
  }
  check(reg_file, p.d == 5, "d = " + num(p.d) + " equals 5");
  check(reg_file, p.e == 6 + w,
        "e = " + num(p.e) + " equals 6+w = " + num(6 + w));

  // Incomplete: the instruction and state budgets are too small.
  Rule budget{Regime::incomplete_budget, "instruction and state budgets"};
  check(budget, p.k > 2, "k = " + num(p.k) + " exceeds 2");
  check(budget, p.l > 1, "l = " + num(p.l) + " exceeds 1");
  check(budget, p.m >= 1, "m = " + num(p.m) + " is at least 1");
  check(budget, p.e > 1, "e = " + num(p.e) + " exceeds 1");
  check(budget, p.f, "f is set (external half)");
  if (p.k > 2) {
    const std::uint64_t ems = p.ems();
    const std::uint64_t ems_half = ems / 2;  // k > 2 keeps this integral
    check(budget, p.m + p.ims <= ems_half,
          "m + ims = " + num(p.m + p.ims) + " is at most ems/2 = " +
              num(ems_half));
    const std::int64_t d_cap =
        static_cast<std::int64_t>(1ll << p.l) - static_cast<std::int64_t>(w) - 1;
    check(budget, d_cap >= 0 && p.d <= static_cast<std::uint64_t>(d_cap),
          "d = " + num(p.d) + " is at most 2^l-w-1 = " + num(d_cap));
    check(budget, p.e <= (1ull << (p.k - 2)),
          "e = " + num(p.e) + " is at most 2^(k-2) = " +
              num(1ull << (p.k - 2)));
  } else {
    check(budget, false, "m + ims <= ems/2 (not evaluated: needs k > 2)");
    check(budget, false, "d <= 2^l-w-1 (not evaluated: needs k > 2)");
    check(budget, false, "e <= 2^(k-2) (not evaluated: needs k > 2)");
  }

  // Incomplete: the operating unit is too small to reach every
  // transformation, by counting.
  Rule counting{Regime::incomplete_counting, "operating unit counting"};
  check(counting, p.k > 1, "k = " + num(p.k) + " exceeds 1");
  check(counting, p.m >= 1, "m = " + num(p.m) + " is at least 1");
  check(counting, p.f, "f is set (external half)");
  if (p.k > 1) {
    const std::uint64_t ems = p.ems();
    const std::uint64_t ems_half = ems / 2;  // k > 1 keeps this integral
    check(counting, p.m + p.ims <= ems_half,
          "m + ims = " + num(p.m + p.ims) + " is at most ems/2 = " +
              num(ems_half));
    const Count d_cap = Count::pow2(ems_half);
    check(counting, Count(p.d) <= d_cap,
          "d = " + num(p.d) + " is at most 2^(ems/2) = " + d_cap.str());
    // Sufficient check for the thread-count premise. A bound too large to
    // expand certainly exceeds 2^ems, whose bit length is capped well
    // below the expansion guard.
    bool threads_ok = false;
    std::string bound_text;
    try {
      const Count bound = thread_count_bound(p.d, w, p.e);
      threads_ok = bound <= Count::pow2(ems);
      bound_text = bound.str();
    } catch (const Error&) {
      bound_text = "beyond the expansion cap";
    }
    check(counting, threads_ok,
          "thread_count_bound(d, w, e) = " + bound_text +
              " is at most 2^ems = " + Count::pow2(ems).str() +
              " (sufficient condition)");
  } else {
    check(counting, false, "m + ims <= ems/2 (not evaluated: needs k > 1)");
    check(counting, false, "d <= 2^(ems/2) (not evaluated: needs k > 1)");
    check(counting, false,
          "thread count within 2^ems (not evaluated: needs k > 1)");
  }

  for (const Rule* rule : {&mirror, &reg_file, &budget, &counting}) {
    if (rule->all) {
      verdict.regime = rule->regime;
      return verdict;
    }
  }
  verdict.regime = Regime::unknown;
  return verdict;
}

// ---------------------------------------------------------------------------
// The thread-count chain
// ---------------------------------------------------------------------------

std::string ChainReport::to_text() const {
  std::ostringstream out;
  const std::uint64_t ems = (1ull << (k - 1)) * l;
  out << "chain at k=" << k << " l=" << l << " d=" << d << " e=" << e
      << " w=" << w << " (ems = " << ems << ")\n";
  out << "  ((d+w)*e^2+2)^e = " << lower.str() << "\n";
  out << "  ((d+w)*e^2+e^2)^e = " << middle.str() << "\n";
  out << "  2^ems = " << budget.str() << "\n";
  out << "  [" << (strict_link ? "x" : " ") << "] strict link: "
      << lower.str() << " < " << middle.str() << "\n";
  out << "  [" << (budget_link ? "x" : " ") << "] budget link: "
      << middle.str() << " <= " << budget.str() << "\n";
  out << "  [" << (side_l_wide_enough ? "x" : " ")
      << "] side condition: l >= 2k-4\n";
  out << "  [" << (side_l_at_least_2 ? "x" : " ")
      << "] side condition: l >= 2\n";
  out << (holds() ? "chain holds" : "chain broken") << "\n";
  return out.str();
}

ChainReport thread_count_chain(std::uint32_t k, std::uint32_t l,
                               std::uint64_t d, std::uint64_t e,
                               std::uint64_t w) {
  if (k < 1 || k > 20) throw Error("address width k must be in [1, 20]");
  if (l < 1 || l > 32) throw Error("word width l must be in [1, 32]");
  if (d < 1 || e < 1 || w < 1) throw Error("d, e and w must be at least 1");
  ChainReport r;
  r.k = k;
  r.l = l;
  r.d = d;
  r.e = e;
  r.w = w;
  const std::uint64_t ems = (1ull << (k - 1)) * l;
  r.lower = thread_count_bound(d, w, e);
  r.middle = Count(BigInt(d + w) * e * e + BigInt(e) * e).pow(e);
  r.budget = Count::pow2(ems);
  r.strict_link = r.lower < r.middle;
  r.budget_link = r.middle <= r.budget;
  r.side_l_wide_enough =
      static_cast<std::int64_t>(l) >= 2 * static_cast<std::int64_t>(k) - 4;
  r.side_l_at_least_2 = l >= 2;
  return r;
}

}  // namespace mwb

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normeq/errors.hpp"

namespace normeq {

// Exact decimal label of a spectral atom. Equality is string equality after
// normalization (no trailing zeros, no "-0"); ordering is numeric.
class AtomLabel {
 public:
  AtomLabel(const std::string& re, const std::string& im);

  // Rounds both components to 6 decimal digits; the canonical label grid.
  static AtomLabel from_rounded(std::complex<double> value);

  const std::string& re() const noexcept { return re_; }
  const std::string& im() const noexcept { return im_; }

  bool operator==(const AtomLabel& other) const noexcept {
    return re_ == other.re_ && im_ == other.im_;
  }
  bool operator!=(const AtomLabel& other) const noexcept { return !(*this == other); }
  bool operator<(const AtomLabel& other) const noexcept;

  std::string to_string() const;  // "(re, im)"

 private:
  std::string re_;
  std::string im_;
};

// Normalizes a plain decimal literal; throws parse_error on anything else.
std::string normalize_decimal(const std::string& text);

// Numeric comparison of two normalized decimals without float conversion.
int compare_decimal(const std::string& a, const std::string& b);

// Extended multiplicity: finite n, aleph0, or an abstract uncountable
// cardinal symbol card:k ordered by k. Addition is componentwise on finite
// values and max-absorption as soon as one side is infinite.
class ExtMult {
 public:
  enum class Kind { finite, aleph0, card };

  static ExtMult finite(std::uint64_t n) { return ExtMult(Kind::finite, n); }
  static ExtMult aleph0() { return ExtMult(Kind::aleph0, 0); }
  static ExtMult card(std::uint64_t k);

  Kind kind() const noexcept { return kind_; }
  std::uint64_t finite_value() const;
  std::uint64_t card_index() const;
  bool is_zero() const noexcept { return kind_ == Kind::finite && value_ == 0; }

  bool operator==(const ExtMult& o) const noexcept {
    return kind_ == o.kind_ && value_ == o.value_;
  }
  bool operator!=(const ExtMult& o) const noexcept { return !(*this == o); }
  bool operator<(const ExtMult& o) const noexcept;
  bool operator<=(const ExtMult& o) const noexcept { return *this < o || *this == o; }

  ExtMult operator+(const ExtMult& o) const;

  std::string to_string() const;           // "3" | "aleph0" | "card:1"
  static ExtMult parse(const std::string& text);

 private:
  ExtMult(Kind kind, std::uint64_t value) : kind_(kind), value_(value) {}
  Kind kind_;
  std::uint64_t value_;
};

// The symbolic unitary invariant at atomic measures: finite support of
// labels with an extended multiplicity per atom. Zero multiplicities are
// never stored.
class AtomicSpectralType {
 public:
  AtomicSpectralType() = default;

  void set(const AtomLabel& atom, const ExtMult& mult);
  std::optional<ExtMult> multiplicity(const AtomLabel& atom) const;

  const std::map<AtomLabel, ExtMult>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }

  bool operator==(const AtomicSpectralType& o) const { return atoms_ == o.atoms_; }
  bool operator!=(const AtomicSpectralType& o) const { return !(*this == o); }

 private:
  std::map<AtomLabel, ExtMult> atoms_;
};

// Same support and the same multiplicity at every atom.
bool equivalent(const AtomicSpectralType& a, const AtomicSpectralType& b);

// support(sub) within support(sup) and pointwise multiplicity <=.
bool suboperator_consistent(const AtomicSpectralType& sub, const AtomicSpectralType& sup);

AtomicSpectralType direct_sum(const AtomicSpectralType& a, const AtomicSpectralType& b);

struct SqueezeRow {
  AtomLabel atom;
  ExtMult w;
  ExtMult v;
  ExtMult h;
};

struct SandwichVerdict {
  enum class Status { concluded, premise_violation };

  Status status;
  bool conclusion = false;           // valid when concluded
  std::vector<SqueezeRow> trace;     // per-atom squeeze, when concluded
  std::string failed_premise;        // when violated
  std::optional<AtomLabel> violation_atom;
};

// Checks the premises w <= v <= h (as suboperators) and h == w, and when
// they hold concludes h == v with the per-atom inequality chain as a trace.
SandwichVerdict sandwich(const AtomicSpectralType& h, const AtomicSpectralType& v,
                         const AtomicSpectralType& w);

}  // namespace normeq

#include "normeq/invariant.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace normeq {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

std::string normalize_decimal(const std::string& text) {
  std::string t = text;
  bool negative = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    negative = t[0] == '-';
    t.erase(t.begin());
  }
  std::string int_part = t;
  std::string frac_part;
  if (const auto dot = t.find('.'); dot != std::string::npos) {
    int_part = t.substr(0, dot);
    frac_part = t.substr(dot + 1);
    if (frac_part.empty()) {
      fail(ErrorKind::parse_error, "malformed decimal literal: '" + text + "'");
    }
  }
  if (!all_digits(int_part) || (!frac_part.empty() && !all_digits(frac_part))) {
    fail(ErrorKind::parse_error, "malformed decimal literal: '" + text + "'");
  }

  int_part.erase(0, std::min(int_part.find_first_not_of('0'), int_part.size() - 1));
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();

  std::string out = int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  if (out == "0") return out;  // never "-0"
  return negative ? "-" + out : out;
}

int compare_decimal(const std::string& a, const std::string& b) {
  if (a == b) return 0;
  const bool a_neg = a[0] == '-';
  const bool b_neg = b[0] == '-';
  if (a_neg != b_neg) return a_neg ? -1 : 1;

  const auto split = [](const std::string& s) {
    std::string body = s[0] == '-' ? s.substr(1) : s;
    const auto dot = body.find('.');
    if (dot == std::string::npos) return std::pair<std::string, std::string>{body, ""};
    return std::pair<std::string, std::string>{body.substr(0, dot), body.substr(dot + 1)};
  };
  auto [ai, af] = split(a);
  auto [bi, bf] = split(b);

  int mag = 0;
  if (ai.size() != bi.size()) {
    mag = ai.size() < bi.size() ? -1 : 1;
  } else if (ai != bi) {
    mag = ai < bi ? -1 : 1;
  } else {
    // Same integer part; compare fractions padded with implicit zeros.
    const std::size_t width = std::max(af.size(), bf.size());
    af.resize(width, '0');
    bf.resize(width, '0');
    mag = af == bf ? 0 : (af < bf ? -1 : 1);
  }
  return (a_neg && b_neg) ? -mag : mag;
}

AtomLabel::AtomLabel(const std::string& re, const std::string& im)
    : re_(normalize_decimal(re)), im_(normalize_decimal(im)) {}

AtomLabel AtomLabel::from_rounded(std::complex<double> value) {
  const auto render = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return std::string(buf);
  };
  return AtomLabel(render(value.real()), render(value.imag()));
}

bool AtomLabel::operator<(const AtomLabel& other) const noexcept {
  const int re_cmp = compare_decimal(re_, other.re_);
  if (re_cmp != 0) return re_cmp < 0;
  return compare_decimal(im_, other.im_) < 0;
}

std::string AtomLabel::to_string() const { return "(" + re_ + ", " + im_ + ")"; }

ExtMult ExtMult::card(std::uint64_t k) {
  if (k == 0) fail(ErrorKind::invalid_argument, "cardinal symbols are indexed from 1");
  return ExtMult(Kind::card, k);
}

std::uint64_t ExtMult::finite_value() const {
  if (kind_ != Kind::finite) {
    fail(ErrorKind::invalid_argument, "multiplicity " + to_string() + " is not finite");
  }
  return value_;
}

std::uint64_t ExtMult::card_index() const {
  if (kind_ != Kind::card) {
    fail(ErrorKind::invalid_argument, "multiplicity " + to_string() + " is not a cardinal symbol");
  }
  return value_;
}

bool ExtMult::operator<(const ExtMult& o) const noexcept {
  if (kind_ != o.kind_) {
    return static_cast<int>(kind_) < static_cast<int>(o.kind_);
  }
  return value_ < o.value_;
}

ExtMult ExtMult::operator+(const ExtMult& o) const {
  if (kind_ == Kind::finite && o.kind_ == Kind::finite) {
    return finite(value_ + o.value_);
  }
  return std::max(*this, o);
}

std::string ExtMult::to_string() const {
  switch (kind_) {
    case Kind::finite: return std::to_string(value_);
    case Kind::aleph0: return "aleph0";
    case Kind::card: return "card:" + std::to_string(value_);
  }
  return "";
}

ExtMult ExtMult::parse(const std::string& text) {
  if (text == "aleph0") return aleph0();
  if (text.rfind("card:", 0) == 0) {
    const std::string idx = text.substr(5);
    if (!all_digits(idx)) fail(ErrorKind::parse_error, "malformed multiplicity: '" + text + "'");
    return card(std::stoull(idx));
  }
  if (!all_digits(text)) fail(ErrorKind::parse_error, "malformed multiplicity: '" + text + "'");
  return finite(std::stoull(text));
}

void AtomicSpectralType::set(const AtomLabel& atom, const ExtMult& mult) {
  if (mult.is_zero()) {
    atoms_.erase(atom);
  } else {
    atoms_.insert_or_assign(atom, mult);
  }
}

std::optional<ExtMult> AtomicSpectralType::multiplicity(const AtomLabel& atom) const {
  const auto it = atoms_.find(atom);
  if (it == atoms_.end()) return std::nullopt;
  return it->second;
}

bool equivalent(const AtomicSpectralType& a, const AtomicSpectralType& b) {
  return a == b;
}

bool suboperator_consistent(const AtomicSpectralType& sub, const AtomicSpectralType& sup) {
  for (const auto& [atom, mult] : sub.atoms()) {
    const auto sup_mult = sup.multiplicity(atom);
    if (!sup_mult || !(mult <= *sup_mult)) return false;
  }
  return true;
}

AtomicSpectralType direct_sum(const AtomicSpectralType& a, const AtomicSpectralType& b) {
  AtomicSpectralType out = a;
  for (const auto& [atom, mult] : b.atoms()) {
    const auto existing = out.multiplicity(atom);
    out.set(atom, existing ? *existing + mult : mult);
  }
  return out;
}

namespace {

// First atom witnessing failure of suboperator_consistent(sub, sup).
std::optional<AtomLabel> first_sub_violation(const AtomicSpectralType& sub,
                                             const AtomicSpectralType& sup) {
  for (const auto& [atom, mult] : sub.atoms()) {
    const auto sup_mult = sup.multiplicity(atom);
    if (!sup_mult || !(mult <= *sup_mult)) return atom;
  }
  return std::nullopt;
}

// First atom (in canonical order) at which the two maps differ.
std::optional<AtomLabel> first_equiv_violation(const AtomicSpectralType& a,
                                               const AtomicSpectralType& b) {
  auto ia = a.atoms().begin();
  auto ib = b.atoms().begin();
  while (ia != a.atoms().end() || ib != b.atoms().end()) {
    if (ia == a.atoms().end()) return ib->first;
    if (ib == b.atoms().end()) return ia->first;
    if (ia->first != ib->first) return std::min(ia->first, ib->first);
    if (ia->second != ib->second) return ia->first;
    ++ia;
    ++ib;
  }
  return std::nullopt;
}

}  // namespace

SandwichVerdict sandwich(const AtomicSpectralType& h, const AtomicSpectralType& v,
                         const AtomicSpectralType& w) {
  SandwichVerdict verdict;
  if (auto atom = first_sub_violation(w, v)) {
    verdict.status = SandwichVerdict::Status::premise_violation;
    verdict.failed_premise = "suboperator(w,v)";
    verdict.violation_atom = std::move(atom);
    return verdict;
  }
  if (auto atom = first_sub_violation(v, h)) {
    verdict.status = SandwichVerdict::Status::premise_violation;
    verdict.failed_premise = "suboperator(v,h)";
    verdict.violation_atom = std::move(atom);
    return verdict;
  }
  if (auto atom = first_equiv_violation(h, w)) {
    verdict.status = SandwichVerdict::Status::premise_violation;
    verdict.failed_premise = "equivalent(h,w)";
    verdict.violation_atom = std::move(atom);
    return verdict;
  }

  verdict.status = SandwichVerdict::Status::concluded;
  verdict.conclusion = equivalent(h, v);
  verdict.trace.reserve(h.atoms().size());
  for (const auto& [atom, h_mult] : h.atoms()) {
    // Premises hold, so the atom is present in all three supports.
    verdict.trace.push_back(SqueezeRow{atom, *w.multiplicity(atom),
                                       *v.multiplicity(atom), h_mult});
  }
  return verdict;
}

}  // namespace normeq

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecgen/endo.hpp"

namespace ecgen {

// Observable f = x^i y^j with j in {0, 1}; the pole divisor is supported
// at infinity with degree 2i + 3j.
struct Observable {
  int i = 1;
  int j = 0;

  int pole_degree() const { return 2 * i + 3 * j; }
  static Observable X() { return {1, 0}; }
  static Observable Y() { return {0, 1}; }
  static Observable monomial(int i, int j);
  static Observable parse(const std::string& text);
  std::string name() const;

  // Value at an affine point, in the point's field.
  Fe eval(const FieldSpec& F, const Point& P) const;
};

struct SeqEntry {
  bool pole = false;  // P_n = infinity; consumers apply their convention
  Fe value{};
};

struct Sequence {
  const FieldSpec* field = nullptr;
  std::vector<SeqEntry> s;

  int64_t size() const { return static_cast<int64_t>(s.size()); }
};

// The iterated endomorphism sequence P_n = tau^n P. Single-owner mutable
// iterator; copying yields an independent stream.
class Generator {
 public:
  Generator(const EndRing& ring, Endomorphism tau, Point P);

  const EndRing& ring() const { return *ring_; }
  const Curve& curve() const { return ring_->curve(); }
  const Endomorphism& tau() const { return tau_; }
  const AnnihilatorIdeal& annihilator() const { return ann_; }
  bool purely_periodic() const { return periodic_; }
  // Period T = multiplicative order of tau mod the annihilator; 0 when the
  // sequence is only ultimately periodic.
  int64_t period() const { return T_; }
  int64_t index() const { return n_; }
  const Point& current() const { return cur_; }

  // Advance to P_{n+1} and return it.
  Point next();
  // Random access P_n through residue exponentiation in O/l, independent
  // of the step-by-step path.
  Point point_at(int64_t n) const;

  // Emit s_{n+1} .. s_{n+count} = f(P_{n+1}) .. advancing the state.
  Sequence emit(const Observable& f, int64_t count);

 private:
  const EndRing* ring_;
  Endomorphism tau_;
  Point P0_;
  AnnihilatorIdeal ann_;
  Point W0_;             // omega(P0)
  OrderElement tau_w_;   // tau in the omega basis
  bool lift_ok_ = true;  // per-step modular lifting is available
  bool periodic_ = false;
  int64_t T_ = 0;
  int64_t n_ = 0;
  Point cur_;

  Point materialize(OrderElement coords) const;
};

}  // namespace ecgen

#include "ecgen/search.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ecgen {

std::vector<std::pair<int64_t, int>> prime_powers(int64_t lo, int64_t hi) {
  std::vector<std::pair<int64_t, int>> out;
  for (int64_t p = 2; p <= hi; ++p) {
    if (!is_prime_i64(p)) continue;
    int64_t q = p;
    int k = 1;
    while (q <= hi) {
      if (q >= lo) out.emplace_back(p, k);
      if (q > hi / p) break;
      q *= p;
      ++k;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int64_t qa = 1, qb = 1;
    for (int i = 0; i < a.second; ++i) qa *= a.first;
    for (int i = 0; i < b.second; ++i) qb *= b.first;
    return qa < qb;
  });
  return out;
}

std::string SearchHit::describe() const {
  std::ostringstream s;
  s << "q=" << p;
  if (k > 1) s << "^" << k;
  s << " t=" << trace << " D_K=" << D_K << " v=" << v << " u=" << u
    << " ell=" << ell << " T=" << T << " n(l)=" << norm_ann << " " << note;
  return s.str();
}

namespace {

SearchHit base_hit(const Curve& E, const EndRing& ring) {
  const FieldSpec& F = E.field();
  SearchHit h;
  h.p = F.p();
  h.k = F.k();
  h.modulus = F.modulus();
  for (const Fe* a : {&E.a1(), &E.a2(), &E.a3(), &E.a4(), &E.a6()})
    h.coeffs.push_back(F.coords(*a));
  h.trace = E.trace();
  h.v = E.v();
  h.u = ring.conductor();
  h.D_K = E.D_K();
  h.D_E = ring.discriminant();
  return h;
}

void set_point(SearchHit& h, const FieldSpec& F, const Point& P) {
  h.Px = F.coords(P.x);
  h.Py = F.coords(P.y);
}

// first non-infinite point of order exactly ell in the base field
std::optional<Point> point_of_order(const Extension& X1, int64_t ell) {
  for (const auto& P : X1.torsion_points(ell)) {
    if (P.inf) continue;
    if (X1.point_order(P) == ell) return P;
  }
  return std::nullopt;
}

bool try_curve(const SearchCriteria& c, const Curve& E,
               std::vector<SearchHit>& hits) {
  int64_t ell = c.ell;
  int64_t N = E.n_points();
  const Extension& X1 = E.over(1);

  switch (c.want) {
    case SearchWant::FullTorsion: {
      if (ell < 2 || E.field().p() % ell == 0) return false;
      if (N % (ell * ell) != 0) return false;
      TorsionShape shape = rational_torsion(E, ell, 1);
      if (shape.d1 % ell != 0 || shape.d2 % ell != 0) return false;
      EndRing ring = determine_end_ring(E, c.budget);
      SearchHit h = base_hit(E, ring);
      auto P = point_of_order(X1, ell);
      if (!P) return false;
      set_point(h, E.field(), *P);
      h.ell = ell;
      h.note = "full-torsion";
      hits.push_back(h);
      return true;
    }
    case SearchWant::Split: {
      if (!is_prime_i64(ell) || N % ell != 0) return false;
      EndRing ring = determine_end_ring(E, c.budget);
      if (!ring.certified()) return false;
      if (ring.conductor() % ell == 0 || E.v() % ell == 0) return false;
      if (CMOrder::kronecker(E.D_K(), ell) != 1) return false;
      auto P = point_of_order(X1, ell);
      if (!P) return false;
      AnnihilatorIdeal ann = ring.annihilator(*P);
      if (ann.ideal.norm() != ell) return false;  // split prime annihilator
      SearchHit h = base_hit(E, ring);
      set_point(h, E.field(), *P);
      h.ell = ell;
      h.norm_ann = ann.ideal.norm();
      h.note = "split";
      hits.push_back(h);
      return true;
    }
    case SearchWant::Inert:
    case SearchWant::MaxPeriod: {
      if (!is_prime_i64(ell)) return false;
      if (E.field().p() % ell == 0) return false;
      if (N % (ell * ell) != 0) return false;
      if (E.v() % ell != 0) return false;
      if (CMOrder::kronecker(E.D_K(), ell) != -1) return false;
      TorsionShape shape = rational_torsion(E, ell, 1);
      if (shape.d1 % ell != 0 || shape.d2 % ell != 0) return false;
      EndRing ring = determine_end_ring(E, c.budget);
      if (!ring.certified() || ring.conductor() % ell == 0) return false;
      auto P = point_of_order(X1, ell);
      if (!P) return false;
      const CMOrder& O = ring.order();
      AnnihilatorIdeal ann;
      try {
        ann = ring.annihilator(*P);
      } catch (const ScaleLimit&) {
        return false;  // division point out of reach here
      }
      if (!(ann.ideal == O.scalar_ideal(ell))) return false;

      SearchHit h = base_hit(E, ring);
      set_point(h, E.field(), *P);
      h.ell = ell;
      h.norm_ann = ann.ideal.norm();
      if (c.want == SearchWant::Inert) {
        h.note = "inert";
        hits.push_back(h);
        return true;
      }
      // a residue generating (O/l)^* of order ell^2 - 1, lifted to a map
      // coprime to the conductor
      int64_t target = ell * ell - 1;
      for (const auto& r : O.invertible_residues(ann.ideal)) {
        if (O.multiplicative_order_mod(r, ann.ideal) != target) continue;
        for (const OrderElement& lift :
             {r, O.add(r, {ell, 0}), O.add(r, {0, ell}), O.add(r, {ell, ell})}) {
          Endomorphism tau = ring.from_order_element(lift);
          if (!ring.coprime_to_conductor(tau)) continue;
          int64_t T1 = ring.multiplicative_order(tau, ann);
          if (T1 != target) continue;
          int64_t T2;
          try {
            T2 = ring.multiplicative_order_points(tau, ann);
          } catch (const ScaleLimit&) {
            continue;
          }
          if (T2 != T1) continue;
          h.tau_xn = tau.x.num;
          h.tau_xd = tau.x.den;
          h.tau_yn = tau.y.num;
          h.tau_yd = tau.y.den;
          h.T = T1;
          h.note = "max-period";
          hits.push_back(h);
          return true;
        }
      }
      return false;
    }
  }
  return false;
}

}  // namespace

std::vector<SearchHit> search_instances(const SearchCriteria& c) {
  if (c.q_max > 500) throw ScaleLimit("search: q budget is 500");
  std::vector<SearchHit> hits;
  for (auto [p, k] : prime_powers(std::max<int64_t>(2, c.q_min), c.q_max)) {
    if (k > kMaxFieldDegree) continue;
    FieldSpec F = FieldSpec::with_default_modulus(p, k);
    int64_t q = F.q();
    auto consider = [&](int64_t i1, int64_t i2, int64_t i3, int64_t i4,
                        int64_t i6) {
      if (hits.size() >= c.max_results) return;
      try {
        Curve E(F, F.from_index(i1), F.from_index(i2), F.from_index(i3),
                F.from_index(i4), F.from_index(i6));
        try_curve(c, E, hits);
      } catch (const InvalidConfiguration&) {
      } catch (const SupersingularCurve&) {
      } catch (const ScaleLimit&) {
      }
    };
    if (q <= c.exhaustive_cap) {
      for (int64_t i1 = 0; i1 < q && hits.size() < c.max_results; ++i1)
        for (int64_t i2 = 0; i2 < q && hits.size() < c.max_results; ++i2)
          for (int64_t i3 = 0; i3 < q && hits.size() < c.max_results; ++i3)
            for (int64_t i4 = 0; i4 < q && hits.size() < c.max_results; ++i4)
              for (int64_t i6 = 0; i6 < q && hits.size() < c.max_results; ++i6)
                consider(i1, i2, i3, i4, i6);
    } else {
      std::mt19937_64 rng(c.seed ^ (0x9e3779b97f4a7c15ull * (uint64_t)q));
      for (int64_t n = 0; n < c.per_q_sample && hits.size() < c.max_results; ++n) {
        auto d = [&] { return static_cast<int64_t>(rng() % (uint64_t)q); };
        consider(d(), d(), d(), d(), d());
      }
    }
    if (hits.size() >= c.max_results) break;
  }
  return hits;
}

RebuiltInstance rebuild(const SearchHit& hit, int64_t budget) {
  FieldSpec F(hit.p, hit.k, hit.modulus);
  auto curve = std::make_unique<Curve>(
      F, F.from_coords(hit.coeffs.at(0)), F.from_coords(hit.coeffs.at(1)),
      F.from_coords(hit.coeffs.at(2)), F.from_coords(hit.coeffs.at(3)),
      F.from_coords(hit.coeffs.at(4)));
  EndRing ring = determine_end_ring(*curve, budget);
  const Extension& X1 = curve->over(1);
  Point P = X1.make(F.from_coords(hit.Px), F.from_coords(hit.Py));
  Endomorphism tau = ring.make(Rational::of(hit.tau_xn, hit.tau_xd),
                               Rational::of(hit.tau_yn, hit.tau_yd));
  return {std::move(curve), std::move(ring), P, tau};
}

}  // namespace ecgen

#include "avass/upset.hpp"

#include <algorithm>

#include "avass/errors.hpp"

namespace avass {

bool UPSet::Ray::operator<(const Ray& o) const {
  if (base != o.base) return base < o.base;
  if (period != o.period) return period < o.period;
  return up < o.up;
}

bool UPSet::Line::operator<(const Line& o) const {
  if (period != o.period) return period < o.period;
  return base < o.base;
}

UPSet UPSet::singleton(const Int& n) {
  UPSet s;
  s.points_.insert(n);
  return s;
}

UPSet UPSet::finite(const std::set<Int>& points) {
  UPSet s;
  s.points_ = points;
  return s;
}

UPSet UPSet::ray(const Int& base, const Int& period, bool up) {
  if (period <= 0) throw precondition_error("UPSet ray: period must be positive");
  UPSet s;
  s.rays_.push_back(Ray{base, period, up});
  s.normalize();
  return s;
}

UPSet UPSet::line(const Int& base, const Int& period) {
  if (period <= 0) throw precondition_error("UPSet line: period must be positive");
  UPSet s;
  s.lines_.push_back(Line{base, period});
  s.normalize();
  return s;
}

namespace {

Int mod_reduce(const Int& x, const Int& p) {
  Int r = x % p;
  if (r < 0) r += p;
  return r;
}

bool divides(const Int& a, const Int& b) { return a != 0 && b % a == 0; }

}  // namespace

bool UPSet::member(const Int& n) const {
  if (points_.count(n)) return true;
  for (const Ray& r : rays_) {
    if (r.up) {
      if (n >= r.base && divides(r.period, n - r.base)) return true;
    } else {
      if (n <= r.base && divides(r.period, r.base - n)) return true;
    }
  }
  for (const Line& l : lines_)
    if (mod_reduce(n, l.period) == l.base) return true;
  return false;
}

void UPSet::normalize() {
  for (Line& l : lines_) l.base = mod_reduce(l.base, l.period);
  std::sort(lines_.begin(), lines_.end());
  lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());

  bool changed = true;
  while (changed) {
    changed = false;

    // line subsumed by coarser line
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      for (std::size_t j = 0; j < lines_.size(); ++j) {
        if (i == j) continue;
        const Line& fine = lines_[i];
        const Line& coarse = lines_[j];
        if (divides(coarse.period, fine.period) &&
            mod_reduce(fine.base, coarse.period) == coarse.base) {
          lines_.erase(lines_.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
    if (changed) continue;

    // ray subsumed by a line
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      const Ray& r = rays_[i];
      bool drop = false;
      for (const Line& l : lines_)
        if (divides(l.period, r.period) && mod_reduce(r.base, l.period) == l.base) {
          drop = true;
          break;
        }
      if (drop) {
        rays_.erase(rays_.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
    if (changed) continue;

    // ray subsumed by a wider ray of the same direction
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      bool drop = false;
      for (std::size_t j = 0; j < rays_.size(); ++j) {
        if (i == j) continue;
        const Ray& a = rays_[i];
        const Ray& b = rays_[j];
        if (a.up != b.up || !divides(b.period, a.period)) continue;
        if (a.up ? (a.base >= b.base) : (a.base <= b.base)) {
          Int diff = a.up ? a.base - b.base : b.base - a.base;
          if (divides(b.period, diff)) {
            drop = true;
            break;
          }
        }
      }
      if (drop) {
        rays_.erase(rays_.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
    if (changed) continue;

    // overlapping +/- ray pair over one residue class closes into a line
    for (std::size_t i = 0; i < rays_.size() && !changed; ++i) {
      for (std::size_t j = 0; j < rays_.size() && !changed; ++j) {
        const Ray& upr = rays_[i];
        const Ray& dnr = rays_[j];
        if (!upr.up || dnr.up || upr.period != dnr.period) continue;
        if (upr.base <= dnr.base && divides(upr.period, dnr.base - upr.base)) {
          Line l{mod_reduce(upr.base, upr.period), upr.period};
          std::size_t hi = std::max(i, j), lo = std::min(i, j);
          rays_.erase(rays_.begin() + static_cast<long>(hi));
          rays_.erase(rays_.begin() + static_cast<long>(lo));
          lines_.push_back(l);
          std::sort(lines_.begin(), lines_.end());
          lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());
          changed = true;
        }
      }
    }
    if (changed) continue;

    // rays absorb adjacent points at their open end
    for (const Int& p : points_) {
      for (Ray& r : rays_) {
        if (r.up ? (r.base - r.period == p) : (r.base + r.period == p)) {
          r.base = p;
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
    if (changed) {
      // re-run; the absorbed point is removed below
    }

    // points already covered by rays or lines
    for (auto it = points_.begin(); it != points_.end();) {
      bool covered = false;
      for (const Ray& r : rays_)
        if (r.up ? (*it >= r.base && divides(r.period, *it - r.base))
                 : (*it <= r.base && divides(r.period, r.base - *it))) {
          covered = true;
          break;
        }
      if (!covered)
        for (const Line& l : lines_)
          if (mod_reduce(*it, l.period) == l.base) {
            covered = true;
            break;
          }
      if (covered) {
        it = points_.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  std::sort(rays_.begin(), rays_.end());
  rays_.erase(std::unique(rays_.begin(), rays_.end()), rays_.end());
  std::sort(lines_.begin(), lines_.end());
  lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());
}

std::pair<Int, Int> UPSet::window(const UPSet& a, const UPSet& b) {
  Int h = 0, l = 1;
  auto feed = [&](const UPSet& s) {
    for (const Int& p : s.points_) h = std::max(h, int_abs(p));
    for (const Ray& r : s.rays_) {
      h = std::max(h, int_abs(r.base));
      l = int_lcm(l, r.period);
    }
    for (const Line& li : s.lines_) {
      h = std::max(h, int_abs(li.base));
      l = int_lcm(l, li.period);
    }
  };
  feed(a);
  feed(b);
  return {h, l};
}

UPSet UPSet::unite(const UPSet& o) const {
  UPSet s = *this;
  s.points_.insert(o.points_.begin(), o.points_.end());
  s.rays_.insert(s.rays_.end(), o.rays_.begin(), o.rays_.end());
  s.lines_.insert(s.lines_.end(), o.lines_.begin(), o.lines_.end());
  s.normalize();
  return s;
}

UPSet UPSet::add_constant(const Int& c) const {
  UPSet s;
  for (const Int& p : points_) s.points_.insert(p + c);
  for (Ray r : rays_) {
    r.base += c;
    s.rays_.push_back(r);
  }
  for (Line l : lines_) {
    l.base += c;
    s.lines_.push_back(l);
  }
  s.normalize();
  return s;
}

UPSet UPSet::scaled(const Int& factor) const {
  if (factor <= 0) throw precondition_error("UPSet::scaled: factor must be positive");
  UPSet s;
  for (const Int& p : points_) s.points_.insert(p * factor);
  for (const Ray& r : rays_) s.rays_.push_back(Ray{r.base * factor, r.period * factor, r.up});
  for (const Line& l : lines_)
    s.lines_.push_back(Line{l.base * factor, l.period * factor});
  s.normalize();
  return s;
}

UPSet UPSet::negated() const {
  UPSet s;
  for (const Int& p : points_) s.points_.insert(-p);
  for (const Ray& r : rays_) s.rays_.push_back(Ray{-r.base, r.period, !r.up});
  for (const Line& l : lines_) s.lines_.push_back(Line{-l.base, l.period});
  s.normalize();
  return s;
}

UPSet UPSet::minkowski(const UPSet& o) const {
  if (is_empty() || o.is_empty()) return UPSet();
  UPSet out;
  std::vector<UPSet> pieces;

  auto shift_of = [](const UPSet& s, const Int& c) { return s.add_constant(c); };

  // point + anything
  for (const Int& p : points_) pieces.push_back(shift_of(o, p));
  for (const Int& p : o.points_) {
    UPSet rest;
    rest.rays_ = rays_;
    rest.lines_ = lines_;
    rest.normalize();
    pieces.push_back(shift_of(rest, p));
  }

  // ray + ray
  for (const Ray& a : rays_)
    for (const Ray& b : o.rays_) {
      if (a.up == b.up) {
        UPSet s = numerical_semigroup({a.period, b.period}, Int(0));
        if (!a.up) s = s.negated();
        pieces.push_back(s.add_constant(a.base + b.base));
      } else {
        pieces.push_back(line(a.base + b.base, int_gcd(a.period, b.period)));
      }
    }

  // ray + line and line + line collapse to lines
  for (const Ray& a : rays_)
    for (const Line& b : o.lines_)
      pieces.push_back(line(a.base + b.base, int_gcd(a.period, b.period)));
  for (const Line& a : lines_)
    for (const Ray& b : o.rays_)
      pieces.push_back(line(a.base + b.base, int_gcd(a.period, b.period)));
  for (const Line& a : lines_)
    for (const Line& b : o.lines_)
      pieces.push_back(line(a.base + b.base, int_gcd(a.period, b.period)));

  for (const UPSet& p : pieces) {
    out.points_.insert(p.points_.begin(), p.points_.end());
    out.rays_.insert(out.rays_.end(), p.rays_.begin(), p.rays_.end());
    out.lines_.insert(out.lines_.end(), p.lines_.begin(), p.lines_.end());
  }
  out.normalize();
  return out;
}

std::optional<Int> UPSet::intersect_nonempty(const UPSet& o) const {
  auto [h, l] = window(*this, o);
  Int lo = -(h + l), hi = h + l;
  for (Int n = lo; n <= hi; ++n)
    if (member(n) && o.member(n)) return n;
  return std::nullopt;
}

bool UPSet::equal(const UPSet& o) const {
  auto [h, l] = window(*this, o);
  Int lo = -(h + l), hi = h + l;
  for (Int n = lo; n <= hi; ++n)
    if (member(n) != o.member(n)) return false;
  return true;
}

bool UPSet::is_subset(const UPSet& o) const {
  auto [h, l] = window(*this, o);
  Int lo = -(h + l), hi = h + l;
  for (Int n = lo; n <= hi; ++n)
    if (member(n) && !o.member(n)) return false;
  return true;
}

std::string UPSet::str() const {
  if (is_empty()) return "{}";
  std::string s;
  auto sep = [&]() {
    if (!s.empty()) s += " u ";
  };
  if (!points_.empty()) {
    sep();
    s += "{";
    bool first = true;
    for (const Int& p : points_) {
      if (!first) s += " ";
      first = false;
      s += to_string(p);
    }
    s += "}";
  }
  for (const Ray& r : rays_) {
    sep();
    s += "ray(" + to_string(r.base) + (r.up ? " +" : " -") + to_string(r.period) +
         "N)";
  }
  for (const Line& l : lines_) {
    sep();
    s += "line(" + to_string(l.base) + " +" + to_string(l.period) + "Z)";
  }
  return s;
}

UPSet numerical_semigroup(const std::vector<Int>& positive_gens, const Int& offset) {
  if (positive_gens.empty()) return UPSet::singleton(offset);
  Int g = 0;
  for (const Int& x : positive_gens) {
    if (x <= 0)
      throw precondition_error("numerical_semigroup: generators must be positive");
    g = int_gcd(g, x);
  }
  std::vector<Int> scaled;
  scaled.reserve(positive_gens.size());
  for (const Int& x : positive_gens) scaled.push_back(x / g);
  std::sort(scaled.begin(), scaled.end());
  scaled.erase(std::unique(scaled.begin(), scaled.end()), scaled.end());

  const Int& dmin = scaled.front();
  if (dmin == 1) {
    // the scaled semigroup is all of N
    return UPSet::ray(offset, g, true);
  }

  // scan bound: product of the two largest generators, grown until a full
  // run of dmin consecutive representables appears (always happens since the
  // scaled gcd is 1)
  Int bound = scaled.back() * (scaled.size() >= 2 ? scaled[scaled.size() - 2]
                                                  : scaled.back());
  for (;;) {
    if (!bound.fits_slong_p())
      throw precondition_error("numerical_semigroup: scan bound too large");
    long t = to_long(bound) + to_long(scaled.back()) + 1;
    std::vector<char> reach(static_cast<std::size_t>(t) + 1, 0);
    reach[0] = 1;
    for (long n = 0; n <= t; ++n) {
      if (!reach[static_cast<std::size_t>(n)]) continue;
      for (const Int& d : scaled) {
        long nd = n + to_long(d);
        if (nd <= t) reach[static_cast<std::size_t>(nd)] = 1;
      }
    }
    long run = 0;
    long tail_start = -1;
    for (long n = 0; n <= t; ++n) {
      run = reach[static_cast<std::size_t>(n)] ? run + 1 : 0;
      if (run >= to_long(dmin)) {
        tail_start = n - to_long(dmin) + 1;
        break;
      }
    }
    if (tail_start >= 0) {
      UPSet s;
      std::set<Int> pts;
      for (long n = 0; n < tail_start; ++n)
        if (reach[static_cast<std::size_t>(n)]) pts.insert(offset + Int(n) * g);
      UPSet tail = UPSet::ray(offset + Int(tail_start) * g, g, true);
      return UPSet::finite(pts).unite(tail);
    }
    bound *= 2;
  }
}

UPSet project_to_int(const SolutionBasis& basis, const std::vector<Int>& weights) {
  auto weigh = [&](const IntVector& x) {
    Int s = 0;
    for (int i = 0; i < x.dim(); ++i) s += weights[static_cast<std::size_t>(i)] * x[i];
    return s;
  };

  UPSet out;
  std::vector<Int> pos, neg;
  bool mixed_known = false;
  Int mixed_gcd = 0;
  for (const IntVector& q : basis.periods) {
    Int w = weigh(q);
    if (w > 0) pos.push_back(w);
    if (w < 0) neg.push_back(-w);
    if (w != 0) mixed_gcd = int_gcd(mixed_gcd, int_abs(w));
  }
  mixed_known = !pos.empty() && !neg.empty();

  for (const IntVector& m : basis.particulars) {
    Int s0 = weigh(m);
    UPSet part;
    if (mixed_known) {
      // both signs present: the generated subsemigroup is the full group gcd·Z
      part = UPSet::line(s0, mixed_gcd);
    } else if (!pos.empty()) {
      part = numerical_semigroup(pos, s0);
    } else if (!neg.empty()) {
      part = numerical_semigroup(neg, -s0).negated();
    } else {
      part = UPSet::singleton(s0);
    }
    out = out.unite(part);
  }
  return out;
}

}  // namespace avass

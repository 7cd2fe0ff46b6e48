#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "frames.hpp"
#include "functor.hpp"
#include "ghilardi.hpp"
#include "modal_frame.hpp"
#include "poset.hpp"

namespace imcoalg {

/// One layer M_k of the free construction over X, with the inner limit
/// V_G(V↑(M_{k-1})) cut at depth `inner_depth`.
///
/// For k >= 1 element z of `poset` is the pair parts[z] = (x, C): x in X and
/// C in stage `inner_depth` of the terminal complex over Up(M_{k-1}), at index
/// x * |stage| + C. relation[z] is R_{k-1}[z], the stage-1 coordinate of C.
struct FreeStage {
  std::size_t index = 0;
  std::size_t inner_depth = 0;
  PosetRef poset;
  PosetMap projection;  // π_k : M_k -> M_{k-1}; the identity on M_0
  std::vector<std::pair<Index, Index>> parts;
  std::vector<Subset> relation;
  std::shared_ptr<const FunctorValue> inner_up;  // Up(M_{k-1})
  std::shared_ptr<Complex> inner;                // complete to inner_depth

  std::size_t size() const { return poset->size(); }
};

namespace detail {

inline Index first_coordinate(const Complex& cx, std::size_t depth, Index c) {
  return depth == 1 ? c : cx.tower(depth, c)[1];
}

}  // namespace detail

/// M_0 .. M_stages over X. π_1 is the projection to X; π_{k+1}(x, C) is
/// (x, Up(π_k)[C]) with Up(π_k) pushed through C level by level.
/// Throws StageTooLarge naming the layer that overflowed.
inline std::vector<FreeStage> build_free_stages(const PosetRef& x, std::size_t stages, std::size_t inner_depth,
                                                ComplexLimits limits = {}) {
  if (inner_depth < 1) throw Error(ErrorKind::InvalidArgument, "inner depth must be at least 1");
  std::vector<FreeStage> out;
  FreeStage base;
  base.inner_depth = inner_depth;
  base.poset = x;
  base.projection = identity_map(x);
  out.push_back(std::move(base));

  for (std::size_t k = 0; k < stages; ++k) {
    const FreeStage& cur = out.back();
    const std::string name = "M_" + std::to_string(k + 1);
    FreeStage next;
    next.index = k + 1;
    next.inner_depth = inner_depth;
    try {
      auto up = std::make_shared<const FunctorValue>(up_functor(cur.poset, limits.max_stage));
      auto cx = std::make_shared<Complex>(Complex::build(terminal_map(up->poset), inner_depth, limits));
      PosetRef inner = cx->stage_poset(inner_depth);
      if (x->size() * inner->size() > limits.max_stage)
        throw Error(ErrorKind::StageTooLarge, std::to_string(x->size() * inner->size()) + " elements exceed " +
                                                  std::to_string(limits.max_stage));
      next.poset = share(product(*x, *inner));
      next.inner_up = up;
      next.inner = cx;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StageTooLarge) throw;
      std::string what = e.what();
      const std::string prefix = std::string(to_string(e.kind())) + ": ";
      if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
      throw Error(ErrorKind::StageTooLarge, name + ": " + what);
    }

    const std::size_t width = next.poset->size() / x->size();
    std::vector<Index> proj(next.poset->size());
    PosetMap h;
    if (k > 0) h = up_functor_map(cur.projection, *next.inner_up, *cur.inner_up);
    for (Index a = 0; a < x->size(); ++a)
      for (Index c = 0; c < width; ++c) {
        const Index z = a * width + c;
        next.parts.emplace_back(a, c);
        next.relation.push_back(next.inner_up->upsets[detail::first_coordinate(*next.inner, inner_depth, c)]);
        if (k == 0) {
          proj[z] = a;
        } else {
          auto img = map_element(h, *next.inner, inner_depth, c, *cur.inner);
          if (!img) throw Error(ErrorKind::LiftOutsideStage, "π_" + std::to_string(k + 1) + " leaves " + name);
          proj[z] = a * (cur.poset->size() / x->size()) + *img;
        }
      }
    next.projection = PosetMap(next.poset, cur.poset, std::move(proj));
    out.push_back(std::move(next));
  }
  return out;
}

/// The powerset of the variables ordered by reverse inclusion; element i is
/// the set whose bitmask is i.
inline Poset generator_poset(const std::vector<std::string>& variables) {
  if (variables.size() > 3) throw Error(ErrorKind::TooManyGenerators, std::to_string(variables.size()) + " > 3");
  const std::size_t n = std::size_t{1} << variables.size();
  std::vector<std::string> labels;
  std::vector<Subset> up(n, Subset(n));
  for (Index a = 0; a < n; ++a) {
    std::string l = "{";
    for (std::size_t v = 0; v < variables.size(); ++v)
      if ((a >> v) & 1U) l += (l.size() > 1 ? "," : "") + variables[v];
    labels.push_back(l + "}");
    for (Index b = 0; b < n; ++b)
      if ((a & b) == b) up[a].insert(b);
  }
  return Poset::from_rows(std::move(labels), std::move(up));
}

/// p_0 = p and p_{k+1}(y) = (p(y), C) where C is the lift of
/// y ↦ Up(p_k)(R[y]) = ↑p_k[R[y]] into the inner complex of stage k+1, taken
/// at its top coordinate. For k = 0 the closure is a no-op since p is a
/// p-morphism; later p_k need not be. `stages` must come from
/// build_free_stages over p's target.
inline std::vector<PosetMap> universal_lift(const PosetMap& p, const ModalFrame& f,
                                            const std::vector<FreeStage>& stages) {
  if (!is_pmorphism(p)) throw Error(ErrorKind::NotPMorphism, "p must be a p-morphism");
  if (auto v = mix_law_violation(f))
    throw Error(ErrorKind::MixLawViolation, "at (" + f.poset().label(v->first) + ", " + f.poset().label(v->second) + ")");
  if (!(*p.source() == f.poset())) throw Error(ErrorKind::InvalidArgument, "p must start at the frame's poset");
  if (stages.empty() || !(*stages[0].poset == *p.target()))
    throw Error(ErrorKind::InvalidArgument, "stages are not built over p's target");

  std::vector<PosetMap> out{PosetMap(p.source(), stages[0].poset, p.image())};
  for (std::size_t k = 0; k + 1 < stages.size(); ++k) {
    const FreeStage& next = stages[k + 1];
    const PosetMap& pk = out.back();
    std::vector<Index> bar(f.size());
    for (Index y = 0; y < f.size(); ++y) bar[y] = next.inner_up->upset_index(up_closure(*pk.target(), direct_image(pk, f.successors(y))));
    TowerMap t = lift_map(PosetMap(p.source(), next.inner_up->poset, std::move(bar)), *next.inner, next.inner_depth);
    const std::size_t width = next.size() / stages[0].size();
    std::vector<Index> img(f.size());
    for (Index y = 0; y < f.size(); ++y) img[y] = p(y) * width + t.coords[next.inner_depth][y];
    out.emplace_back(p.source(), next.poset, std::move(img));
  }
  return out;
}

inline std::vector<PosetMap> universal_lift(const PosetMap& p, const ModalFrame& f, std::size_t stages,
                                            std::size_t inner_depth, ComplexLimits limits = {}) {
  return universal_lift(p, f, build_free_stages(p.target(), stages, inner_depth, limits));
}

struct PropertyCheck {
  std::string name;
  bool passed = true;
  std::string counterexample;
};

struct StageReport {
  std::size_t index = 0;
  std::vector<PropertyCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Finite-stage properties of M_k: π_k monotone, every R_{k-1}[z] an upset
/// of M_{k-1}, R_{k-1} antitone along ≤, and {z : R_{k-1}[z] ⊆ U} an upset
/// of M_k for every upset U of M_{k-1}.
inline StageReport check_modal_stage_properties(const FreeStage& s) {
  StageReport r;
  r.index = s.index;
  const Poset& m = *s.poset;

  PropertyCheck mono{"projection monotone", true, ""};
  const Poset& below = *s.projection.target();
  for (Index z = 0; z < m.size() && mono.passed; ++z)
    for (Index w : m.up(z))
      if (!below.leq(s.projection(z), s.projection(w))) {
        mono.passed = false;
        mono.counterexample = m.label(z) + " <= " + m.label(w);
        break;
      }
  r.checks.push_back(mono);
  if (s.index == 0) return r;

  PropertyCheck ups{"relation images are upsets", true, ""};
  PropertyCheck anti{"relation antitone", true, ""};
  for (Index z = 0; z < m.size() && ups.passed; ++z)
    if (!is_upset(below, s.relation[z])) {
      ups.passed = false;
      ups.counterexample = "R[" + m.label(z) + "] = " + format_subset(below, s.relation[z]);
    }
  for (Index z = 0; z < m.size() && anti.passed; ++z)
    for (Index w : m.up(z))
      if (!s.relation[w].is_subset_of(s.relation[z])) {
        anti.passed = false;
        anti.counterexample = m.label(z) + " <= " + m.label(w);
        break;
      }
  PropertyCheck box{"box of an upset is an upset", true, ""};
  for (const Subset& u : s.inner_up->upsets) {
    Subset b(m.size());
    for (Index z = 0; z < m.size(); ++z)
      if (s.relation[z].is_subset_of(u)) b.insert(z);
    if (!is_upset(m, b)) {
      box.passed = false;
      box.counterexample = "U = " + format_subset(below, u);
      break;
    }
  }
  r.checks.push_back(ups);
  r.checks.push_back(anti);
  r.checks.push_back(box);
  return r;
}

struct LiftReport {
  bool monotone = true;        // every p_k
  bool pmorphisms = true;      // every p_k
  bool modal = true;           // xRy ⟹ p_{k+1}(x) R_k p_k(y)
  bool projections = true;     // π_{k+1} ∘ p_{k+1} = p_k
  std::string counterexample;

  bool passed() const { return monotone && pmorphisms && modal && projections; }
};

inline LiftReport check_universal_lift(const ModalFrame& f, const std::vector<FreeStage>& stages,
                                       const std::vector<PosetMap>& maps) {
  LiftReport r;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (r.monotone && !is_monotone(maps[k])) {
      r.monotone = false;
      r.counterexample = "p_" + std::to_string(k) + " is not monotone";
    }
    if (r.pmorphisms && !is_pmorphism(maps[k])) {
      r.pmorphisms = false;
      if (r.counterexample.empty()) r.counterexample = "p_" + std::to_string(k) + " is not a p-morphism";
    }
    if (k == 0) continue;
    for (Index y = 0; y < f.size(); ++y) {
      if (r.projections && stages[k].projection(maps[k](y)) != maps[k - 1](y)) {
        r.projections = false;
        r.counterexample = "π_" + std::to_string(k) + " p_" + std::to_string(k) + "(" + f.poset().label(y) + ")";
      }
      for (Index w : f.successors(y))
        if (r.modal && !stages[k].relation[maps[k](y)].contains(maps[k - 1](w))) {
          r.modal = false;
          r.counterexample = "p_" + std::to_string(k) + "(" + f.poset().label(y) + ") R p_" + std::to_string(k - 1) +
                             "(" + f.poset().label(w) + ")";
        }
    }
  }
  return r;
}

}  // namespace imcoalg

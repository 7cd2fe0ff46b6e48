#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imcoalg/bisim.hpp"
#include "imcoalg/frame_file.hpp"
#include "imcoalg/frames.hpp"
#include "imcoalg/freealg.hpp"
#include "imcoalg/ghilardi.hpp"
#include "imcoalg/logic.hpp"

namespace imcoalg::cli {

using json = nlohmann::json;

enum ExitCode : int { pass = 0, check_failure = 1, usage_error = 2, cap_exceeded = 3 };

struct Check {
  std::string name;
  bool passed = true;
  std::string counterexample;
};

/// One subcommand run. `lines` is the human-readable body; `data` carries the
/// same facts for the JSON form. Keys of `data` are sorted on output.
struct Report {
  std::string subcommand;
  std::string digest;
  std::vector<Check> checks;
  json data = json::object();
  std::vector<std::string> lines;
  std::optional<double> millis;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  void add(std::string name, bool ok, std::string counterexample = {}) {
    checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(counterexample)});
  }

  json to_json() const {
    json j;
    j["schema"] = "imcoalg/1";
    j["subcommand"] = subcommand;
    j["inputs_digest"] = digest;
    j["passed"] = passed();
    j["checks"] = json::array();
    for (const auto& c : checks) {
      json cj{{"name", c.name}, {"passed", c.passed}};
      if (!c.passed) cj["counterexample"] = c.counterexample;
      j["checks"].push_back(cj);
    }
    j["data"] = data;
    if (millis) j["timing_ms"] = *millis;
    return j;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << subcommand << ": " << (passed() ? "pass" : "FAIL") << "\n";
    for (const auto& c : checks) {
      out << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
      if (!c.passed && !c.counterexample.empty()) out << ": " << c.counterexample;
      out << "\n";
    }
    for (const auto& l : lines) out << l << "\n";
    if (millis) out << "time: " << *millis << " ms\n";
    return out.str();
  }
};

/// FNV-1a, 64 bit, hex.
inline std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

inline json labels_of(const Poset& p, const Subset& s) {
  json a = json::array();
  for (Index i : s) a.push_back(p.label(i));
  return a;
}

inline std::string pair_label(const Poset& p, std::pair<Index, Index> w) {
  return "(" + p.label(w.first) + ", " + p.label(w.second) + ")";
}

inline Check mix_law_check(const ModalFrame& f) {
  auto v = mix_law_violation(f);
  return {"mix law", !v, v ? "witness " + pair_label(f.poset(), *v) : ""};
}

inline json frame_json(const FrameFile& f) {
  const Poset& p = *f.poset;
  json j;
  j["elements"] = json::array();
  for (Index i = 0; i < p.size(); ++i) j["elements"].push_back(p.label(i));
  j["order"] = json::array();
  for (auto [a, b] : p.covers()) j["order"].push_back({p.label(a), p.label(b)});
  j["modal"] = json::array();
  for (Index a = 0; a < p.size(); ++a)
    for (Index b : f.frame.successors(a)) j["modal"].push_back({p.label(a), p.label(b)});
  j["val"] = json::object();
  for (const auto& [letter, v] : f.valuation) j["val"][letter] = labels_of(p, v);
  if (f.has_nbhd) {
    j["nbhd"] = json::object();
    for (Index a = 0; a < p.size(); ++a) {
      json fam = json::array();
      for (const Subset& s : f.nbhd[a]) fam.push_back(labels_of(p, s));
      j["nbhd"][p.label(a)] = fam;
    }
  }
  return j;
}

inline Report cmd_check(const FrameFile& f) {
  Report r;
  r.subcommand = "check";
  const Poset& p = *f.poset;
  // The parser builds the order as a closure and rejects cycles; re-verify the axioms on the stored rows.
  bool order_ok = true;
  std::string order_cx;
  for (Index a = 0; a < p.size() && order_ok; ++a) {
    if (!p.leq(a, a)) order_ok = false, order_cx = "not reflexive at " + p.label(a);
    for (Index b : p.up(a)) {
      if (b != a && p.leq(b, a)) order_ok = false, order_cx = "not antisymmetric at " + pair_label(p, {a, b});
      if (!p.up(b).is_subset_of(p.up(a))) order_ok = false, order_cx = "not transitive through " + p.label(b);
    }
  }
  r.add("partial order", order_ok, order_cx);
  Check mix = mix_law_check(f.frame);
  r.checks.push_back(mix);
  bool persistent = true;
  std::string pcx;
  for (const auto& [letter, v] : f.valuation)
    if (persistent && !is_upset(p, v)) persistent = false, pcx = letter + " = " + format_subset(p, v);
  r.add("valuation persistence", persistent, pcx);
  if (f.has_nbhd) {
    NbhdFrame n(f.poset, f.nbhd);
    std::string ncx;
    for (Index a = 0; a < p.size() && ncx.empty(); ++a)
      for (Index b : p.up(a))
        if (!n.family(a).is_subset_of(n.family(b))) {
          ncx = "N(" + p.label(a) + ") not contained in N(" + p.label(b) + ")";
          break;
        }
    r.add("neighbourhoods monotone", ncx.empty(), ncx);
  }
  r.data["frame"] = frame_json(f);
  r.data["closed_letters"] = f.closed_letters;
  r.lines.push_back("elements: " + std::to_string(p.size()) + ", covers: " + std::to_string(p.covers().size()));
  for (const auto& l : f.closed_letters) r.lines.push_back("closed upward: " + l);
  return r;
}

inline Report cmd_mc(const FrameFile& f, const std::string& formula_text) {
  Report r;
  r.subcommand = "mc";
  Formula phi = parse(formula_text);
  const Poset& p = *f.poset;
  r.checks.push_back(mix_law_check(f.frame));
  Model m(f.frame, f.valuation);
  Subset t = truth_set(m, phi);
  r.add("truth set is an upset", is_upset(p, t), format_subset(p, t));
  r.data["formula"] = print(phi);
  r.data["truth_set"] = labels_of(p, t);
  r.data["valid"] = t.count() == p.size();
  r.data["table"] = json::object();
  r.lines.push_back("formula: " + print(phi));
  for (Index x = 0; x < p.size(); ++x) {
    r.data["table"][p.label(x)] = t.contains(x);
    r.lines.push_back("  " + p.label(x) + "  " + (t.contains(x) ? "true" : "false"));
  }
  r.lines.push_back(std::string("valid: ") + (t.count() == p.size() ? "yes" : "no"));
  return r;
}

inline Report cmd_bisim(const FrameFile& a, const FrameFile& b, std::size_t depth, std::optional<std::size_t> distinguish,
                        ComplexLimits limits) {
  Report r;
  r.subcommand = "bisim";
  const Poset& pa = *a.poset;
  const Poset& pb = *b.poset;
  Check ma = mix_law_check(a.frame), mb = mix_law_check(b.frame);
  ma.name = "mix law (left)";
  mb.name = "mix law (right)";
  r.checks.push_back(ma);
  r.checks.push_back(mb);
  if (!ma.passed || !mb.passed) return r;

  Bisimulation z = largest_bisimulation(a.frame, b.frame);
  r.add("largest relation is a bisimulation", is_box_bisimulation(z));
  bool agrees = true;
  std::string cx;
  if (z.size() > 0) {
    try {
      agrees = coalgebraic_bisim_check(z, depth, limits);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ProjectionNotPMorphism) throw;
      agrees = false;
      cx = e.what();
    }
  }
  r.add("coalgebraic check agrees at depth " + std::to_string(depth), agrees, cx.empty() ? "span is not a coalgebra" : cx);

  json pairs = json::array();
  std::string line = "related:";
  for (auto [x, y] : z.pairs()) {
    pairs.push_back({pa.label(x), pb.label(y)});
    line += " (" + pa.label(x) + "," + pb.label(y) + ")";
  }
  r.data["largest"] = pairs;
  r.lines.push_back(z.size() ? line : "related: none");

  if (distinguish) {
    std::map<std::string, Subset> va, vb;
    for (const auto& [letter, v] : a.valuation)
      if (auto it = b.valuation.find(letter); it != b.valuation.end()) {
        va.emplace(letter, v);
        vb.emplace(letter, it->second);
      }
    std::vector<std::string> shared;
    for (const auto& [letter, v] : va) shared.push_back(letter);
    r.data["shared_letters"] = shared;
    Model left(a.frame, va), right(b.frame, vb);
    auto table = joint_truth_sets(left, right, *distinguish);
    json d = json::array();
    for (Index x = 0; x < pa.size(); ++x)
      for (Index y = 0; y < pb.size(); ++y) {
        if (z.related(x, y)) continue;
        std::optional<Formula> w;
        for (const JointTruth& j : table)
          if (j.left.contains(x) != j.right.contains(y)) {
            w = j.witness;
            break;
          }
        d.push_back({{"left", pa.label(x)}, {"right", pb.label(y)}, {"formula", w ? json(print(*w)) : json(nullptr)}});
        r.lines.push_back("  " + pa.label(x) + " / " + pb.label(y) + ": " +
                          (w ? print(*w) : "no formula of depth <= " + std::to_string(*distinguish)));
      }
    r.data["distinguishing"] = d;
  }
  return r;
}

inline json complex_stages_json(const Complex& cx, std::size_t depth) {
  json stages = json::array();
  for (std::size_t i = 0; i <= depth; ++i) {
    json s;
    s["index"] = i;
    s["size"] = cx.stage_size(i);
    json elems = json::array();
    for (Index k = 0; k < cx.stage_size(i); ++k) {
      json e{{"label", cx.label(i, k)}};
      if (i >= 1) e["root"] = cx.label(i - 1, cx.root(i, k));
      elems.push_back(e);
    }
    s["elements"] = elems;
    stages.push_back(s);
  }
  return stages;
}

inline std::string complex_dot(const Complex& cx, std::size_t depth) {
  std::ostringstream out;
  out << "digraph complex {\n";
  auto node = [](std::size_t i, Index k) { return "\"s" + std::to_string(i) + "_" + std::to_string(k) + "\""; };
  for (std::size_t i = 0; i <= depth; ++i) {
    out << "  subgraph cluster_" << i << " {\n    label=\"stage " << i << "\";\n";
    PosetRef p = cx.stage_poset(i);
    for (Index k = 0; k < p->size(); ++k) out << "    " << node(i, k) << " [label=" << detail::dot_quote(p->label(k)) << "];\n";
    for (auto [a, b] : p->covers()) out << "    " << node(i, a) << " -> " << node(i, b) << ";\n";
    out << "  }\n";
  }
  for (std::size_t i = 1; i <= depth; ++i)
    for (Index k = 0; k < cx.stage_size(i); ++k)
      out << "  " << node(i, k) << " -> " << node(i - 1, cx.root(i, k)) << " [style=dotted];\n";
  out << "}\n";
  return out.str();
}

inline Report cmd_complex(const FrameFile& f, std::size_t depth, ComplexLimits limits, std::string* dot = nullptr) {
  Report r;
  r.subcommand = "complex";
  FunctorValue up = up_functor(f.poset, limits.max_stage);
  Complex cx = Complex::build(terminal_map(up.poset), depth, limits);
  bool mono = true, onto = true;
  std::string mcx, ocx;
  for (std::size_t i = 1; i <= depth; ++i) {
    PosetMap root = cx.root_map(i);
    if (mono && !is_monotone(root)) {
      mono = false;
      mcx = "r_" + std::to_string(i);
    }
    Subset hit(cx.stage_size(i - 1));
    for (Index k = 0; k < cx.stage_size(i); ++k) hit.insert(root(k));
    if (onto && hit.count() != hit.universe()) {
      onto = false;
      ocx = "r_" + std::to_string(i);
    }
  }
  r.add("root maps monotone", mono, mcx);
  r.add("root maps surjective", onto, ocx);
  r.data["stages"] = complex_stages_json(cx, depth);
  std::string sizes = "stage sizes:";
  for (std::size_t i = 0; i <= depth; ++i) sizes += " " + std::to_string(cx.stage_size(i));
  r.lines.push_back(sizes);
  for (std::size_t i = 1; i <= depth; ++i) {
    std::string l = "r_" + std::to_string(i) + ":";
    for (Index k = 0; k < cx.stage_size(i); ++k) l += " " + cx.label(i, k) + "->" + cx.label(i - 1, cx.root(i, k));
    r.lines.push_back(l);
  }
  if (dot) *dot = complex_dot(cx, depth);
  return r;
}

inline Report cmd_lift(const FrameFile& f, std::size_t depth, ComplexLimits limits) {
  Report r;
  r.subcommand = "lift";
  Check mix = mix_law_check(f.frame);
  r.checks.push_back(mix);
  if (!mix.passed) return r;
  const Poset& p = *f.poset;
  LiftedMap l = frame_to_lifted(f.frame, depth, limits);
  UpMap m = frame_to_upmap(f.frame, l.up);
  r.add("coordinate 1 is x -> R[x]", l.tower.coordinate(1) == m.map.image());
  r.add("coordinates form a tower map", is_tower_map(l.tower, *l.complex));
  std::string bad;
  for (std::size_t n = 0; n < depth && bad.empty(); ++n)
    if (!check_limit_pmorphism(l.tower, *l.complex, n)) bad = "level " + std::to_string(n);
  r.add("p-morphism into the limit at levels below " + std::to_string(depth), bad.empty(), bad);
  json coords = json::object();
  for (Index x = 0; x < p.size(); ++x) {
    json c = json::array();
    std::string line = "  " + p.label(x) + ":";
    for (std::size_t i = 0; i <= depth; ++i) {
      std::string lab = l.complex->label(i, l.tower.coords[i][x]);
      c.push_back(lab);
      line += " " + lab;
    }
    coords[p.label(x)] = c;
    r.lines.push_back(line);
  }
  r.data["coordinates"] = coords;
  return r;
}

inline std::string freealg_dot(const std::vector<FreeStage>& st) {
  std::ostringstream out;
  out << "digraph freealg {\n";
  auto node = [](std::size_t k, Index z) { return "\"m" + std::to_string(k) + "_" + std::to_string(z) + "\""; };
  for (const auto& s : st) {
    out << "  subgraph cluster_" << s.index << " {\n    label=\"M_" << s.index << "\";\n";
    for (Index z = 0; z < s.size(); ++z) out << "    " << node(s.index, z) << " [label=" << detail::dot_quote(s.poset->label(z)) << "];\n";
    for (auto [a, b] : s.poset->covers()) out << "    " << node(s.index, a) << " -> " << node(s.index, b) << ";\n";
    out << "  }\n";
  }
  for (const auto& s : st) {
    if (s.index == 0) continue;
    for (Index z = 0; z < s.size(); ++z) {
      out << "  " << node(s.index, z) << " -> " << node(s.index - 1, s.projection(z)) << " [style=dotted];\n";
      for (Index w : s.relation[z]) out << "  " << node(s.index, z) << " -> " << node(s.index - 1, w) << " [style=dashed];\n";
    }
  }
  out << "}\n";
  return out.str();
}

inline Report cmd_freealg(std::size_t generators, std::size_t stages, std::size_t inner_depth, ComplexLimits limits,
                          std::string* dot = nullptr) {
  Report r;
  r.subcommand = "freealg";
  std::vector<std::string> vars;
  const char* names[] = {"p", "q", "r"};
  for (std::size_t i = 0; i < generators; ++i) vars.push_back(i < 3 ? names[i] : "v" + std::to_string(i));
  auto x = share(generator_poset(vars));
  auto st = build_free_stages(x, stages, inner_depth, limits);
  json sj = json::array();
  std::string sizes = "stage sizes:";
  for (const auto& s : st) {
    StageReport sr = check_modal_stage_properties(s);
    for (const auto& c : sr.checks) r.add("M_" + std::to_string(s.index) + ": " + c.name, c.passed, c.counterexample);
    sj.push_back({{"index", s.index}, {"size", s.size()}, {"inner_depth", s.inner_depth}});
    sizes += " " + std::to_string(s.size());
  }
  r.data["generators"] = vars;
  r.data["stages"] = sj;
  r.lines.push_back(sizes + " (inner depth " + std::to_string(inner_depth) + ")");
  if (dot) *dot = freealg_dot(st);
  return r;
}

inline json export_json(const FrameFile& f) {
  json j;
  j["schema"] = "imcoalg/1";
  j["frame"] = frame_json(f);
  const Poset& p = *f.poset;
  json computed;
  auto v = mix_law_violation(f.frame);
  computed["mix_law"] = !v;
  if (v) computed["mix_law_witness"] = {p.label(v->first), p.label(v->second)};
  json ups = json::array();
  for (const Subset& u : enumerate_upsets(p)) ups.push_back(labels_of(p, u));
  computed["upsets"] = ups;
  json leq = json::object();
  for (Index a = 0; a < p.size(); ++a) leq[p.label(a)] = labels_of(p, p.up(a));
  computed["up"] = leq;
  j["computed"] = computed;
  return j;
}

}  // namespace imcoalg::cli

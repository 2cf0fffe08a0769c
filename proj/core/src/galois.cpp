#include "gs/galois.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gs {

std::pair<EqFragment, Point> with_coset_imaginary(const EqFragment& frag,
                                                  const PermGroup& h_ext,
                                                  const std::string& name,
                                                  const Limits& limits) {
  const SortedUniverse& m = frag.base();
  if (m.size() > limits.max_arity)
    throw bound_error("coset imaginary: universe size " + std::to_string(m.size()) +
                      " exceeds the arity cap");
  if (!h_ext.is_subgroup_of(frag.aut_group()))
    throw error("coset imaginary: H is not a subgroup of the automorphism group");

  // D = orbit of the canonical tuple; in tuple form, sigma sends the tuple of
  // rho to the tuple of rho*sigma, so the invariant blocks are the sets H*tau.
  auto elems = frag.aut_group().elements(limits.max_elements);
  auto helems = h_ext.elements(limits.max_elements);

  auto base_tuple = [&](const Perm& p) {
    XTuple t(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) t[i] = static_cast<int>(p[static_cast<Point>(i)]);
    return t;
  };

  std::map<XTuple, std::size_t> block_of;
  std::vector<std::vector<XTuple>> blocks;
  for (const auto& tau : elems) {
    XTuple t = base_tuple(tau);
    if (block_of.count(t)) continue;
    // coset H*tau, keyed by its least tuple
    std::vector<XTuple> coset;
    for (const auto& h : helems) coset.push_back(base_tuple(h * tau));
    std::sort(coset.begin(), coset.end());
    coset.erase(std::unique(coset.begin(), coset.end()), coset.end());
    std::size_t id = blocks.size();
    blocks.push_back(coset);
    for (const auto& ct : coset) block_of[ct] = id;
  }

  QuotientSpec spec;
  spec.name = name;
  for (Point p = 0; p < m.size(); ++p)
    spec.signature.push_back(SortRef::base_sort(m.sort_of(p)));
  spec.use_blocks = true;
  spec.blocks = blocks;
  for (const auto& b : blocks)
    for (const auto& t : b) spec.tuples.push_back(t);

  Limits wide = limits;
  wide.max_arity = std::max(wide.max_arity, spec.signature.size());
  EqFragment out = frag.with_quotient(spec, wide);
  std::size_t sort = out.num_imaginaries() - 1;

  XTuple id_tuple(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) id_tuple[i] = static_cast<int>(i);
  int anchor_cls = out.imaginary(sort).class_of_tuple(id_tuple);
  if (anchor_cls < 0) throw error("coset imaginary: identity tuple missing from D");
  return {out, out.class_point(sort, anchor_cls)};
}

CosetImaginary coset_imaginary(const SortedUniverse& m, const PermGroup& h,
                               const AutOptions& opts, const Limits& limits) {
  EqFragment frag(m, opts);
  auto [ext, anchor] = with_coset_imaginary(frag, h, "coset", limits);

  CosetImaginary ci{ext, ext.num_imaginaries() - 1, anchor, frag.aut_group(), h};

  // contract: the pointwise stabilizer of the anchor is H, both inclusions
  PermGroup stab = ext.aut_group().pointwise_stabilizer(std::span(&ci.anchor, 1));
  if (stab.order() != h.order())
    throw error("coset imaginary: anchor stabilizer order mismatch");
  for (const auto& g : h.generators()) {
    // h acts on the base; compare against the base part of the stabilizer
    bool found = false;
    for (const auto& s : stab.elements(limits.max_elements)) {
      bool eq = true;
      for (Point p = 0; p < m.size() && eq; ++p) eq = s[p] == g[p];
      if (eq) {
        found = true;
        break;
      }
    }
    if (!found) throw error("coset imaginary: H is not inside the anchor stabilizer");
  }
  return ci;
}

NormalityCheck normal_iff_zero_definable(const CosetImaginary& ci) {
  NormalityCheck out;
  out.is_normal = is_normal(ci.base_group, ci.subgroup);
  // Through the Galois correspondence the anchor's orbit collapses to a
  // single point exactly when every class in it has the same pointwise
  // stabilizer as the anchor; then the orbit itself is the 0-definable
  // fixed-set choice for H.
  out.anchor_orbit_singleton = true;
  const auto& group = ci.fragment.aut_group();
  Point anchor = ci.anchor;
  PermGroup anchor_stab = group.pointwise_stabilizer(std::span(&anchor, 1));
  for (Point cls : group.orbit_of(ci.anchor)) {
    PermGroup stab = group.pointwise_stabilizer(std::span(&cls, 1));
    if (!stab.same_group(anchor_stab)) {
      out.anchor_orbit_singleton = false;
      break;
    }
  }
  return out;
}

ExactSequence exact_sequence(const EqFragment& m, std::size_t sort_index,
                             const Limits& limits) {
  if (sort_index >= m.num_imaginaries()) throw error("exact_sequence: unknown sort");
  if (!m.named_points().empty())
    throw error("exact_sequence: the quotient sort is not 0-definable "
                "(the fragment carries named points)");

  const auto& q = m.imaginary(sort_index);
  int k = q.class_count;
  std::vector<Point> cps;
  for (int c = 0; c < k; ++c) cps.push_back(m.class_point(sort_index, c));

  // induced structure on the classes: the orbit of the canonical class tuple
  // under the restriction action pins Aut exactly
  int width = 1;
  for (int v = k > 0 ? k - 1 : 0; v >= 10; v /= 10) ++width;
  auto id = [&](int c) {
    std::string s = std::to_string(c);
    return "c" + std::string(static_cast<std::size_t>(width) - s.size(), '0') + s;
  };
  StructureData nd;
  nd.sorts.push_back({"N", {}});
  for (int c = 0; c < k; ++c) nd.sorts[0].elements.push_back(id(c));
  StructureData::Relation orb;
  orb.name = "orb";
  orb.signature.assign(static_cast<std::size_t>(k), "N");
  std::set<std::vector<std::string>> rows;
  for (const auto& sigma : m.aut_group().elements(limits.max_elements)) {
    std::vector<std::string> row;
    for (int c = 0; c < k; ++c)
      row.push_back(id(m.class_of_point(sigma[cps[static_cast<std::size_t>(c)]]).second));
    rows.insert(std::move(row));
  }
  orb.tuples.assign(rows.begin(), rows.end());
  nd.relations.push_back(std::move(orb));
  Limits wide = limits;
  wide.max_arity = std::max(wide.max_arity, static_cast<std::size_t>(k));
  SortedUniverse n_structure(nd, wide);

  AutOptions n_opts = m.options();
  n_opts.max_universe = std::max(n_opts.max_universe, static_cast<std::size_t>(k));
  auto aut_n = aut(n_structure, n_opts).group;

  GroupHom restriction = GroupHom::from_action(
      m.aut_group(), aut_n,
      [&](const Perm& sigma) {
        std::vector<Point> img(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c)
          img[static_cast<std::size_t>(c)] = static_cast<Point>(
              m.class_of_point(sigma[cps[static_cast<std::size_t>(c)]]).second);
        return Perm(std::move(img));
      },
      limits);

  PermGroup kernel = m.aut_group().pointwise_stabilizer(cps);

  ExactSequence out{m, sort_index, n_structure, {}, restriction, kernel, false};
  out.exact = kernel.same_group(restriction.kernel()) &&
              restriction.image().order() == aut_n.order();

  Interpretation interp;
  interp.source = n_structure;
  interp.target = m;
  interp.sort_index = sort_index;
  interp.map.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) interp.map[static_cast<std::size_t>(c)] = c;
  out.n_interp = validate_premorphism(std::move(interp));
  return out;
}

SectionWitness section_to_interpretation(const ExactSequence& seq, const GroupHom& section,
                                         const Limits& limits) {
  // verify the section property: restriction . section = identity
  if (!(section.domain().order() == seq.restriction.codomain().order()))
    throw error("section_to_interpretation: section domain is not Aut(N)");
  for (const auto& [rho, grho] : section.table())
    if (!(seq.restriction(grho) == rho))
      throw error("section_to_interpretation: the map is not a section of the restriction");

  const EqFragment& m = seq.fragment;
  PermGroup image = section.image();

  auto [ext, anchor] = with_coset_imaginary(m, image, "fix", limits);

  // extend the image subgroup over the new sort to compute its fixed points
  std::vector<Perm> ext_gens;
  for (const auto& g : ext.aut_group().elements(limits.max_elements)) {
    std::vector<Point> cutimg(m.domain_size());
    for (Point p = 0; p < m.domain_size(); ++p) cutimg[p] = g[p];
    if (image.contains(Perm(std::move(cutimg)))) ext_gens.push_back(g);
  }
  PermGroup image_ext = PermGroup::generated(ext.domain_size(), ext_gens);
  if (image_ext.order() != image.order())
    throw error("section_to_interpretation: image extension mismatch");

  std::vector<Point> fixed;
  for (Point p = 0; p < ext.domain_size(); ++p) {
    bool all = true;
    for (const auto& g : image_ext.generators())
      if (g[p] != p) {
        all = false;
        break;
      }
    if (all) fixed.push_back(p);
  }

  // Aut(M / A) must be exactly the section image
  PermGroup stab = ext.aut_group().pointwise_stabilizer(fixed);
  if (!stab.same_group(image_ext))
    throw error("section_to_interpretation: Aut(M/A) differs from the section image");

  EqFragment named = ext.with_named_points(fixed);

  Interpretation interp;
  interp.source = seq.n_structure;
  interp.target = named;
  interp.sort_index = seq.sort_index;
  int k = static_cast<int>(seq.n_structure.size());
  interp.map.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) interp.map[static_cast<std::size_t>(c)] = c;
  interp = validate_premorphism(std::move(interp));

  SectionWitness out{section, named, fixed, interp, false, false};

  // condition (a): every base point lies in dcl(iN u A)
  std::vector<Point> over = fixed;
  for (int c = 0; c < k; ++c) over.push_back(ext.class_point(seq.sort_index, c));
  auto closure = ext.dcl(over);
  out.cond_dcl = true;
  for (Point p = 0; p < ext.base().size(); ++p)
    if (!std::binary_search(closure.begin(), closure.end(), p)) {
      out.cond_dcl = false;
      break;
    }

  // condition (b): A meets iN exactly in dcl_N(empty)
  AutOptions n_opts = m.options();
  n_opts.max_universe = std::max(n_opts.max_universe, seq.n_structure.size());
  auto aut_n = aut(seq.n_structure, n_opts).group;
  std::set<int> dcl_n;
  for (Point c = 0; c < seq.n_structure.size(); ++c) {
    bool all = true;
    for (const auto& g : aut_n.generators())
      if (g[c] != c) {
        all = false;
        break;
      }
    if (all) dcl_n.insert(static_cast<int>(c));
  }
  std::set<int> a_meet_in;
  for (Point p : fixed) {
    if (ext.is_base_point(p)) continue;
    auto [imag, cls] = ext.class_of_point(p);
    if (imag == seq.sort_index) a_meet_in.insert(cls);
  }
  out.cond_intersection = a_meet_in == dcl_n;

  if (!out.cond_dcl || !out.cond_intersection)
    throw error("section_to_interpretation: a verified condition failed on valid input");
  return out;
}

} // namespace gs

#include "gs/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace gs::io {

using nlohmann::json;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string print_structure(const SortedUniverse& m) {
  StructureData d = m.data();
  std::ostringstream out;
  for (const auto& s : d.sorts) {
    out << "sort " << s.name;
    for (const auto& e : s.elements) out << ' ' << e;
    out << '\n';
  }
  for (const auto& r : d.relations) {
    out << "rel " << r.name << " :";
    for (const auto& s : r.signature) out << ' ' << s;
    out << " =";
    for (std::size_t t = 0; t < r.tuples.size(); ++t) {
      if (t) out << " |";
      for (const auto& e : r.tuples[t]) out << ' ' << e;
    }
    out << '\n';
  }
  for (const auto& c : d.constants)
    out << "const " << c.name << " : " << c.sort << " = " << c.element << '\n';
  return out.str();
}

StructureData parse_structure_text(const std::string& text) {
  StructureData d;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw parse_error("line " + std::to_string(lineno) + ": " + msg);
    };
    if (tok[0] == "sort") {
      if (tok.size() < 2) fail("sort needs a name");
      StructureData::Sort s{tok[1], {}};
      for (std::size_t i = 2; i < tok.size(); ++i) s.elements.push_back(tok[i]);
      d.sorts.push_back(std::move(s));
    } else if (tok[0] == "rel") {
      if (tok.size() < 4 || tok[2] != ":") fail("rel syntax: rel <name> : <sorts> = <tuples>");
      StructureData::Relation r;
      r.name = tok[1];
      std::size_t i = 3;
      while (i < tok.size() && tok[i] != "=") r.signature.push_back(tok[i++]);
      if (i == tok.size()) fail("rel is missing '='");
      ++i;
      std::vector<std::string> tuple;
      for (; i < tok.size(); ++i) {
        if (tok[i] == "|") {
          if (tuple.size() != r.signature.size()) fail("tuple arity mismatch");
          r.tuples.push_back(tuple);
          tuple.clear();
        } else {
          tuple.push_back(tok[i]);
        }
      }
      if (!tuple.empty()) {
        if (tuple.size() != r.signature.size()) fail("tuple arity mismatch");
        r.tuples.push_back(tuple);
      }
      d.relations.push_back(std::move(r));
    } else if (tok[0] == "const") {
      if (tok.size() != 6 || tok[2] != ":" || tok[4] != "=")
        fail("const syntax: const <name> : <sort> = <elem>");
      d.constants.push_back({tok[1], tok[3], tok[5]});
    } else {
      fail("unknown declaration '" + tok[0] + "'");
    }
  }
  return d;
}

std::string print_structure_json(const SortedUniverse& m, bool pretty) {
  StructureData d = m.data();
  json j;
  j["sorts"] = json::array();
  for (const auto& s : d.sorts) j["sorts"].push_back({{"name", s.name}, {"elements", s.elements}});
  j["relations"] = json::array();
  for (const auto& r : d.relations)
    j["relations"].push_back(
        {{"name", r.name}, {"signature", r.signature}, {"tuples", r.tuples}});
  j["constants"] = json::array();
  for (const auto& c : d.constants)
    j["constants"].push_back({{"name", c.name}, {"sort", c.sort}, {"element", c.element}});
  return pretty ? j.dump(2) : j.dump();
}

StructureData parse_structure_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad JSON: ") + e.what());
  }
  StructureData d;
  try {
    for (const auto& s : j.value("sorts", json::array()))
      d.sorts.push_back({s.at("name"), s.value("elements", std::vector<std::string>{})});
    for (const auto& r : j.value("relations", json::array())) {
      StructureData::Relation rel;
      rel.name = r.at("name");
      rel.signature = r.at("signature").get<std::vector<std::string>>();
      for (const auto& t : r.value("tuples", json::array()))
        rel.tuples.push_back(t.get<std::vector<std::string>>());
      d.relations.push_back(std::move(rel));
    }
    for (const auto& c : j.value("constants", json::array()))
      d.constants.push_back({c.at("name"), c.at("sort"), c.at("element")});
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad structure JSON: ") + e.what());
  }
  return d;
}

SortedUniverse structure_from_text(const std::string& text, const Limits& limits) {
  auto first = text.find_first_not_of(" \t\r\n");
  StructureData d = (first != std::string::npos && text[first] == '{')
                        ? parse_structure_json(text)
                        : parse_structure_text(text);
  return SortedUniverse(d, limits);
}

SortedUniverse load_structure(const std::string& path, const Limits& limits) {
  return structure_from_text(read_file(path), limits);
}

std::string print_perm_json(const SortedUniverse& m, const Perm& p, bool pretty) {
  json j;
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    json block = json::object();
    auto [b, e] = m.sort_range(s);
    for (Point x = b; x < e; ++x) block[m.element_name(x)] = m.element_name(p[x]);
    j[m.sort_name(s)] = block;
  }
  return pretty ? j.dump(2) : j.dump();
}

Perm parse_perm(const SortedUniverse& m, const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw parse_error("empty permutation");
  std::vector<Point> img(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) img[i] = static_cast<Point>(i);
  if (text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw parse_error(std::string("bad permutation JSON: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      for (auto inner = it.value().begin(); inner != it.value().end(); ++inner)
        img[m.element(it.key(), inner.key())] =
            m.element(it.key(), inner.value().get<std::string>());
    }
    return Perm(std::move(img));
  }
  // cycle notation, single-sort only
  if (m.num_sorts() != 1)
    throw parse_error("cycle notation needs a single-sort universe");
  std::vector<std::vector<Point>> cycles;
  std::size_t i = first;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') throw parse_error("expected '(' in cycle notation");
    auto close = text.find(')', i);
    if (close == std::string::npos) throw parse_error("unclosed cycle");
    std::istringstream cs(text.substr(i + 1, close - i - 1));
    std::vector<Point> cyc;
    std::string name;
    while (cs >> name) cyc.push_back(m.element(m.sort_name(0), name));
    if (!cyc.empty()) cycles.push_back(std::move(cyc));
    i = close + 1;
  }
  return Perm::from_cycles(m.size(), cycles);
}

std::string print_group_json(const PermGroup& g, bool pretty) {
  json j;
  j["degree"] = g.degree();
  j["order"] = g.order();
  j["generators"] = json::array();
  for (const auto& p : g.generators()) j["generators"].push_back(p.images());
  return pretty ? j.dump(2) : j.dump();
}

PermGroup parse_group_json(const std::string& text, const Limits& limits) {
  (void)limits;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad group JSON: ") + e.what());
  }
  std::size_t degree = j.at("degree");
  std::vector<Perm> gens;
  for (const auto& arr : j.value("generators", json::array())) {
    std::vector<Point> img = arr.get<std::vector<Point>>();
    if (img.size() != degree) throw parse_error("generator degree mismatch");
    gens.push_back(Perm(std::move(img)));
  }
  return PermGroup::generated(degree, gens);
}

namespace {

PermGroup chain_group_from_json(const json& g, const Limits& limits) {
  std::string type = g.at("type");
  if (type == "trivial") return PermGroup::trivial(1);
  if (type == "cyclic") {
    std::size_t n = g.at("order");
    std::vector<Point> cyc(n);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<Point>((i + 1) % n);
    return PermGroup::generated(n, {Perm(std::move(cyc))});
  }
  if (type == "perm") {
    std::size_t degree = g.at("degree");
    std::vector<Perm> gens;
    for (const auto& arr : g.at("generators"))
      gens.push_back(Perm(arr.get<std::vector<Point>>()));
    for (const auto& p : gens)
      if (p.degree() != degree) throw parse_error("chain group generator degree mismatch");
    auto out = PermGroup::generated(degree, gens);
    if (out.order() > limits.max_elements) throw bound_error("chain group too large");
    return out;
  }
  throw parse_error("unknown chain group type '" + type + "'");
}

} // namespace

Tower tower_from_json(const std::string& text, const Limits& limits) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad tower JSON: ") + e.what());
  }

  GroupChain chain;
  const json& jc = j.at("chain");
  for (const auto& g : jc.at("groups")) {
    chain.levels.push_back(chain_group_from_json(g, limits));
    chain.names.push_back(g.at("name"));
  }
  if (chain.levels.empty() || chain.levels[0].order() != 1)
    throw parse_error("tower: chain.groups[0] must be the trivial group");

  auto auto_epi = [&](std::size_t i, std::size_t k) {
    const PermGroup& dom = chain.levels[i];
    const PermGroup& cod = chain.levels[k];
    std::uint64_t l = cod.order();
    if (l == 1)
      return GroupHom::from_action(dom, cod, [&](const Perm&) { return Perm(cod.degree()); },
                                   limits);
    if (dom.order() % l != 0)
      throw parse_error("tower: no canonical epi between chain groups " +
                        std::to_string(i) + " and " + std::to_string(k));
    return GroupHom::from_action(
        dom, cod,
        [&](const Perm& p) {
          std::uint64_t shift = p[0] % l; // cyclic reduction on the canonical cycle
          std::vector<Point> img(static_cast<std::size_t>(l));
          for (std::size_t x = 0; x < l; ++x)
            img[x] = static_cast<Point>((x + shift) % l);
          return Perm(std::move(img));
        },
        limits);
  };

  bool auto_epis = jc.at("epis").is_string() && jc.at("epis") == "auto";
  std::map<std::pair<std::size_t, std::size_t>, GroupHom> explicit_epis;
  if (!auto_epis) {
    for (const auto& e : jc.at("epis")) {
      std::size_t from = e.at("from"), to = e.at("to");
      if (from >= chain.levels.size() || to > from) throw parse_error("tower: bad epi endpoints");
      auto dom_gens = generating_sequence(chain.levels[from], limits);
      auto cod_elems = chain.levels[to].elements(limits.max_elements);
      std::vector<Perm> images;
      for (const auto& idx : e.at("images")) {
        std::size_t k = idx;
        if (k >= cod_elems.size()) throw parse_error("tower: epi image index out of range");
        images.push_back(cod_elems[k]);
      }
      if (images.size() != dom_gens.size())
        throw parse_error("tower: epi image count must match the generating sequence");
      explicit_epis.emplace(std::make_pair(from, to),
                            GroupHom::from_gen_images(chain.levels[from], chain.levels[to],
                                                      dom_gens, images, limits));
    }
  }
  for (std::size_t i = 0; i < chain.levels.size(); ++i) {
    chain.epis.emplace_back();
    for (std::size_t k = 0; k <= i; ++k) {
      if (i == k) {
        chain.epis[i].push_back(GroupHom::identity(chain.levels[i], limits));
      } else if (auto_epis) {
        chain.epis[i].push_back(auto_epi(i, k));
      } else {
        auto it = explicit_epis.find({i, k});
        if (it == explicit_epis.end()) {
          if (chain.levels[k].order() == 1)
            chain.epis[i].push_back(auto_epi(i, k));
          else
            throw parse_error("tower: missing epi " + std::to_string(i) + " -> " +
                              std::to_string(k));
        } else {
          chain.epis[i].push_back(it->second);
        }
      }
    }
  }

  std::size_t ngens = j.contains("gk") ? j.at("gk").value("ngens", std::size_t{0}) : 0;
  std::vector<CoverSpec> covers;
  std::vector<std::vector<std::vector<Point>>> actions; // per cover, per generator
  std::size_t domain = 1;
  for (const auto& c : j.at("covers")) {
    CoverSpec spec;
    spec.label = c.at("label");
    std::string geom = c.at("geometric");
    bool found = false;
    for (std::size_t g = 0; g < chain.names.size(); ++g)
      if (chain.names[g] == geom) {
        spec.chain_index = g;
        found = true;
      }
    if (!found) throw parse_error("tower: cover references unknown chain group '" + geom + "'");
    spec.zeros = c.at("zeros").get<std::vector<std::string>>();
    if (c.contains("constantField") && c.at("constantField") != "auto")
      throw parse_error("tower: constantField supports only \"auto\"");
    std::vector<std::vector<Point>> per_gen;
    if (c.contains("gkAction"))
      for (const auto& row : c.at("gkAction")) per_gen.push_back(row.get<std::vector<Point>>());
    if (per_gen.size() != ngens)
      throw parse_error("tower: cover '" + spec.label + "' needs one gkAction row per generator");
    for (const auto& row : per_gen)
      if (row.size() != spec.zeros.size())
        throw parse_error("tower: gkAction row size mismatch in '" + spec.label + "'");
    // zeros get sorted inside Tower::build; remap the action rows accordingly
    std::vector<std::string> sorted = spec.zeros;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> place(spec.zeros.size());
    for (std::size_t z = 0; z < spec.zeros.size(); ++z)
      place[z] = static_cast<std::size_t>(
          std::lower_bound(sorted.begin(), sorted.end(), spec.zeros[z]) - sorted.begin());
    std::vector<std::vector<Point>> remapped(per_gen.size(),
                                             std::vector<Point>(spec.zeros.size()));
    for (std::size_t g = 0; g < per_gen.size(); ++g)
      for (std::size_t z = 0; z < spec.zeros.size(); ++z)
        remapped[g][place[z]] = static_cast<Point>(place[per_gen[g][z]]);
    actions.push_back(remapped);
    domain += spec.zeros.size();
    covers.push_back(std::move(spec));
  }

  std::vector<Perm> gk_gens;
  for (std::size_t g = 0; g < ngens; ++g) {
    std::vector<Point> img(domain);
    img[0] = 0;
    std::size_t offset = 1;
    for (std::size_t c = 0; c < covers.size(); ++c) {
      for (std::size_t z = 0; z < covers[c].zeros.size(); ++z)
        img[offset + z] = static_cast<Point>(offset + actions[c][g][z]);
      offset += covers[c].zeros.size();
    }
    gk_gens.push_back(Perm(std::move(img)));
  }

  DistinguishedSpec dist;
  if (j.contains("distinguished") && !j.at("distinguished").is_string()) {
    const json& dj = j.at("distinguished");
    auto level_of = [&](const std::string& label) -> std::size_t {
      if (label == "X") return 0;
      for (std::size_t c = 0; c < covers.size(); ++c)
        if (covers[c].label == label) return c + 1;
      throw parse_error("tower: unknown level label '" + label + "'");
    };
    auto zero_of = [&](std::size_t level, const std::string& zero) -> std::size_t {
      if (level == 0) return 0;
      std::vector<std::string> sorted = covers[level - 1].zeros;
      std::sort(sorted.begin(), sorted.end());
      auto it = std::lower_bound(sorted.begin(), sorted.end(), zero);
      if (it == sorted.end() || *it != zero)
        throw parse_error("tower: unknown zero '" + zero + "'");
      return static_cast<std::size_t>(it - sorted.begin());
    };
    if (dj.contains("onestep")) {
      for (const auto& o : dj.at("onestep")) {
        std::size_t lvl = level_of(o.at("level"));
        dist.onestep[{lvl, zero_of(lvl, o.at("zero"))}] = o.at("twist").get<std::size_t>();
      }
    }
    if (dj.contains("table")) {
      dist.explicit_table = true;
      for (const auto& e : dj.at("table")) {
        std::size_t from_level = level_of(e.at("from").at(0));
        std::size_t from_zero = zero_of(from_level, e.at("from").at(1));
        std::size_t to_level = level_of(e.at("to"));
        dist.table[{from_level, from_zero, to_level}] = e.at("twist").get<std::size_t>();
      }
    }
  }

  Limits wide = limits;
  wide.max_elements = std::max<std::size_t>(wide.max_elements, 4096);
  return Tower::build(std::move(chain), std::move(covers), std::move(gk_gens), dist, wide);
}

Tower load_tower(const std::string& path, const Limits& limits) {
  return tower_from_json(read_file(path), limits);
}

std::string print_tower_json(int p, int depth) {
  json j;
  j["chain"]["groups"] = json::array();
  j["chain"]["groups"].push_back({{"name", "1"}, {"type", "trivial"}});
  std::uint64_t n = 1;
  for (int i = 0; i < depth; ++i) {
    n *= static_cast<std::uint64_t>(p);
    j["chain"]["groups"].push_back(
        {{"name", "C" + std::to_string(n)}, {"type", "cyclic"}, {"order", n}});
  }
  j["chain"]["epis"] = "auto";
  j["gk"] = {{"ngens", 0}};
  j["covers"] = json::array();
  for (int i = 0; i < depth; ++i) {
    json cover;
    cover["label"] = "lvl" + std::to_string(i + 1);
    cover["geometric"] = j["chain"]["groups"][static_cast<std::size_t>(i + 1)]["name"];
    cover["zeros"] = {"a0"};
    cover["gkAction"] = json::array();
    cover["constantField"] = "auto";
    j["covers"].push_back(cover);
  }
  j["distinguished"] = "auto";
  return j.dump(2);
}

namespace {

std::pair<EqFragment, std::size_t> fragment_from_json(const json& j, const Limits& limits) {
  SortedUniverse base = j.at("structure").is_string()
                            ? load_structure(j.at("structure"), limits)
                            : SortedUniverse(parse_structure_json(j.at("structure").dump()),
                                             limits);
  AutOptions opts;
  opts.max_universe = std::max(Limits{}.max_universe, base.size());
  EqFragment frag(base, opts);
  std::string wanted = j.at("sort");
  std::size_t sort_index = 0;
  bool found = false;
  for (const auto& q : j.value("imaginaries", json::array())) {
    QuotientSpec spec;
    spec.name = q.at("name");
    for (const auto& sn : q.at("signature"))
      spec.signature.push_back(SortRef::base_sort(frag.base().sort_index(sn)));
    auto to_tuple = [&](const json& arr) {
      XTuple t;
      std::size_t i = 0;
      for (const auto& e : arr) {
        const std::string& sn = q.at("signature").at(i);
        t.push_back(static_cast<int>(frag.base().element(sn, e.get<std::string>())));
        ++i;
      }
      return t;
    };
    for (const auto& arr : q.value("tuples", json::array()))
      spec.tuples.push_back(to_tuple(arr));
    spec.use_blocks = true;
    for (const auto& block : q.at("classes")) {
      std::vector<XTuple> b;
      for (const auto& arr : block) {
        b.push_back(to_tuple(arr));
        spec.tuples.push_back(b.back());
      }
      spec.blocks.push_back(std::move(b));
    }
    Limits wide = limits;
    wide.max_arity = std::max(wide.max_arity, spec.signature.size());
    frag = frag.with_quotient(spec, wide);
    if (spec.name == wanted) {
      sort_index = frag.num_imaginaries() - 1;
      found = true;
    }
  }
  if (!found) throw parse_error("bundle: sort '" + wanted + "' not among the imaginaries");
  return {frag, sort_index};
}

} // namespace

InterpBundle interp_bundle_from_json(const std::string& text, const Limits& limits) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad bundle JSON: ") + e.what());
  }
  json target = j.at("target");
  auto [frag, sort_index] = fragment_from_json(target, limits);

  SortedUniverse source = j.at("source").is_string()
                              ? load_structure(j.at("source"), limits)
                              : SortedUniverse(parse_structure_json(j.at("source").dump()),
                                               limits);
  Interpretation g;
  g.source = source;
  g.target = frag;
  g.sort_index = sort_index;
  g.map.assign(source.size(), -1);
  const json& map = j.at("map");
  for (auto it = map.begin(); it != map.end(); ++it) {
    std::string name = it.key();
    Point p;
    auto dot = name.find('.');
    if (dot != std::string::npos)
      p = source.element(name.substr(0, dot), name.substr(dot + 1));
    else if (source.num_sorts() == 1)
      p = source.element(source.sort_name(0), name);
    else
      throw parse_error("bundle: qualify map keys as Sort.elem for multi-sort sources");
    g.map[p] = it.value().get<int>();
  }
  for (int v : g.map)
    if (v < 0) throw parse_error("bundle: map does not cover the source universe");
  return InterpBundle{std::move(g)};
}

InterpBundle load_interp_bundle(const std::string& path, const Limits& limits) {
  return interp_bundle_from_json(read_file(path), limits);
}

GaloisBundle load_galois_bundle(const std::string& path, const Limits& limits) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw parse_error(std::string("bad bundle JSON: ") + e.what());
  }
  auto [frag, sort_index] = fragment_from_json(j, limits);
  return GaloisBundle{frag, sort_index};
}

} // namespace gs::io

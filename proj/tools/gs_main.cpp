// Command-line front end: structures, groups, interpretations, galois
// certificates, towers, generators, and the acceptance runner.
#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gs/acceptance.hpp"
#include "gs/galois.hpp"
#include "gs/instances.hpp"
#include "gs/io.hpp"

using namespace gs;
using nlohmann::json;

namespace {

struct Output {
  bool pretty = false;
  bool timings = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(json j) const {
    if (timings)
      j["timingMs"] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    std::cout << (pretty ? j.dump(2) : j.dump()) << '\n';
  }
};

json certificate(const std::string& operation, const std::string& input,
                 const std::vector<CertLaw>& laws) {
  json c;
  c["operation"] = operation;
  c["inputsDigest"] = hex64(fnv1a64(input));
  c["laws"] = json::array();
  bool all = true;
  for (const auto& l : laws) {
    c["laws"].push_back({{"name", l.name}, {"pass", l.pass}});
    all = all && l.pass;
  }
  c["pass"] = all;
  if (!all) throw error("certificate law failed in " + operation);
  return c;
}

PermGroup group_by_name(const std::string& name) {
  for (const auto& e : group_catalog())
    if (e.name == name) return e.group;
  throw parse_error("unknown catalog group '" + name + "' (try `gs gen catalog`)");
}

json perm_json(const SortedUniverse& m, const Perm& p) {
  return json::parse(io::print_perm_json(m, p));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-scale structures, automorphism groups and cover towers"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--pretty", out.pretty, "indented JSON output");
  app.add_flag("--timings", out.timings, "include wall-clock timing in the output");

  Limits limits = Limits::from_env();
  std::uint64_t seed = 1;

  // aut
  std::string aut_file;
  std::size_t aut_max = 0;
  auto* cmd_aut = app.add_subcommand("aut", "automorphism group of a structure");
  cmd_aut->add_option("file", aut_file, "structure file or '-'")->required();
  cmd_aut->add_option("--max-size", aut_max, "override the universe size cap");

  // g2m / m2g
  std::string g2m_group, g2m_file;
  bool g2m_json = false;
  auto* cmd_g2m = app.add_subcommand("g2m", "regular structure of a finite group");
  cmd_g2m->add_option("--group", g2m_group, "catalog group name");
  cmd_g2m->add_option("--file", g2m_file, "group JSON file");
  cmd_g2m->add_flag("--json", g2m_json, "emit the structure as JSON");

  std::string m2g_file;
  auto* cmd_m2g = app.add_subcommand("m2g", "automorphism group as a reusable group file");
  cmd_m2g->add_option("file", m2g_file, "structure file or '-'")->required();

  // iso
  std::string iso_a, iso_b;
  bool iso_groups_mode = false;
  auto* cmd_iso = app.add_subcommand("iso", "isomorphism test");
  cmd_iso->add_option("a", iso_a, "first input")->required();
  cmd_iso->add_option("b", iso_b, "second input")->required();
  cmd_iso->add_flag("--groups", iso_groups_mode, "treat the inputs as group JSON files");

  // interp
  auto* cmd_interp = app.add_subcommand("interp", "interpretation checks");
  std::string interp_bundle;
  std::size_t interp_arity = 0;
  auto* cmd_interp_check = cmd_interp->add_subcommand("check", "validate and classify a bundle");
  cmd_interp_check->add_option("bundle", interp_bundle, "bundle JSON file")->required();
  cmd_interp_check->add_option("--arity", interp_arity, "cap the embedding arity check");

  // galois
  auto* cmd_galois = app.add_subcommand("galois", "galois correspondence certificates");
  std::string galois_file;
  auto* cmd_g_sub = cmd_galois->add_subcommand("subgroups", "anchor recovery across the lattice");
  cmd_g_sub->add_option("file", galois_file, "structure file")->required();
  std::string galois_bundle;
  auto* cmd_g_exact = cmd_galois->add_subcommand("exact", "exact sequence of a quotient sort");
  cmd_g_exact->add_option("bundle", galois_bundle, "galois bundle JSON")->required();
  std::string section_bundle;
  auto* cmd_g_sect = cmd_galois->add_subcommand("section", "sections and their witnesses");
  cmd_g_sect->add_option("bundle", section_bundle, "galois bundle JSON")->required();

  // tower
  auto* cmd_tower = app.add_subcommand("tower", "cover tower operations");
  std::string tower_file;
  std::string tower_op;
  for (const char* op : {"build", "limit", "fiber", "pi1", "sharp", "section"}) {
    auto* sub = cmd_tower->add_subcommand(op, std::string("tower ") + op);
    sub->add_option("file", tower_file, "tower JSON file")->required();
    sub->callback([&tower_op, op] { tower_op = op; });
  }

  // gen
  auto* cmd_gen = app.add_subcommand("gen", "instance generators");
  int gen_p = 2, gen_m = 2, gen_depth = 2;
  std::size_t gen_rank = 0;
  auto* cmd_gen_field = cmd_gen->add_subcommand("field", "finite-field orbit structure");
  cmd_gen_field->add_option("p", gen_p, "characteristic")->required();
  cmd_gen_field->add_option("m", gen_m, "degree")->required();
  cmd_gen_field->add_option("--rank", gen_rank, "pick the k-th irreducible modulus");
  auto* cmd_gen_tower = cmd_gen->add_subcommand("tower", "cyclic tower description file");
  cmd_gen_tower->add_option("p", gen_p, "prime")->required();
  cmd_gen_tower->add_option("depth", gen_depth, "number of levels")->required();
  std::string gen_group_name;
  auto* cmd_gen_catalog = cmd_gen->add_subcommand("catalog", "named regular groups");
  cmd_gen_catalog->add_option("--name", gen_group_name, "emit one group as a group file");

  // acceptance
  std::string selector = "all";
  bool list_criteria = false;
  auto* cmd_acc = app.add_subcommand("acceptance", "run the acceptance criteria");
  cmd_acc->add_option("selector", selector, "criterion selector (default: all)");
  cmd_acc->add_flag("--list", list_criteria, "list the selectors");
  cmd_acc->add_option("--seed", seed, "seed for the randomized criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_aut) {
      std::string text = io::read_file(aut_file);
      SortedUniverse m = io::structure_from_text(text, limits);
      AutOptions opts;
      opts.max_universe = aut_max ? aut_max : limits.max_universe;
      auto a = aut(m, opts);
      json j;
      j["order"] = a.group.order();
      j["generators"] = json::array();
      for (const auto& g : a.group.generators()) j["generators"].push_back(perm_json(m, g));
      j["certificate"] = certificate("aut", text, a.certificate);
      out.emit(j);
    } else if (*cmd_g2m) {
      if (g2m_group.empty() == g2m_file.empty())
        throw parse_error("g2m: pass exactly one of --group or --file");
      PermGroup g = g2m_group.empty()
                        ? io::parse_group_json(io::read_file(g2m_file), limits)
                        : group_by_name(g2m_group);
      Limits wide = limits;
      wide.max_arity = std::max<std::uint64_t>(wide.max_arity, g.order());
      SortedUniverse m = group_to_structure(g, wide);
      std::cout << (g2m_json ? io::print_structure_json(m, out.pretty) + "\n"
                             : io::print_structure(m));
    } else if (*cmd_m2g) {
      std::string text = io::read_file(m2g_file);
      SortedUniverse m = io::structure_from_text(text, limits);
      AutOptions opts;
      opts.max_universe = std::max(limits.max_universe, m.size());
      auto a = aut(m, opts);
      std::cout << io::print_group_json(a.group, out.pretty) << '\n';
    } else if (*cmd_iso) {
      json j;
      if (iso_groups_mode) {
        PermGroup ga = io::parse_group_json(io::read_file(iso_a), limits);
        PermGroup gb = io::parse_group_json(io::read_file(iso_b), limits);
        auto found = iso_groups(ga, gb, limits);
        j["isomorphic"] = found.has_value();
      } else {
        SortedUniverse a = io::load_structure(iso_a, limits);
        SortedUniverse b = io::load_structure(iso_b, limits);
        AutOptions opts;
        opts.max_universe = std::max({limits.max_universe, a.size(), b.size()});
        auto found = iso_structures(a, b, opts);
        j["isomorphic"] = found.has_value();
        if (found) {
          json w = json::object();
          for (Point p = 0; p < a.size(); ++p)
            w[a.qualified_name(p)] = b.qualified_name((*found)[p]);
          j["witness"] = w;
        }
      }
      out.emit(j);
    } else if (*cmd_interp_check) {
      std::string text = io::read_file(interp_bundle);
      auto bundle = io::interp_bundle_from_json(text, limits);
      json j;
      Interpretation g = bundle.interp;
      try {
        g = validate_premorphism(std::move(g));
      } catch (const error& e) {
        j["premorphismOk"] = false;
        j["reason"] = e.what();
        out.emit(j);
        return 1;
      }
      j["premorphismOk"] = true;
      auto c = classify(g, interp_arity);
      j["embedding"] = c.embedding;
      j["surjection"] = c.surjection;
      j["isomorphism"] = c.isomorphism;
      j["verifiedArity"] = c.verified_arity;
      auto r = restriction_hom(g, limits);
      j["restriction"] = {{"domainOrder", r.hom.domain().order()},
                          {"imageOrder", r.hom.image().order()},
                          {"kernelOrder", r.hom.kernel().order()},
                          {"surjective", r.surjective}};
      std::vector<CertLaw> laws{{"map is a premorphism", true},
                                {"embedding implies surjective restriction",
                                 !c.embedding || r.surjective}};
      j["certificate"] = certificate("interp check", text, laws);
      out.emit(j);
    } else if (*cmd_g_sub) {
      std::string text = io::read_file(galois_file);
      SortedUniverse m = io::structure_from_text(text, limits);
      auto g = aut(m).group;
      json j;
      j["autOrder"] = g.order();
      j["subgroups"] = json::array();
      std::vector<CertLaw> laws;
      for (const auto& h : all_subgroups(g, g.order(), limits)) {
        auto ci = coset_imaginary(m, h, {}, limits);
        Point anchor = ci.anchor;
        auto stab = ci.fragment.aut_group().pointwise_stabilizer(std::span(&anchor, 1));
        auto nc = normal_iff_zero_definable(ci);
        bool recovered = stab.order() == h.order();
        bool law = nc.is_normal == nc.anchor_orbit_singleton;
        laws.push_back({"anchor recovers subgroup of order " + std::to_string(h.order()),
                        recovered});
        laws.push_back({"normality law at order " + std::to_string(h.order()), law});
        j["subgroups"].push_back({{"order", h.order()},
                                  {"anchorStabilizerOrder", stab.order()},
                                  {"isNormal", nc.is_normal},
                                  {"anchorOrbitSingleton", nc.anchor_orbit_singleton}});
      }
      j["certificate"] = certificate("galois subgroups", text, laws);
      out.emit(j);
    } else if (*cmd_g_exact) {
      std::string text = io::read_file(galois_bundle);
      auto bundle = io::load_galois_bundle(galois_bundle, limits);
      auto seq = exact_sequence(bundle.fragment, bundle.sort_index, limits);
      json j;
      j["kernelOrder"] = seq.kernel.order();
      j["autOrder"] = seq.restriction.domain().order();
      j["inducedOrder"] = seq.restriction.image().order();
      j["exact"] = seq.exact;
      std::vector<CertLaw> laws{
          {"kernel equals the restriction kernel", seq.exact},
          {"orders multiply",
           seq.kernel.order() * seq.restriction.image().order() ==
               seq.restriction.domain().order()}};
      j["certificate"] = certificate("galois exact", text, laws);
      out.emit(j);
    } else if (*cmd_g_sect) {
      std::string text = io::read_file(section_bundle);
      auto bundle = io::load_galois_bundle(section_bundle, limits);
      auto seq = exact_sequence(bundle.fragment, bundle.sort_index, limits);
      auto sections = find_sections(seq.restriction, limits);
      json j;
      j["sections"] = sections.size();
      j["witnesses"] = json::array();
      std::vector<CertLaw> laws;
      for (std::size_t i = 0; i < sections.size(); ++i) {
        auto w = section_to_interpretation(seq, sections[i], limits);
        j["witnesses"].push_back({{"condDcl", w.cond_dcl},
                                  {"condIntersection", w.cond_intersection},
                                  {"fixedSetSize", w.fixed_set.size()},
                                  {"fragmentChoice",
                                   "coset imaginary of the section image plus the "
                                   "receiving sort"}});
        laws.push_back({"witness " + std::to_string(i) + " conditions",
                        w.cond_dcl && w.cond_intersection});
      }
      j["certificate"] = certificate("galois section", text, laws);
      out.emit(j);
    } else if (*cmd_tower) {
      std::string text = io::read_file(tower_file);
      Tower t = io::tower_from_json(text, limits);
      json j;
      if (tower_op == "build") {
        j["levels"] = t.num_levels();
        j["gkOrder"] = t.gk().order();
        json lv = json::array();
        for (std::size_t i = 0; i < t.num_levels(); ++i)
          lv.push_back({{"label", t.level(i).label},
                        {"zeros", t.level(i).zeros},
                        {"degree", t.degree_of(i)},
                        {"constantFieldIndex",
                         t.gk().order() / std::max<std::uint64_t>(
                                              t.level(i).constant_field.order(), 1)}});
        j["coverLevels"] = lv;
        j["certificate"] = certificate("tower build", text, {{"composition closure", true}});
      } else if (tower_op == "limit") {
        auto lim = t.limit_group(limits);
        auto laws = t.limit_laws(lim);
        j["gammaOrder"] = lim.gamma.order();
        json idx = json::array();
        for (const auto& p : lim.periods) idx.push_back(lim.gamma.order() / p.order());
        j["periodIndices"] = idx;
        j["certificate"] = certificate(
            "tower limit", text,
            {{"projection law", laws.projection_law},
             {"periods normal", laws.periods_normal},
             {"periods of finite index", laws.periods_finite_index},
             {"quotients match deck groups", laws.quotients_match_deck},
             {"intersection of periods trivial", laws.residually_trivial}});
      } else if (tower_op == "fiber") {
        auto fs = t.fiber_structure(limits);
        j["sorts"] = fs.full.num_sorts();
        json sizes = json::array();
        for (std::size_t s = 0; s < fs.slots.size(); ++s)
          sizes.push_back(t.degree_of(fs.slots[s].level));
        j["fiberSizes"] = sizes;
        j["certificate"] =
            certificate("tower fiber", text, {{"i_x bijective and equivariant", true}});
      } else if (tower_op == "pi1") {
        auto fs = t.fiber_structure(limits);
        auto pi1 = t.pi1_et(fs, limits);
        auto lim = t.limit_group(limits);
        bool iso = iso_groups(pi1, lim.gamma, limits).has_value();
        j["pi1Order"] = pi1.order();
        j["gammaOrder"] = lim.gamma.order();
        j["certificate"] = certificate("tower pi1", text, {{"pi1 iso Gamma", iso}});
      } else if (tower_op == "sharp") {
        auto sh = t.sharp();
        j["gkOrder"] = sh.gk.order();
        j["gSharpOrder"] = sh.g_sharp.order();
        j["kSharp"] = sh.k_sharp_label;
        if (sh.obstruction) {
          auto [from, to, elem] = *sh.obstruction;
          j["obstruction"] = {{"from", {t.level(from.level).label,
                                        t.level(from.level).zeros[from.zero]}},
                              {"to", t.level(to.level).label},
                              {"gkElement", elem}};
        }
        out.emit(j);
        return 0;
      } else if (tower_op == "section") {
        auto sh = t.sharp();
        auto demo = t.section_demo(limits);
        j["kSharpEqualsK"] = sh.equals_gk;
        if (demo) {
          j["sectionVerified"] = true;
          j["autOrder"] = demo->aut_full.order();
          j["gkOrder"] = t.gk().order();
        } else {
          j["sectionVerified"] = false;
          if (sh.obstruction) {
            auto [from, to, elem] = *sh.obstruction;
            (void)elem;
            j["obstruction"] = {{"from", {t.level(from.level).label,
                                          t.level(from.level).zeros[from.zero]}},
                                {"to", t.level(to.level).label}};
          }
        }
      }
      out.emit(j);
    } else if (*cmd_gen_field) {
      auto fs = galois_orbit_structure(gen_p, gen_m, limits, gen_rank);
      std::cout << io::print_structure(fs.structure);
    } else if (*cmd_gen_tower) {
      std::cout << io::print_tower_json(gen_p, gen_depth) << '\n';
    } else if (*cmd_gen_catalog) {
      if (!gen_group_name.empty()) {
        std::cout << io::print_group_json(group_by_name(gen_group_name), out.pretty) << '\n';
      } else {
        json j = json::array();
        for (const auto& e : group_catalog())
          j.push_back({{"name", e.name}, {"order", e.group.order()}});
        out.emit(j);
      }
    } else if (*cmd_acc) {
      if (list_criteria) {
        json j = json::array();
        for (const auto& s : acceptance_selectors()) j.push_back(s);
        out.emit(j);
        return 0;
      }
      auto results = run_acceptance(selector, seed);
      json j;
      j["criteria"] = json::array();
      bool all = true;
      for (const auto& r : results) {
        json c;
        c["id"] = r.id;
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["seconds"] = r.seconds;
        c["notes"] = r.notes;
        j["criteria"].push_back(c);
        all = all && r.pass;
      }
      j["pass"] = all;
      out.emit(j);
      return all ? 0 : 1;
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "arbo/cli.hpp"

#include <fstream>
#include <future>
#include <sstream>

#include "CLI11.hpp"
#include "arbo/certificate.hpp"
#include "arbo/generator.hpp"
#include "arbo/graph_of_relations.hpp"
#include "arbo/kurosh.hpp"
#include "arbo/tuple_oracle.hpp"
#include "arbo/verify.hpp"

namespace arbo {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

std::string tuple_to_string(const ReducedTuple& t) {
  std::ostringstream ss;
  ss << "(";
  for (size_t i = 0; i < t.points.size(); ++i)
    ss << (i ? "," : "") << t.points[i];
  ss << ") tags (";
  for (size_t i = 0; i < t.factor_tags.size(); ++i)
    ss << (i ? "," : "") << t.factor_tags[i];
  ss << ")";
  return ss.str();
}

struct FreeStructure {
  EquivRelation r;
  std::vector<EquivRelation> factors;
};

FreeStructure free_structure(const InstanceFile& inst) {
  if (inst.free_relation.empty())
    fail(ErrorKind::ValidationError, "instance declares no free-product structure");
  FreeStructure out;
  out.r = inst.relation(inst.free_relation);
  for (const auto& f : inst.free_factors) out.factors.push_back(inst.relation(f));
  return out;
}

// Two-factor view for field constructions: first factor against the join of
// the rest.
std::pair<EquivRelation, EquivRelation> two_factor_view(const FreeStructure& fs) {
  if (fs.factors.empty()) fail(ErrorKind::ValidationError, "no factors");
  EquivRelation f1 = fs.factors.front();
  EquivRelation f2 =
      fs.factors.size() == 1
          ? EquivRelation::trivial_full(fs.r.space())
          : join(std::vector<EquivRelation>(fs.factors.begin() + 1,
                                            fs.factors.end()));
  return {std::move(f1), std::move(f2)};
}

EquivRelation acting_relation(const InstanceFile& inst, const std::string& sub,
                              const EquivRelation& whole) {
  if (sub.empty()) return whole;
  EquivRelation s = inst.relation(sub);
  if (!is_subrelation(s, whole))
    fail(ErrorKind::NotSubrelation, sub + " is not a sub-relation");
  return s;
}

int cmd_validate(const InstanceFile& inst, std::ostream& out) {
  out << "space " << inst.space_size << "\n";
  for (const auto& [name, r] : inst.relations)
    out << "relation " << name << ": domain " << r.domain().size() << " points, "
        << r.class_count() << " classes\n";
  for (const auto& [name, phi] : inst.isos)
    out << "iso " << name << ": " << phi.pairs().size() << " pairs\n";
  for (const auto& [name, g] : inst.graphings)
    out << "graphing " << name << ": " << g.unordered_edges().size()
        << " edges\n";
  out << "ok\n";
  return 0;
}

int cmd_verify_free(const InstanceFile& inst, const std::string& out_path,
                    std::ostream& out) {
  FreeStructure fs = free_structure(inst);
  ProductCheck result = verify_free_product(fs.r, fs.factors);
  if (!out_path.empty())
    write_file(out_path, serialize_certificate(make_free_certificate(inst, result)));
  if (result.accepted) {
    out << "accept: free product verified\n";
    return 0;
  }
  out << "reject: closing reduced tuple " << tuple_to_string(*result.rejection)
      << "\n";
  return 1;
}

int cmd_verify_amalgam(const InstanceFile& inst, const std::string& out_path,
                       std::ostream& out) {
  if (inst.amalgam_relation.empty())
    fail(ErrorKind::ValidationError, "instance declares no amalgam structure");
  ProductCheck result = verify_amalgam(
      inst.relation(inst.amalgam_relation), inst.relation(inst.amalgam_r1),
      inst.relation(inst.amalgam_r2), inst.relation(inst.amalgam_core));
  if (!out_path.empty())
    write_file(out_path,
               serialize_certificate(make_amalgam_certificate(inst, result)));
  if (result.accepted) {
    out << "accept: amalgam verified\n";
    return 0;
  }
  out << "reject: closing reduced tuple " << tuple_to_string(*result.rejection)
      << "\n";
  return 1;
}

GraphField field_for(const InstanceFile& inst) {
  if (!inst.amalgam_relation.empty())
    return bass_serre_amalgam(
        inst.relation(inst.amalgam_relation), inst.relation(inst.amalgam_r1),
        inst.relation(inst.amalgam_r2), inst.relation(inst.amalgam_core));
  FreeStructure fs = free_structure(inst);
  auto [f1, f2] = two_factor_view(fs);
  return bass_serre_free(fs.r, f1, f2);
}

int cmd_bass_serre(const InstanceFile& inst, std::ostream& out) {
  GraphField field = field_for(inst);
  validate_graph_field(field);
  for (int x : field.vertices.base_domain().members()) {
    int undirected = 0;
    for (int e : field.edges.fiber(x))
      if (e < field.opposite[e]) ++undirected;
    out << "fiber " << x << ": " << field.vertices.fiber(x).size()
        << " vertices, " << undirected << " edges\n";
  }
  TreeCheck tc = is_treefield(field);
  if (tc.ok) {
    out << "tree field: yes\n";
    return 0;
  }
  out << "tree field: no ("
      << (tc.witness->kind == FiberWitness::cycle ? "cycle" : "disconnected")
      << " in fiber " << tc.witness->base_point << ")\n";
  return 1;
}

int cmd_extract_treeing(const InstanceFile& inst, const std::string& sub,
                        const std::string& out_path, std::ostream& out) {
  GraphField field;
  EquivRelation whole;
  if (!inst.graphings.empty()) {
    GraphingField gf = from_graphing(inst.graphings.front().second);
    field = std::move(gf.field);
    whole = std::move(gf.relation);
  } else {
    FreeStructure fs = free_structure(inst);
    field = field_for(inst);
    whole = fs.r;
  }
  EquivRelation acting = acting_relation(inst, sub, whole);
  if (!(acting == whole)) field = act_by_subrelation(field, acting);
  Graphing treeing = extract_treeing(field);
  out << "treeing:";
  for (auto [a, b] : treeing.unordered_edges()) out << ' ' << a << '-' << b;
  out << "\n";
  if (!out_path.empty()) {
    std::string name = sub;
    if (name.empty())
      for (const auto& [n, rel] : inst.relations)
        if (rel == acting) name = n;
    if (name.empty())
      fail(ErrorKind::ValidationError, "acting relation is not named");
    write_file(out_path,
               serialize_certificate(make_treeing_certificate(inst, name, treeing)));
  }
  return 0;
}

int cmd_desingularize(const InstanceFile& inst, const std::string& sub,
                      std::ostream& out) {
  FreeStructure fs = free_structure(inst);
  GraphField field = field_for(inst);
  EquivRelation acting = acting_relation(inst, sub, fs.r);
  if (!(acting == fs.r)) field = act_by_subrelation(field, acting);
  Desingularization d = desingularize(field);
  out << "vertices " << d.vertices.size() << ", tree edges "
      << d.tree_edges.size() << ", extra edges " << d.extra_edges.size() << "\n";
  DesingCheck chk = validate_desingularization(d);
  if (!chk.ok) {
    out << "validation: FAILED (" << chk.bullet << ")\n";
    return 1;
  }
  out << "validation: ok\n";
  GenerationSplit split = generation_split(d);
  out << "generation split: intersections "
      << (split.trivial_intersections ? "trivial" : "NOT trivial") << ", treeing "
      << (split.treeing_ok ? "ok" : "BAD") << ", generates "
      << (split.generates ? "yes" : "NO") << "\n";
  return split.trivial_intersections && split.treeing_ok && split.generates ? 0
                                                                            : 1;
}

int cmd_kurosh(const InstanceFile& inst, const std::string& sub,
               const std::string& out_path, std::ostream& out) {
  FreeStructure fs = free_structure(inst);
  std::string sname = sub.empty() ? inst.sub_name : sub;
  if (sname.empty()) fail(ErrorKind::ValidationError, "kurosh needs --sub");
  EquivRelation s = inst.relation(sname);
  KuroshDecomposition d = kurosh(fs.r, fs.factors, s);
  out << "factors " << d.factors.size() << " (";
  int identities = 0;
  for (const auto& f : d.factors)
    if (f.identity_factor) ++identities;
  out << identities << " identity), treeing " << d.treeing.unordered_edges().size()
      << " edges, freeness " << (d.freeness.accepted ? "accepted" : "REJECTED")
      << "\n";
  if (!out_path.empty()) {
    InstanceFile bound = inst;
    bound.sub_name = sname;
    bound.sub_of = inst.free_relation;
    CertificateFile cert = make_kurosh_certificate(bound, d);
    cert.digest = digest_hex(instance_digest(inst));
    cert.sub_name = sname;
    write_file(out_path, serialize_certificate(cert));
  }
  return d.freeness.accepted ? 0 : 1;
}

int cmd_restrict(const InstanceFile& inst, const std::string& restrict_flag,
                 const std::string& out_path, std::ostream& out) {
  FreeStructure fs = free_structure(inst);
  std::vector<int> pts;
  if (!restrict_flag.empty()) {
    std::istringstream ss(restrict_flag);
    int p;
    while (ss >> p) pts.push_back(p);
  } else if (inst.restrict_set) {
    pts = *inst.restrict_set;
  } else {
    fail(ErrorKind::ValidationError, "restriction needs --restrict or a declared set");
  }
  PointSet y(inst.space(), pts);
  RestrictionDecomposition d = restrict_decomposition(fs.r, fs.factors, y);
  out << "factors " << d.decomposition.factors.size() << ", treeing "
      << d.decomposition.treeing.unordered_edges().size()
      << " edges, saturation partition "
      << (d.saturation_partition ? "ok" : "FAILED") << "\n";
  if (!out_path.empty()) {
    InstanceFile bound = inst;
    bound.restrict_set = pts;
    CertificateFile cert = make_restriction_certificate(bound, d);
    cert.digest = digest_hex(instance_digest(inst));
    cert.restrict_set = pts;
    write_file(out_path, serialize_certificate(cert));
  }
  return 0;
}

int cmd_check(const std::string& cert_path, const InstanceFile& inst,
              int max_tuple_len, std::ostream& out) {
  CertificateFile cert = parse_certificate(read_file(cert_path));
  CheckReport rep = check_certificate(cert, inst, max_tuple_len);
  out << (rep.ok ? "ok: " : "FAILED: ") << rep.detail << "\n";
  if (rep.ok) return 0;
  return rep.detail == "digest-mismatch" ? 2 : 1;
}

InstanceFile generate(const std::string& kind, const GeneratorConfig& cfg,
                      bool with_sub, bool with_restrict) {
  InstanceFile inst;
  if (kind == "free")
    inst = gen_free_product(cfg);
  else if (kind == "nonfree")
    inst = gen_nonfree(cfg);
  else if (kind == "amalgam")
    inst = gen_amalgam(cfg);
  else if (kind == "nonamalgam")
    inst = gen_nonamalgam(cfg);
  else if (kind == "treeing")
    inst = gen_treeing_instance(cfg);
  else
    fail(ErrorKind::InvalidArgument, "unknown kind " + kind);
  if (with_sub)
    attach_subrelation(inst, "R", cfg.seed ^ 0xD5, cfg.density);
  if (with_restrict) attach_restriction(inst, "R", cfg.seed ^ 0xE7);
  return inst;
}

int cmd_batch(const std::string& kind, int count, const GeneratorConfig& base,
              std::ostream& out) {
  struct Row {
    uint64_t seed;
    bool valid_instance;
    bool verifier_accept;
    bool oracle_accept;
  };
  auto run_one = [&](uint64_t seed) -> Row {
    GeneratorConfig cfg = base;
    cfg.seed = seed;
    bool expect_valid = seed % 2 == 0;
    Row row{seed, expect_valid, false, false};
    if (kind == "amalgam") {
      InstanceFile inst = expect_valid ? gen_amalgam(cfg) : gen_nonamalgam(cfg);
      const EquivRelation &r = inst.relation("R"), &r1 = inst.relation("R1"),
                          &r2 = inst.relation("R2"), &r3 = inst.relation("R3");
      row.verifier_accept = verify_amalgam(r, r1, r2, r3).accepted;
      row.oracle_accept = oracle_is_amalgam(r, r1, r2, r3);
    } else {
      InstanceFile inst = expect_valid ? gen_free_product(cfg) : gen_nonfree(cfg);
      FreeStructure fs = free_structure(inst);
      row.verifier_accept = verify_free_product(fs.r, fs.factors).accepted;
      row.oracle_accept = oracle_is_free_product(fs.r, fs.factors);
    }
    return row;
  };
  std::vector<std::future<Row>> futs;
  for (int i = 0; i < count; ++i)
    futs.push_back(std::async(std::launch::async, run_one, base.seed + i));
  bool all_agree = true;
  int accepts = 0;
  for (auto& f : futs) {
    Row row = f.get();
    bool agree = row.verifier_accept == row.oracle_accept;
    all_agree = all_agree && agree;
    accepts += row.verifier_accept;
    out << "seed " << row.seed << ": verifier "
        << (row.verifier_accept ? "accept" : "reject") << ", oracle "
        << (row.oracle_accept ? "accept" : "reject")
        << (agree ? "" : "  DISAGREE") << "\n";
  }
  out << "summary: " << count << " instances, " << accepts << " accepted, "
      << (all_agree ? "all agree" : "DISAGREEMENT") << "\n";
  return all_agree ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"finite Bass-Serre engine for equivalence relations"};
  app.require_subcommand(1);

  std::string in_path, out_path, cert_path, sub, restrict_flag, kind = "free";
  std::string format = "text-v1";
  int max_tuple_len = 0, count = 10;
  GeneratorConfig cfg;
  bool with_sub = false, with_restrict = false;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_in) {
    if (needs_in) cmd->add_option("--in", in_path, "instance file")->required();
    cmd->add_option("--out", out_path, "output file");
    cmd->add_option("--format", format, "file format (text-v1)");
    cmd->add_option("--max-tuple-len", max_tuple_len,
                    "max factor moves searched by the oracle (default 2|X|)");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate");
  add_common(validate, true);
  CLI::App* vfree = app.add_subcommand("verify-free", "verify a free product");
  add_common(vfree, true);
  CLI::App* vam = app.add_subcommand("verify-amalgam", "verify an amalgam");
  add_common(vam, true);
  CLI::App* bs = app.add_subcommand("bass-serre", "build the canonical field");
  add_common(bs, true);
  CLI::App* et = app.add_subcommand("extract-treeing", "treeing extraction");
  add_common(et, true);
  et->add_option("--sub", sub, "acting sub-relation name");
  CLI::App* ds = app.add_subcommand("desingularize", "desingularize an action");
  add_common(ds, true);
  ds->add_option("--sub", sub, "acting sub-relation name");
  CLI::App* ku = app.add_subcommand("kurosh", "decompose a sub-relation");
  add_common(ku, true);
  ku->add_option("--sub", sub, "sub-relation name");
  CLI::App* rs = app.add_subcommand("restrict", "decompose a restriction");
  add_common(rs, true);
  rs->add_option("--restrict", restrict_flag, "restriction point set");
  CLI::App* ck = app.add_subcommand("check", "re-verify a certificate");
  add_common(ck, true);
  ck->add_option("--cert", cert_path, "certificate file")->required();
  CLI::App* gn = app.add_subcommand("gen", "generate a seeded instance");
  add_common(gn, false);
  gn->add_option("--seed", seed, "seed");
  gn->add_option("--size", cfg.space_size, "space size");
  gn->add_option("--factors", cfg.factor_count, "factor count");
  gn->add_option("--class-max", cfg.class_max, "max class size");
  gn->add_option("--density", cfg.density, "sub-relation density");
  gn->add_option("--kind", kind, "free|nonfree|amalgam|nonamalgam|treeing");
  gn->add_flag("--with-sub", with_sub, "attach a generated sub-relation");
  gn->add_flag("--with-restrict", with_restrict, "attach a restriction set");
  CLI::App* bt = app.add_subcommand("batch", "seeded verify/oracle batch");
  add_common(bt, false);
  bt->add_option("--seed", seed, "first seed");
  bt->add_option("--count", count, "instance count");
  bt->add_option("--size", cfg.space_size, "space size");
  bt->add_option("--factors", cfg.factor_count, "factor count");
  bt->add_option("--class-max", cfg.class_max, "max class size");
  bt->add_option("--kind", kind, "free|amalgam");

  std::vector<const char*> argv;
  argv.push_back("arbo");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (format != "text-v1")
      fail(ErrorKind::InvalidArgument, "unsupported format " + format);
    cfg.seed = seed;
    if (gn->parsed()) {
      InstanceFile inst = generate(kind, cfg, with_sub, with_restrict);
      std::string text = serialize_instance(inst);
      if (out_path.empty())
        out << text;
      else
        write_file(out_path, text);
      return 0;
    }
    if (bt->parsed()) return cmd_batch(kind, count, cfg, out);

    InstanceFile inst = parse_instance(read_file(in_path));
    if (validate->parsed()) return cmd_validate(inst, out);
    if (vfree->parsed()) return cmd_verify_free(inst, out_path, out);
    if (vam->parsed()) return cmd_verify_amalgam(inst, out_path, out);
    if (bs->parsed()) return cmd_bass_serre(inst, out);
    if (et->parsed()) return cmd_extract_treeing(inst, sub, out_path, out);
    if (ds->parsed()) return cmd_desingularize(inst, sub, out);
    if (ku->parsed()) return cmd_kurosh(inst, sub, out_path, out);
    if (rs->parsed()) return cmd_restrict(inst, restrict_flag, out_path, out);
    if (ck->parsed()) return cmd_check(cert_path, inst, max_tuple_len, out);
    err << "no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.kind() == ErrorKind::NotFreeProduct || e.kind() == ErrorKind::NotGenerated)
      return 1;
    return 2;
  }
}

}  // namespace arbo

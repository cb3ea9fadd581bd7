#include "arbo/certificate.hpp"

#include <sstream>

#include "arbo/tuple_oracle.hpp"

namespace arbo {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

int parse_int(const std::string& tok, int lineno) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (...) {
    fail(ErrorKind::ParseError,
         "line " + std::to_string(lineno) + ": expected a number");
  }
  if (pos != tok.size())
    fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad number");
  return v;
}

}  // namespace

std::string serialize_certificate(const CertificateFile& cert) {
  std::ostringstream out;
  out << "certificate " << cert.kind << "\n";
  out << "digest " << cert.digest << "\n";
  out << "status " << (cert.accepted ? "accept" : "reject") << "\n";
  if (!cert.relation_name.empty()) out << "relation " << cert.relation_name << "\n";
  if (!cert.factor_names.empty()) {
    out << "factors";
    for (const auto& f : cert.factor_names) out << ' ' << f;
    out << "\n";
  }
  if (!cert.core_name.empty()) out << "core " << cert.core_name << "\n";
  if (!cert.sub_name.empty()) out << "sub " << cert.sub_name << "\n";
  if (!cert.restrict_set.empty()) {
    out << "restrict";
    for (int p : cert.restrict_set) out << ' ' << p;
    out << "\n";
  }
  for (const auto& f : cert.factors) {
    out << "factor " << f.factor_index;
    if (f.identity) out << " identity";
    out << " pairs";
    for (auto [a, b] : f.conjugator) out << ' ' << a << ':' << b;
    out << "\n";
  }
  if (!cert.treeing.empty()) {
    out << "treeing";
    for (auto [a, b] : cert.treeing) out << ' ' << a << '-' << b;
    out << "\n";
  }
  if (!cert.tuple_points.empty()) {
    out << "tuple";
    for (int p : cert.tuple_points) out << ' ' << p;
    out << " tags";
    for (int t : cert.tuple_tags) out << ' ' << t;
    out << "\n";
  }
  return out.str();
}

CertificateFile parse_certificate(const std::string& text) {
  CertificateFile cert;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "certificate" && toks.size() == 2) {
      cert.kind = toks[1];
    } else if (key == "digest" && toks.size() == 2) {
      cert.digest = toks[1];
    } else if (key == "status" && toks.size() == 2) {
      cert.accepted = toks[1] == "accept";
    } else if (key == "relation" && toks.size() == 2) {
      cert.relation_name = toks[1];
    } else if (key == "factors") {
      cert.factor_names.assign(toks.begin() + 1, toks.end());
    } else if (key == "core" && toks.size() == 2) {
      cert.core_name = toks[1];
    } else if (key == "sub" && toks.size() == 2) {
      cert.sub_name = toks[1];
    } else if (key == "restrict") {
      for (size_t i = 1; i < toks.size(); ++i)
        cert.restrict_set.push_back(parse_int(toks[i], lineno));
    } else if (key == "factor") {
      CertificateFile::FactorRec rec;
      size_t i = 1;
      if (i >= toks.size())
        fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": factor");
      rec.factor_index = parse_int(toks[i++], lineno);
      if (i < toks.size() && toks[i] == "identity") {
        rec.identity = true;
        ++i;
      }
      if (i >= toks.size() || toks[i] != "pairs")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": factor needs pairs");
      for (++i; i < toks.size(); ++i) {
        size_t colon = toks[i].find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::ParseError,
               "line " + std::to_string(lineno) + ": pair must be a:b");
        rec.conjugator.emplace_back(parse_int(toks[i].substr(0, colon), lineno),
                                    parse_int(toks[i].substr(colon + 1), lineno));
      }
      cert.factors.push_back(std::move(rec));
    } else if (key == "treeing") {
      for (size_t i = 1; i < toks.size(); ++i) {
        size_t dash = toks[i].find('-');
        if (dash == std::string::npos)
          fail(ErrorKind::ParseError,
               "line " + std::to_string(lineno) + ": edge must be a-b");
        cert.treeing.emplace_back(parse_int(toks[i].substr(0, dash), lineno),
                                  parse_int(toks[i].substr(dash + 1), lineno));
      }
    } else if (key == "tuple") {
      size_t i = 1;
      while (i < toks.size() && toks[i] != "tags")
        cert.tuple_points.push_back(parse_int(toks[i++], lineno));
      if (i < toks.size() && toks[i] == "tags")
        for (++i; i < toks.size(); ++i)
          cert.tuple_tags.push_back(parse_int(toks[i], lineno));
    } else {
      fail(ErrorKind::ParseError,
           "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (cert.kind.empty()) fail(ErrorKind::ParseError, "missing certificate kind");
  return cert;
}

namespace {

void embed_rejection(CertificateFile& cert, const ProductCheck& result) {
  cert.accepted = result.accepted;
  if (!result.accepted && result.rejection) {
    cert.tuple_points = result.rejection->points;
    cert.tuple_tags = result.rejection->factor_tags;
  }
}

}  // namespace

CertificateFile make_free_certificate(const InstanceFile& inst,
                                      const ProductCheck& result) {
  CertificateFile cert;
  cert.kind = "free-product";
  cert.digest = digest_hex(instance_digest(inst));
  cert.relation_name = inst.free_relation;
  cert.factor_names = inst.free_factors;
  embed_rejection(cert, result);
  return cert;
}

CertificateFile make_amalgam_certificate(const InstanceFile& inst,
                                         const ProductCheck& result) {
  CertificateFile cert;
  cert.kind = "amalgam";
  cert.digest = digest_hex(instance_digest(inst));
  cert.relation_name = inst.amalgam_relation;
  cert.factor_names = {inst.amalgam_r1, inst.amalgam_r2};
  cert.core_name = inst.amalgam_core;
  embed_rejection(cert, result);
  return cert;
}

CertificateFile make_kurosh_certificate(const InstanceFile& inst,
                                        const KuroshDecomposition& d) {
  CertificateFile cert;
  cert.kind = "kurosh";
  cert.digest = digest_hex(instance_digest(inst));
  cert.relation_name = inst.free_relation;
  cert.factor_names = inst.free_factors;
  cert.sub_name = inst.sub_name;
  for (const auto& f : d.factors)
    cert.factors.push_back({f.factor_index, f.identity_factor,
                            f.conjugator.pairs()});
  cert.treeing = d.treeing.unordered_edges();
  return cert;
}

CertificateFile make_restriction_certificate(const InstanceFile& inst,
                                             const RestrictionDecomposition& d) {
  CertificateFile cert;
  cert.kind = "restriction";
  cert.digest = digest_hex(instance_digest(inst));
  cert.relation_name = inst.free_relation;
  cert.factor_names = inst.free_factors;
  if (inst.restrict_set) cert.restrict_set = *inst.restrict_set;
  for (const auto& f : d.decomposition.factors)
    cert.factors.push_back({f.factor_index, f.identity_factor,
                            f.conjugator.pairs()});
  cert.treeing = d.decomposition.treeing.unordered_edges();
  return cert;
}

CertificateFile make_treeing_certificate(const InstanceFile& inst,
                                         const std::string& relation_name,
                                         const Graphing& treeing) {
  CertificateFile cert;
  cert.kind = "treeing";
  cert.digest = digest_hex(instance_digest(inst));
  cert.relation_name = relation_name;
  cert.treeing = treeing.unordered_edges();
  return cert;
}

CheckReport check_certificate(const CertificateFile& cert,
                              const InstanceFile& inst, int max_tuple_len) {
  if (cert.digest != digest_hex(instance_digest(inst)))
    return {false, "digest-mismatch"};
  FiniteSpace space = inst.space();

  auto factor_list = [&]() {
    std::vector<EquivRelation> out;
    for (const auto& n : cert.factor_names) out.push_back(inst.relation(n));
    return out;
  };

  if (cert.kind == "free-product" || cert.kind == "amalgam") {
    const EquivRelation& r = inst.relation(cert.relation_name);
    std::vector<EquivRelation> factors = factor_list();
    const EquivRelation* core = nullptr;
    EquivRelation core_rel;
    if (cert.kind == "amalgam") {
      core_rel = inst.relation(cert.core_name);
      core = &core_rel;
      if (!is_subrelation(core_rel, intersect(factors[0], factors[1])))
        return {false, "core-not-common"};
    }
    if (cert.accepted) {
      std::vector<EquivRelation> parts = factors;
      parts.push_back(EquivRelation::trivial(space, r.domain()));
      if (!(join(parts) == r)) return {false, "join-differs"};
      if (oracle_find_closing_tuple(factors, core, max_tuple_len))
        return {false, "oracle-found-closing-tuple"};
      return {true, "accept-confirmed"};
    }
    ReducedTuple t{cert.tuple_points, cert.tuple_tags};
    if (!oracle_confirm_tuple(t, factors, core))
      return {false, "witness-not-confirmed"};
    return {true, "reject-confirmed"};
  }

  if (cert.kind == "treeing") {
    const EquivRelation& r = inst.relation(cert.relation_name);
    Graphing g(space, cert.treeing);
    if (!is_treeing(g)) return {false, "not-acyclic"};
    if (!(generated_relation(g) == extend_trivially(r)))
      return {false, "does-not-generate"};
    return {true, "treeing-confirmed"};
  }

  if (cert.kind == "kurosh" || cert.kind == "restriction") {
    const EquivRelation& r = inst.relation(cert.relation_name);
    std::vector<EquivRelation> factors = factor_list();
    KuroshDecomposition d;
    for (const auto& rec : cert.factors) {
      if (rec.factor_index < 1 ||
          rec.factor_index > static_cast<int>(factors.size()))
        return {false, "factor-index-out-of-range"};
      DecompFactor f;
      f.factor_index = rec.factor_index;
      f.identity_factor = rec.identity;
      f.conjugator = PartialIso(space, rec.conjugator);
      d.factors.push_back(std::move(f));
    }
    d.treeing = Graphing(space, cert.treeing);
    d.treeing_relation = generated_relation(d.treeing);

    if (cert.kind == "kurosh") {
      const EquivRelation& s = inst.relation(cert.sub_name);
      // Relations are recomputed from the embedded conjugators.
      for (auto& f : d.factors) {
        EquivRelation ext = extend_trivially(factors[f.factor_index - 1]);
        f.relation = intersect(
            conjugate(restrict(ext, f.conjugator.target()), f.conjugator),
            restrict(s, f.conjugator.source()));
      }
      DecompositionCheck chk = check_kurosh(r, factors, s, d);
      if (!chk.ok()) {
        std::string detail = "kurosh-check-failed:";
        if (!chk.factor_formula) detail += " factor-formula";
        if (!chk.generation) detail += " generation";
        if (!chk.freeness) detail += " freeness";
        if (!chk.identity_factors) detail += " identity-factors";
        if (!chk.treeing_valid) detail += " treeing";
        return {false, detail};
      }
      return {true, "kurosh-confirmed"};
    }

    PointSet y(space, cert.restrict_set);
    for (auto& f : d.factors) {
      EquivRelation ext = extend_trivially(factors[f.factor_index - 1]);
      f.relation = conjugate(restrict(ext, f.conjugator.target()), f.conjugator);
    }
    RestrictionDecomposition rd;
    rd.decomposition = std::move(d);
    rd.targets.assign(factors.size(), {});
    for (const auto& f : rd.decomposition.factors)
      rd.targets[f.factor_index - 1].push_back(f.conjugator.target());
    RestrictionCheck chk = check_restriction(r, factors, y, rd);
    if (!chk.ok()) {
      std::string detail = "restriction-check-failed:";
      if (!chk.base.factor_formula) detail += " factor-formula";
      if (!chk.base.generation) detail += " generation";
      if (!chk.base.freeness) detail += " freeness";
      if (!chk.base.identity_factors) detail += " identity-factors";
      if (!chk.base.treeing_valid) detail += " treeing";
      if (!chk.saturation_partition) detail += " saturation-partition";
      return {false, detail};
    }
    return {true, "restriction-confirmed"};
  }

  return {false, "unknown-kind"};
}

}  // namespace arbo

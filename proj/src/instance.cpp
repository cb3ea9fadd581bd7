#include "arbo/instance.hpp"

#include <algorithm>
#include <sstream>

namespace arbo {

const EquivRelation* InstanceFile::find_relation(const std::string& name) const {
  for (const auto& [n, r] : relations)
    if (n == name) return &r;
  return nullptr;
}

const EquivRelation& InstanceFile::relation(const std::string& name) const {
  const EquivRelation* r = find_relation(name);
  if (!r) fail(ErrorKind::ValidationError, "unknown relation " + name);
  return *r;
}

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(uint64_t d) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[d & 0xf];
    d >>= 4;
  }
  return out;
}

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
    fail(ErrorKind::ParseError, "line " + std::to_string(lineno) +
                                    ": expected a number, got '" + tok + "'");
  }
  if (pos != tok.size())
    fail(ErrorKind::ParseError,
         "line " + std::to_string(lineno) + ": trailing junk in '" + tok + "'");
  return v;
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  InstanceFile inst;
  bool saw_space = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "space") {
      if (toks.size() != 2)
        fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": space <n>");
      inst.space_size = parse_int(toks[1], lineno);
      if (inst.space_size < 1)
        fail(ErrorKind::ValidationError, "space size must be positive");
      saw_space = true;
    } else if (key == "relation") {
      if (!saw_space || toks.size() < 3 || toks[2] != "domain")
        fail(ErrorKind::ParseError, "line " + std::to_string(lineno) +
                                        ": relation <name> domain ... classes ...");
      std::string name = toks[1];
      size_t i = 3;
      std::vector<int> domain;
      while (i < toks.size() && toks[i] != "classes")
        domain.push_back(parse_int(toks[i++], lineno));
      std::vector<std::vector<int>> classes;
      if (i < toks.size()) {
        ++i;  // skip "classes"
        classes.emplace_back();
        for (; i < toks.size(); ++i) {
          if (toks[i] == "|")
            classes.emplace_back();
          else
            classes.back().push_back(parse_int(toks[i], lineno));
        }
        if (!classes.empty() && classes.back().empty()) classes.pop_back();
      }
      FiniteSpace space(inst.space_size);
      PointSet dom(space, domain);
      if (dom.size() != static_cast<int>(domain.size()))
        fail(ErrorKind::ValidationError, "domain point repeated");
      std::vector<int> klass_of(inst.space_size, -1);
      for (const auto& cls : classes) {
        if (cls.empty()) fail(ErrorKind::ValidationError, "empty class");
        int rep = *std::min_element(cls.begin(), cls.end());
        for (int p : cls) {
          if (p < 0 || p >= inst.space_size)
            fail(ErrorKind::ValidationError, "point out of range", {p});
          if (!dom.contains(p))
            fail(ErrorKind::ValidationError, "class point outside domain", {p});
          if (klass_of[p] != -1)
            fail(ErrorKind::ValidationError, "partition repeats a point", {p});
          klass_of[p] = rep;
        }
      }
      for (int p : dom.members())
        if (klass_of[p] == -1) klass_of[p] = p;  // implied singleton
      inst.relations.emplace_back(
          name, EquivRelation::from_class_map(space, std::move(klass_of)));
    } else if (key == "iso") {
      if (!saw_space || toks.size() < 3 || toks[2] != "pairs")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": iso <name> pairs a:b ...");
      std::vector<std::pair<int, int>> pairs;
      for (size_t i = 3; i < toks.size(); ++i) {
        size_t colon = toks[i].find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::ParseError,
               "line " + std::to_string(lineno) + ": pair must be a:b");
        pairs.emplace_back(parse_int(toks[i].substr(0, colon), lineno),
                           parse_int(toks[i].substr(colon + 1), lineno));
      }
      inst.isos.emplace_back(toks[1], PartialIso(inst.space(), pairs));
    } else if (key == "graphing") {
      if (!saw_space || toks.size() < 3 || toks[2] != "pairs")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": graphing <name> pairs a-b ...");
      std::vector<std::pair<int, int>> pairs;
      for (size_t i = 3; i < toks.size(); ++i) {
        size_t dash = toks[i].find('-');
        if (dash == std::string::npos)
          fail(ErrorKind::ParseError,
               "line " + std::to_string(lineno) + ": edge must be a-b");
        pairs.emplace_back(parse_int(toks[i].substr(0, dash), lineno),
                           parse_int(toks[i].substr(dash + 1), lineno));
      }
      inst.graphings.emplace_back(toks[1], Graphing(inst.space(), pairs));
    } else if (key == "free") {
      // free R = R1 R2 ...
      if (toks.size() < 4 || toks[2] != "=")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": free <R> = <factors...>");
      inst.free_relation = toks[1];
      inst.free_factors.assign(toks.begin() + 3, toks.end());
    } else if (key == "amalgam") {
      // amalgam R = R1 R2 over R3
      if (toks.size() != 7 || toks[2] != "=" || toks[5] != "over")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": amalgam <R> = <R1> <R2> over <R3>");
      inst.amalgam_relation = toks[1];
      inst.amalgam_r1 = toks[3];
      inst.amalgam_r2 = toks[4];
      inst.amalgam_core = toks[6];
    } else if (key == "sub") {
      if (toks.size() != 4 || toks[2] != "of")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": sub <S> of <R>");
      inst.sub_name = toks[1];
      inst.sub_of = toks[3];
    } else if (key == "restrict") {
      std::vector<int> pts;
      for (size_t i = 1; i < toks.size(); ++i)
        pts.push_back(parse_int(toks[i], lineno));
      inst.restrict_set = pts;
    } else {
      fail(ErrorKind::ParseError,
           "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!saw_space) fail(ErrorKind::ParseError, "missing space declaration");
  // Named references must resolve.
  auto need = [&](const std::string& n) {
    if (!n.empty() && !inst.find_relation(n))
      fail(ErrorKind::ValidationError, "undeclared relation " + n);
  };
  need(inst.free_relation);
  for (const auto& f : inst.free_factors) need(f);
  need(inst.amalgam_relation);
  need(inst.amalgam_r1);
  need(inst.amalgam_r2);
  need(inst.amalgam_core);
  need(inst.sub_name);
  need(inst.sub_of);
  if (inst.restrict_set)
    for (int p : *inst.restrict_set)
      if (p < 0 || p >= inst.space_size)
        fail(ErrorKind::ValidationError, "restrict point out of range", {p});
  return inst;
}

std::string serialize_instance(const InstanceFile& inst) {
  std::ostringstream out;
  out << "space " << inst.space_size << "\n";
  auto rels = inst.relations;
  std::sort(rels.begin(), rels.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [name, r] : rels) {
    out << "relation " << name << " domain";
    for (int p : r.domain().members()) out << ' ' << p;
    out << " classes";
    bool first = true;
    for (int rep : r.class_reps()) {
      if (!first) out << " |";
      first = false;
      for (int p : r.class_members(rep)) out << ' ' << p;
    }
    out << "\n";
  }
  auto isos = inst.isos;
  std::sort(isos.begin(), isos.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [name, phi] : isos) {
    out << "iso " << name << " pairs";
    for (auto [x, y] : phi.pairs()) out << ' ' << x << ':' << y;
    out << "\n";
  }
  auto gs = inst.graphings;
  std::sort(gs.begin(), gs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [name, g] : gs) {
    out << "graphing " << name << " pairs";
    for (auto [x, y] : g.unordered_edges()) out << ' ' << x << '-' << y;
    out << "\n";
  }
  if (!inst.free_relation.empty()) {
    out << "free " << inst.free_relation << " =";
    for (const auto& f : inst.free_factors) out << ' ' << f;
    out << "\n";
  }
  if (!inst.amalgam_relation.empty())
    out << "amalgam " << inst.amalgam_relation << " = " << inst.amalgam_r1 << ' '
        << inst.amalgam_r2 << " over " << inst.amalgam_core << "\n";
  if (!inst.sub_name.empty())
    out << "sub " << inst.sub_name << " of " << inst.sub_of << "\n";
  if (inst.restrict_set) {
    out << "restrict";
    for (int p : *inst.restrict_set) out << ' ' << p;
    out << "\n";
  }
  return out.str();
}

}  // namespace arbo

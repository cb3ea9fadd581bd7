#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "arbo/certificate.hpp"
#include "arbo/cli.hpp"
#include "arbo/generator.hpp"
#include "arbo/kurosh.hpp"
#include "arbo/verify.hpp"
#include "fixtures.hpp"

using namespace arbo;
using namespace arbo::fixtures;

namespace {

std::string efree_text() {
  return "space 4\n"
         "relation R domain 0 1 2 3 classes 0 1 2 | 3\n"
         "relation R1 domain 0 1 2 3 classes 0 1 | 2 | 3\n"
         "relation R2 domain 0 1 2 3 classes 0 | 1 2 | 3\n"
         "free R = R1 R2\n";
}

std::string ecycle_text() {
  return "space 4\n"
         "relation R domain 0 1 2 3 classes 0 1 2 3\n"
         "relation R1 domain 0 1 2 3 classes 0 1 | 2 3\n"
         "relation R2 domain 0 1 2 3 classes 1 2 | 3 0\n"
         "free R = R1 R2\n";
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& text = "") {
    path = std::string("/tmp/arbo_test_") + name;
    if (!text.empty()) {
      std::ofstream out(path);
      out << text;
    }
  }
  std::string read() const {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("instance parse and round-trip") {
  InstanceFile inst = parse_instance(efree_text());
  CHECK(inst.relation("R") == efree_r());
  CHECK(inst.relation("R1") == efree_r1());
  CHECK(inst.free_factors == std::vector<std::string>{"R1", "R2"});
  // serialize(parse(t)) is the canonical form, and a fixed point.
  std::string canon = serialize_instance(inst);
  CHECK(serialize_instance(parse_instance(canon)) == canon);
  // Implied singletons are made explicit.
  InstanceFile implied = parse_instance(
      "space 3\nrelation A domain 0 1 2 classes 0 1\n");
  CHECK(implied.relation("A") == rel(FiniteSpace(3), {{0, 1}, {2}}));
  // Isos and graphings round-trip too.
  InstanceFile with_iso = parse_instance(
      "space 4\niso phi pairs 0:2 1:3\ngraphing G pairs 0-1 1-2\n");
  std::string canon2 = serialize_instance(with_iso);
  CHECK(serialize_instance(parse_instance(canon2)) == canon2);
}

TEST_CASE("instance validation errors") {
  CHECK_THROWS_AS(parse_instance("space 4\nrelation A domain 0 1 classes 0 1 | 1\n"),
                  Error);  // repeated point
  CHECK_THROWS_AS(parse_instance("space 4\nrelation A domain 0 9 classes 0 9\n"),
                  Error);  // out of range
  CHECK_THROWS_AS(parse_instance("space 4\nrelation A domain 0 classes 0 1\n"),
                  Error);  // class outside domain
  CHECK_THROWS_AS(parse_instance("bogus 4\n"), Error);
  CHECK_THROWS_AS(parse_instance("space 4\nfree R = R1\n"), Error);  // undeclared
}

TEST_CASE("generator determinism and soundness") {
  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.space_size = 8;
  cfg.factor_count = 3;
  SUBCASE("same seed, identical bytes") {
    CHECK(serialize_instance(gen_free_product(cfg)) ==
          serialize_instance(gen_free_product(cfg)));
    CHECK(serialize_instance(gen_amalgam(cfg)) ==
          serialize_instance(gen_amalgam(cfg)));
  }
  SUBCASE("declared structures verify") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
      GeneratorConfig c = cfg;
      c.seed = seed;
      c.space_size = 2 + static_cast<int>(seed % 9);
      InstanceFile inst = gen_free_product(c);
      std::vector<EquivRelation> factors;
      for (const auto& n : inst.free_factors) factors.push_back(inst.relation(n));
      CHECK(verify_free_product(inst.relation("R"), factors).accepted);
    }
  }
  SUBCASE("perturbed instances reject") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
      GeneratorConfig c = cfg;
      c.seed = seed;
      c.space_size = 3 + static_cast<int>(seed % 8);
      InstanceFile inst = gen_nonfree(c);
      std::vector<EquivRelation> factors;
      for (const auto& n : inst.free_factors) factors.push_back(inst.relation(n));
      CHECK_FALSE(verify_free_product(inst.relation("R"), factors).accepted);
    }
  }
  SUBCASE("sub-relation density endpoints") {
    EquivRelation r = efree_r();
    CHECK(gen_subrelation(9, r, 0.0) == EquivRelation::trivial_full(x4()));
    CHECK(gen_subrelation(9, r, 1.0) == r);
    for (uint64_t s = 0; s < 20; ++s)
      CHECK(is_subrelation(gen_subrelation(s, r, 0.5), r));
  }
}

TEST_CASE("certificate round-trip and check") {
  InstanceFile inst = parse_instance(efree_text());
  SUBCASE("free-product accept certificate") {
    ProductCheck pc = verify_free_product(
        inst.relation("R"), {inst.relation("R1"), inst.relation("R2")});
    CertificateFile cert = make_free_certificate(inst, pc);
    std::string text = serialize_certificate(cert);
    CertificateFile back = parse_certificate(text);
    CHECK(serialize_certificate(back) == text);
    CheckReport rep = check_certificate(back, inst);
    CHECK(rep.ok);
  }
  SUBCASE("reject certificate with confirmed witness") {
    InstanceFile cyc = parse_instance(ecycle_text());
    ProductCheck pc = verify_free_product(
        cyc.relation("R"), {cyc.relation("R1"), cyc.relation("R2")});
    REQUIRE_FALSE(pc.accepted);
    CertificateFile cert = make_free_certificate(cyc, pc);
    CHECK(check_certificate(cert, cyc).ok);
    // Tampered witness fails.
    cert.tuple_points[1] = 2;
    CHECK_FALSE(check_certificate(cert, cyc).ok);
  }
  SUBCASE("digest binding") {
    ProductCheck pc = verify_free_product(
        inst.relation("R"), {inst.relation("R1"), inst.relation("R2")});
    CertificateFile cert = make_free_certificate(inst, pc);
    InstanceFile other = parse_instance(ecycle_text());
    CheckReport rep = check_certificate(cert, other);
    CHECK_FALSE(rep.ok);
    CHECK(rep.detail == "digest-mismatch");
  }
  SUBCASE("kurosh certificate checks and survives the round-trip") {
    InstanceFile bound = inst;
    attach_subrelation(bound, "R", 7, 0.5);
    KuroshDecomposition d =
        kurosh(bound.relation("R"),
               {bound.relation("R1"), bound.relation("R2")},
               bound.relation("S"));
    CertificateFile cert = make_kurosh_certificate(bound, d);
    std::string text = serialize_certificate(cert);
    CheckReport rep = check_certificate(parse_certificate(text), bound);
    CHECK(rep.ok);
  }
}

TEST_CASE("cli verify-free exit codes") {
  TempFile efree("efree.txt", efree_text());
  TempFile ecycle("ecycle.txt", ecycle_text());
  std::string text;
  CHECK(run({"verify-free", "--in", efree.path}, &text) == 0);
  CHECK(text.find("accept") != std::string::npos);
  CHECK(run({"verify-free", "--in", ecycle.path}, &text) == 1);
  CHECK(text.find("(0,1,2,3,0)") != std::string::npos);
  CHECK(run({"verify-free", "--in", "/tmp/arbo_no_such_file"}, &text) == 2);
}

TEST_CASE("cli kurosh then check") {
  InstanceFile inst = parse_instance(efree_text());
  attach_subrelation(inst, "R", 3, 0.6);
  TempFile in("kin.txt", serialize_instance(inst));
  TempFile cert("kcert.txt");
  std::string text;
  CHECK(run({"kurosh", "--in", in.path, "--sub", "S", "--out", cert.path},
            &text) == 0);
  CHECK(run({"check", "--in", in.path, "--cert", cert.path}, &text) == 0);
  CHECK(text.find("kurosh-confirmed") != std::string::npos);
  // Tampering with the instance flips the digest check to an input error.
  TempFile other("kother.txt", ecycle_text());
  CHECK(run({"check", "--in", other.path, "--cert", cert.path}, &text) == 2);
}

TEST_CASE("cli validate, bass-serre, extract-treeing, desingularize") {
  TempFile efree("e2.txt", efree_text());
  std::string text;
  CHECK(run({"validate", "--in", efree.path}, &text) == 0);
  CHECK(run({"bass-serre", "--in", efree.path}, &text) == 0);
  CHECK(text.find("tree field: yes") != std::string::npos);
  TempFile ecycle("e3.txt", ecycle_text());
  CHECK(run({"bass-serre", "--in", ecycle.path}, &text) == 1);

  InstanceFile inst = parse_instance(efree_text());
  inst.relations.emplace_back("S", esub_s());
  inst.sub_name = "S";
  inst.sub_of = "R";
  TempFile sub("e4.txt", serialize_instance(inst));
  TempFile tcert("e4cert.txt");
  CHECK(run({"extract-treeing", "--in", sub.path, "--sub", "S", "--out",
             tcert.path},
            &text) == 0);
  CHECK(text.find("0-2") != std::string::npos);
  CHECK(run({"check", "--in", sub.path, "--cert", tcert.path}, &text) == 0);
  CHECK(run({"desingularize", "--in", sub.path, "--sub", "S"}, &text) == 0);
  CHECK(text.find("validation: ok") != std::string::npos);
}

TEST_CASE("cli gen determinism and batch") {
  TempFile a("gen_a.txt"), b("gen_b.txt");
  std::string text;
  CHECK(run({"gen", "--seed", "5", "--size", "8", "--factors", "3", "--kind",
             "free", "--out", a.path},
            &text) == 0);
  CHECK(run({"gen", "--seed", "5", "--size", "8", "--factors", "3", "--kind",
             "free", "--out", b.path},
            &text) == 0);
  CHECK(a.read() == b.read());
  CHECK(run({"batch", "--seed", "0", "--count", "8", "--size", "7",
             "--factors", "2", "--kind", "free"},
            &text) == 0);
  CHECK(text.find("all agree") != std::string::npos);
  CHECK(run({"batch", "--seed", "0", "--count", "6", "--size", "6", "--kind",
             "amalgam"},
            &text) == 0);
}

TEST_CASE("cli restrict") {
  InstanceFile inst = parse_instance(efree_text());
  inst.restrict_set = std::vector<int>{0, 3};
  TempFile in("r1.txt", serialize_instance(inst));
  TempFile cert("r1cert.txt");
  std::string text;
  CHECK(run({"restrict", "--in", in.path, "--out", cert.path}, &text) == 0);
  CHECK(run({"check", "--in", in.path, "--cert", cert.path}, &text) == 0);
  CHECK(text.find("restriction-confirmed") != std::string::npos);
}

TEST_CASE("cli format gate") {
  TempFile efree("fmt.txt", efree_text());
  std::string text;
  CHECK(run({"verify-free", "--in", efree.path, "--format", "json"}, &text) == 2);
}

#ifndef ARBO_CERTIFICATE_HPP
#define ARBO_CERTIFICATE_HPP

#include <string>
#include <vector>

#include "arbo/instance.hpp"
#include "arbo/kurosh.hpp"
#include "arbo/reduced_tuple.hpp"

namespace arbo {

/// Self-contained certificate bound to an instance by digest. Conjugators and
/// treeings are embedded as pair lists; relations are recomputed by `check`.
struct CertificateFile {
  std::string kind;  // free-product | amalgam | kurosh | restriction | treeing
  std::string digest;
  bool accepted = true;

  std::string relation_name;              // subject relation
  std::vector<std::string> factor_names;  // free product factors
  std::string core_name;                  // amalgam core
  std::string sub_name;                   // kurosh sub-relation
  std::vector<int> restrict_set;          // restriction set

  struct FactorRec {
    int factor_index = 0;
    bool identity = false;
    std::vector<std::pair<int, int>> conjugator;
  };
  std::vector<FactorRec> factors;
  std::vector<std::pair<int, int>> treeing;  // unordered edge list
  std::vector<int> tuple_points;             // rejection witness
  std::vector<int> tuple_tags;
};

std::string serialize_certificate(const CertificateFile& cert);
CertificateFile parse_certificate(const std::string& text);

CertificateFile make_free_certificate(const InstanceFile& inst,
                                      const ProductCheck& result);
CertificateFile make_amalgam_certificate(const InstanceFile& inst,
                                         const ProductCheck& result);
CertificateFile make_kurosh_certificate(const InstanceFile& inst,
                                        const KuroshDecomposition& d);
CertificateFile make_restriction_certificate(const InstanceFile& inst,
                                             const RestrictionDecomposition& d);
CertificateFile make_treeing_certificate(const InstanceFile& inst,
                                         const std::string& relation_name,
                                         const Graphing& treeing);

struct CheckReport {
  bool ok = false;
  std::string detail;
};

/// Independent re-verification using only the relation algebra and the
/// bounded tuple oracle; the certificate must match the instance digest.
CheckReport check_certificate(const CertificateFile& cert,
                              const InstanceFile& inst, int max_tuple_len = 0);

}  // namespace arbo

#endif

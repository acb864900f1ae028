#pragma once

#include "netwave/boundary.hpp"
#include "netwave/coefficients.hpp"
#include "netwave/forms.hpp"
#include "netwave/system.hpp"

namespace netwave {

/// Why a verdict was reached: a short rule slug, free-text detail, and the
/// most binding numerical margin (negative margins mean a near-threshold
/// decision).
struct Evidence {
  std::string rule;
  std::string detail;
  double margin = 0.0;
};

struct VertexDetail {
  std::string vertex;
  int dim_y = 0;
  ConeClass y_class = ConeClass::Null;
  ConeClass adjoint_class = ConeClass::Null;
};

struct WellPosednessReport {
  Verdict group = Verdict::Undetermined;
  Verdict unitary_group = Verdict::Undetermined;
  Verdict quasi_contractive_semigroup = Verdict::Undetermined;
  Verdict contractive_semigroup = Verdict::Undetermined;
  Verdict real = Verdict::Undetermined;
  Verdict positive = Verdict::Undetermined;

  Evidence group_evidence, unitary_evidence, quasi_contractive_evidence,
      contractive_evidence, real_evidence, positive_evidence;

  /// Quasi-dissipativity bound: max_e sup_x ||(QM)'||/2 plus the zero-order
  /// contribution max_e sup_x ||QN + (QN)*||/2.
  double omega = 0.0;
  /// Energy is flagged conserved for the simulator when the group is unitary.
  bool energy_conserved = false;

  AssumptionReport assumptions;
  std::vector<VertexDetail> vertex_details;           // local conditions
  std::optional<LocalDimensionReport> dimension;      // local conditions
  std::optional<GlobalConditionReport> global_report; // global conditions
  std::optional<ConeClass> global_y_class;
  std::vector<std::string> notes;
};

/// Full decision ladder. Throws Error when the standing assumptions fail
/// (the report would be meaningless); every other outcome is a verdict.
WellPosednessReport classify(const System& sys);

Verdict check_unitary(const System& sys);
Verdict check_contractive(const System& sys);
Verdict check_real(const System& sys);
Verdict check_positive(const System& sys);

}  // namespace netwave

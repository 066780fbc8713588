#include "lshe/report.hpp"

namespace lshe {

nlohmann::json to_json(const EstimateReport& report) {
  nlohmann::json j;
  j["method"] = report.method;
  j["estimate"] = report.estimate;
  j["std_error"] = report.std_error;
  j["std_error_kind"] = report.std_error_kind;
  j["p"] = report.p;
  j["m"] = report.budget;
  j["record_count"] = report.record_count;
  if (report.profile) {
    j["n_prime"] = {{"1", report.profile->count(1)},
                    {"2", report.profile->count(2)},
                    {"3", report.profile->count(3)},
                    {"4plus", report.profile->count_at_least(4)}};
  } else {
    j["n_prime"] = nullptr;
  }
  if (report.clique_counts) {
    j["n_star"] = {{"1", report.clique_counts->singletons},
                   {"2", report.clique_counts->pairs},
                   {"3", report.clique_counts->triples}};
  } else {
    j["n_star"] = nullptr;
  }
  j["seed"] = report.seed;
  j["elapsed_ms"] = report.elapsed_ms;
  j["degenerate"] = report.degenerate;
  if (!report.method_aliases.empty()) j["method_aliases"] = report.method_aliases;
  if (report.reduction_ratio) j["reduction_ratio"] = *report.reduction_ratio;
  return j;
}

}  // namespace lshe

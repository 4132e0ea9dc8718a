#include "cdcform/formulation.hpp"

#include <algorithm>
#include <string>

#include "cdcform/error.hpp"

namespace cdcform {

std::string_view to_string(Pipeline p) {
  return p == Pipeline::General ? "general" : "closed-form";
}

Pipeline parse_pipeline(std::string_view text) {
  if (text == "general") return Pipeline::General;
  if (text == "closed-form") return Pipeline::ClosedForm;
  throw Error(ErrorCode::InvalidInput, "unknown pipeline \"" + std::string(text) + "\"");
}

bool same_system(const Formulation& a, const Formulation& b) {
  return a.n_lambda == b.n_lambda && a.r_z == b.r_z &&
         a.equalities == b.equalities && a.general_rows == b.general_rows &&
         a.z_bounds == b.z_bounds;
}

void sort_general_rows(Formulation& f) {
  std::sort(f.general_rows.begin(), f.general_rows.end(),
            [](const PairedRow& x, const PairedRow& y) { return x.normal < y.normal; });
}

}  // namespace cdcform

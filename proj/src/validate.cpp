#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qhd/io.hpp"
#include "qhd/verification.hpp"

namespace qhd {

namespace {

int validate_poiseuille(const std::filesystem::path& out_dir) {
  const auto rep = verification::poiseuille_fixed_point(100.0, 2.0, 0.025, 1000);
  const bool velocity_ok = rep.max_velocity_error < 1e-3;
  const bool pressure_ok = rep.final_delta_p < 1e-4;

  nlohmann::json doc;
  doc["case"] = "poiseuille";
  doc["n_steps"] = rep.n_steps;
  doc["max_velocity_error"] = rep.max_velocity_error;
  doc["final_delta_p"] = rep.final_delta_p;
  doc["pass"] = velocity_ok && pressure_ok;
  std::ofstream(out_dir / "validate_poiseuille.json") << doc.dump(2) << '\n';

  std::printf("poiseuille fixed point: max|u-u0| = %.3e (< 1e-3), "
              "delta_p = %.3e (< 1e-4) -> %s\n",
              rep.max_velocity_error, rep.final_delta_p,
              velocity_ok && pressure_ok ? "PASS" : "FAIL");
  return velocity_ok && pressure_ok ? exit_code::ok : exit_code::not_converged;
}

int validate_manufactured(const std::filesystem::path& out_dir) {
  const std::vector<int> ladder{17, 33, 65};
  const std::vector<verification::OrderStudy> studies{
      verification::momentum_rhs_order(ladder, 0.01),
      verification::divergence_order(ladder),
      verification::assemble_rhs_order(ladder, 0.01),
      verification::poisson_order(ladder),
  };

  std::ofstream csv(out_dir / "validate_manufactured.csv");
  csv << "study,h,max_error,ratio\n";
  bool all_ok = true;
  for (const auto& s : studies) {
    for (std::size_t k = 0; k < s.h.size(); ++k) {
      csv << s.name << ',' << s.h[k] << ',' << s.error[k] << ',';
      if (k > 0) csv << s.ratio[k - 1];
      csv << '\n';
    }
    const bool ok = s.ratios_within(3.5, 4.5);
    all_ok = all_ok && ok;
    std::printf("%s: error ratios per halving =", s.name.c_str());
    for (double r : s.ratio) std::printf(" %.2f", r);
    std::printf(" (expect within [3.5, 4.5]) -> %s\n", ok ? "PASS" : "FAIL");
  }
  return all_ok ? exit_code::ok : exit_code::not_converged;
}

} // namespace

int cmd_validate(const std::string& case_name,
                 const std::filesystem::path& out_dir) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (case_name == "poiseuille") return validate_poiseuille(out_dir);
    if (case_name == "manufactured") return validate_manufactured(out_dir);
    std::fprintf(stderr, "[qhd] unknown validation case: %s\n", case_name.c_str());
    return exit_code::usage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[qhd] error: %s\n", e.what());
    return exit_code::usage;
  }
}

} // namespace qhd

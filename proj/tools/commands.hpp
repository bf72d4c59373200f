#pragma once

#include <string>
#include <vector>

namespace twophase::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct CommonFlags {
  std::string config;
  std::string out;
  bool force = false;
  int threads = 1;
};

int cmd_solve(const CommonFlags& flags);
int cmd_sweep_k(const CommonFlags& flags);
int cmd_freeboundary(const CommonFlags& flags, const std::string& input,
                     const std::vector<double>& epsilons);
int cmd_diagnose(const CommonFlags& flags, const std::string& solution_dir);
int cmd_oracle1d(double a, double b, double gamma_plus, double gamma_minus,
                 const std::string& order_label, long grid_points);

}  // namespace twophase::cli

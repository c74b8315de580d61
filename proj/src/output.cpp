#include "vortexsim/output.hpp"

#include <sstream>

#include "vortexsim/util.hpp"

namespace vortexsim::output {

namespace {

std::string header(const RunMeta& meta) {
  std::ostringstream os;
  os << "# experiment: " << meta.experiment << "\n";
  os << "# config_hash: " << meta.config_hash << "\n";
  os << "# version: " << meta.version << "\n";
  return os.str();
}

nlohmann::json meta_json(const RunMeta& meta) {
  return {{"experiment", meta.experiment},
          {"config_hash", meta.config_hash},
          {"version", meta.version}};
}

void append(std::ostringstream& os, double v) { os << util::format_double(v); }

}  // namespace

std::string trajectory_csv(const dyn::Trajectory& traj, const RunMeta& meta) {
  std::ostringstream os;
  os << header(meta);
  const bool five = !traj.excited_pop.empty();
  os << "tau,t_seconds,re_alpha,im_alpha,re_beta,im_beta,re_gamma,im_gamma,"
        "pop_alpha,pop_beta,pop_gamma,transfer_f";
  if (five) os << ",pop_excited";
  os << "\n";
  for (std::size_t i = 0; i < traj.tau.size(); ++i) {
    const dyn::SpinorAmplitudes& s = traj.states[i];
    append(os, traj.tau[i]);
    os << ',';
    append(os, traj.t_seconds[i]);
    for (double v : {s.alpha.real(), s.alpha.imag(), s.beta.real(), s.beta.imag(),
                     s.gamma.real(), s.gamma.imag(), std::norm(s.alpha), std::norm(s.beta),
                     std::norm(s.gamma), traj.f_values[i]}) {
      os << ',';
      append(os, v);
    }
    if (five) {
      os << ',';
      append(os, traj.excited_pop[i]);
    }
    os << "\n";
  }
  return os.str();
}

nlohmann::json trajectory_json(const dyn::Trajectory& traj, const RunMeta& meta) {
  nlohmann::json j;
  j["meta"] = meta_json(meta);
  j["meta"]["norm_drift"] = traj.norm_drift;
  j["meta"]["steps"] = traj.steps;
  j["meta"]["omega0_rad_per_s"] = traj.omega0;
  if (!traj.excited_pop.empty()) j["meta"]["max_excited_population"] = traj.max_excited;
  j["tau"] = traj.tau;
  j["t_seconds"] = traj.t_seconds;
  nlohmann::json amp = nlohmann::json::array();
  nlohmann::json pops = nlohmann::json::array();
  for (const dyn::SpinorAmplitudes& s : traj.states) {
    amp.push_back({{"re_alpha", s.alpha.real()},
                   {"im_alpha", s.alpha.imag()},
                   {"re_beta", s.beta.real()},
                   {"im_beta", s.beta.imag()},
                   {"re_gamma", s.gamma.real()},
                   {"im_gamma", s.gamma.imag()}});
    pops.push_back({std::norm(s.alpha), std::norm(s.beta), std::norm(s.gamma)});
  }
  j["amplitudes"] = amp;
  j["populations"] = pops;
  j["transfer_f"] = traj.f_values;
  if (!traj.excited_pop.empty()) j["pop_excited"] = traj.excited_pop;
  return j;
}

std::string sweep_csv(const std::vector<dyn::SweepPoint>& points, const RunMeta& meta) {
  std::ostringstream os;
  os << header(meta);
  os << "separation,final_f,pop_beta,pop_gamma\n";
  for (const dyn::SweepPoint& p : points) {
    append(os, p.separation);
    os << ',';
    append(os, p.final_f);
    os << ',';
    append(os, p.pop_beta);
    os << ',';
    append(os, p.pop_gamma);
    os << "\n";
  }
  return os.str();
}

nlohmann::json sweep_json(const std::vector<dyn::SweepPoint>& points, const RunMeta& meta) {
  nlohmann::json j;
  j["meta"] = meta_json(meta);
  nlohmann::json rows = nlohmann::json::array();
  for (const dyn::SweepPoint& p : points) {
    rows.push_back({{"separation", p.separation},
                    {"final_f", p.final_f},
                    {"pop_beta", p.pop_beta},
                    {"pop_gamma", p.pop_gamma}});
  }
  j["points"] = rows;
  return j;
}

std::string grid_csv(const detect::DensityGrid& grid, const RunMeta& meta) {
  std::ostringstream os;
  os << header(meta);
  os << "x,y,density\n";
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      append(os, grid.x_of(ix));
      os << ',';
      append(os, grid.y_of(iy));
      os << ',';
      append(os, grid.at(ix, iy));
      os << "\n";
    }
  }
  return os.str();
}

nlohmann::json grid_json(const detect::DensityGrid& grid, const RunMeta& meta) {
  nlohmann::json j;
  j["meta"] = meta_json(meta);
  j["nx"] = grid.nx;
  j["ny"] = grid.ny;
  j["extent"] = grid.extent;
  j["row_major"] = true;
  j["values"] = grid.values;
  return j;
}

nlohmann::json with_meta(nlohmann::json body, const RunMeta& meta) {
  body["meta"] = meta_json(meta);
  return body;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  util::atomic_write_file(path, content);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& body) {
  util::atomic_write_file(path, body.dump(2) + "\n");
}

}  // namespace vortexsim::output

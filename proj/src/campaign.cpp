#include "stablab/campaign.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stablab/estimates.hpp"
#include "stablab/geometry.hpp"
#include "stablab/hardy.hpp"
#include "stablab/quadrature.hpp"
#include "stablab/radial.hpp"
#include "stablab/spectrum.hpp"

namespace stablab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const CampaignJob& require_args(const CampaignJob& job, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!job.args.count(k))
      throw std::invalid_argument("job '" + job.name + "': missing parameter '" + k + "'");
  return job;
}

std::string arg_s(const CampaignJob& job, const std::string& key, const std::string& dflt) {
  auto it = job.args.find(key);
  return it == job.args.end() ? dflt : it->second;
}

double arg_d(const CampaignJob& job, const std::string& key, double dflt) {
  auto it = job.args.find(key);
  if (it == job.args.end()) return dflt;
  std::size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("job '" + job.name + "': bad number for '" + key + "'");
  return v;
}

int arg_i(const CampaignJob& job, const std::string& key, int dflt) {
  return static_cast<int>(arg_d(job, key, dflt));
}

Nonlinearity job_nonlinearity(const CampaignJob& job) {
  return Nonlinearity::from_config(arg_s(job, "f", "exp:1:1"));
}

// --- individual operations -------------------------------------------------

std::string op_solve(const CampaignJob& job, bool& verified) {
  require_args(job, {"n", "lambda"});
  const RadialSolution sol =
      solve_minimal(arg_i(job, "n", 2), job_nonlinearity(job), arg_d(job, "lambda", 1.0),
                    arg_d(job, "tol", 1e-9), arg_d(job, "m0-cap", 20.0), arg_i(job, "steps", 4096));
  verified = std::abs(sol.u.back()) <= arg_d(job, "tol", 1e-9);
  std::ostringstream os;
  write_profile_csv(os, sol);
  return os.str();
}

std::string op_branch(const CampaignJob& job, bool& verified) {
  require_args(job, {"n"});
  const Nonlinearity f = job_nonlinearity(job);
  Mu1Fn mu1;
  if (arg_i(job, "mu1", 1))
    mu1 = [](const RadialSolution& s) { return principal_eigenvalue(s).mu1; };
  const Branch br =
      trace_branch(arg_i(job, "n", 2), f, arg_d(job, "lambda-cap", 1e30),
                   arg_i(job, "points", 64), mu1, arg_d(job, "m0-cap", 12.0),
                   arg_i(job, "steps", 4096));
  verified = !br.points.empty();
  std::ostringstream os;
  write_branch_csv(os, br);
  return os.str();
}

std::string op_stability(const CampaignJob& job, bool& verified) {
  require_args(job, {"n", "lambda"});
  const RadialSolution sol =
      solve_minimal(arg_i(job, "n", 2), job_nonlinearity(job), arg_d(job, "lambda", 1.0), 1e-9,
                    arg_d(job, "m0-cap", 20.0), arg_i(job, "steps", 4096));
  const StabilityReport rep = principal_eigenvalue(sol, arg_i(job, "modes", 1));
  verified = true;
  return rep.to_json() + "\n";
}

std::string op_hardy(const CampaignJob& job, bool& verified) {
  const std::string variant = arg_s(job, "variant", "surface");
  std::ostringstream os;
  os << HardyReport::csv_header() << '\n';
  verified = true;
  auto note = [&](const HardyReport& r) {
    os << r.csv_row() << '\n';
    if (r.slack < -r.eps_disc) verified = false;
  };
  if (variant == "surface") {
    const int n_min = arg_i(job, "n-min", 3), n_max = arg_i(job, "n-max", 10);
    for (int n = n_min; n <= n_max; ++n)
      for (double rho : {0.5, 1.0, 2.0}) {
        const SurfaceHardySet set = surface_hardy(sphere_surface_exact(n, rho));
        note(set.p2);
        note(set.squared);
        if (n - 1 >= 3) note(set.carron);
      }
  } else if (variant == "icosphere") {
    const SurfaceHardySet set =
        surface_hardy(icosphere_surface(arg_d(job, "rho", 1.0), arg_i(job, "subdiv", 4)));
    note(set.p2);
    note(set.squared);
    note(set.carron);
  } else if (variant == "radial") {
    require_args(job, {"n", "lambda", "alpha"});
    const RadialSolution sol =
        solve_minimal(arg_i(job, "n", 2), job_nonlinearity(job), arg_d(job, "lambda", 1.0), 1e-9,
                      20.0, arg_i(job, "steps", 4096));
    const double alpha = arg_d(job, "alpha", 0.0);
    auto g = [](double r) { return 1.0 - r; };
    note(radial_hardy(sol, g, alpha));
    const HardyPair pair = foliated_hardy(sol, g, alpha);
    note(pair.foliated);
    note(pair.manifold);
  } else {
    throw std::invalid_argument("hardy: unknown variant '" + variant + "'");
  }
  return os.str();
}

std::string op_geometry(const CampaignJob& job, bool& verified) {
  const std::string check = arg_s(job, "check", "coarea");
  const int m = arg_i(job, "grid", 161);
  std::ostringstream os;
  if (check == "coarea") {
    const std::string field = arg_s(job, "field", "ball2d");
    ScalarField u, g;
    if (field == "ball2d") {
      u = ScalarField::sample(2, {-1.2, -1.2, 0}, {1.2, 1.2, 0}, {m, m, 1},
                              [](std::array<double, 3> p) { return std::hypot(p[0], p[1]); });
      u.mask_where([](std::array<double, 3> p) { return std::hypot(p[0], p[1]) <= 1.0; });
    } else if (field == "ball3d") {
      u = ScalarField::sample(3, {-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}, {m, m, m},
                              [](std::array<double, 3> p) {
                                return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                              });
      u.mask_where([](std::array<double, 3> p) {
        return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) <= 1.0;
      });
    } else if (field == "square") {
      u = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {m, m, 1},
                              [](std::array<double, 3> p) { return p[0]; });
    } else {
      throw std::invalid_argument("geometry: unknown field '" + field + "'");
    }
    g = u;
    for (double& v : g.values()) v = 1.0;
    if (field == "square")
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) g.at(i, j) = g.position(i, j)[1];
    const InequalityReport rep = coarea_check(u, g, arg_i(job, "levels", 24));
    verified = rep.params.at("relative_gap") <= arg_d(job, "tol", 0.02);
    os << rep.to_json() << '\n';
  } else if (check == "ibp") {
    ScalarField u = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                        [](std::array<double, 3> p) { return std::hypot(p[0], p[1]); });
    u.mask_where([](std::array<double, 3> p) {
      const double r = std::hypot(p[0], p[1]);
      return r >= 1.0 && r <= 2.0;
    });
    auto cutoff = [](double r) {
      auto ramp = [](double t) { return t <= 0 ? 0.0 : (t >= 1 ? 1.0 : t * t * (3 - 2 * t)); };
      return ramp((r - 1.1) / 0.3) * ramp((1.9 - r) / 0.3);
    };
    ScalarField phi = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                          [&](std::array<double, 3> p) {
                                            return p[0] * cutoff(std::hypot(p[0], p[1]));
                                          });
    ScalarField psi = u;
    for (double& v : psi.values()) v = 1.0;
    const InequalityReport rep = ibp_defect(u, phi, psi, arg_i(job, "axis", 0));
    verified = std::abs(rep.slack) <=
               arg_d(job, "tol", 0.05) * (std::abs(rep.lhs) + std::abs(rep.rhs) + 1e-12);
    os << rep.to_json() << '\n';
  } else {
    throw std::invalid_argument("geometry: unknown check '" + check + "'");
  }
  return os.str();
}

std::string op_estimate(const CampaignJob& job, bool& verified) {
  require_args(job, {"which", "n"});
  const std::string which = arg_s(job, "which", "");
  const int n = arg_i(job, "n", 3);
  const Nonlinearity f = job_nonlinearity(job);
  const double lambda = arg_d(job, "lambda", 1.0);
  const double delta = arg_d(job, "delta", 0.2);
  std::ostringstream os;
  verified = true;

  if (which == "alpha") {
    const AlphaAdmissibility a = admissible_alpha(n, arg_i(job, "radial", 1) != 0);
    os << "{\"n\":" << n << ",\"radial\":" << (a.radial ? "true" : "false")
       << ",\"nonempty\":" << (a.nonempty ? "true" : "false") << ",\"lo\":" << fmt_double(a.lo)
       << ",\"hi\":" << fmt_double(a.hi) << "}\n";
    return os.str();
  }

  const RadialSolution sol =
      solve_minimal(n, f, lambda, 1e-9, arg_d(job, "m0-cap", 20.0), arg_i(job, "steps", 4096));
  const StabilityReport stab = principal_eigenvalue(sol);

  if (which == "sz") {
    auto eta = [](double r) { return 1.0 - r; };
    auto deta = [](double) { return -1.0; };
    const InequalityReport rep = curvature_stability_bound(sol, eta, deta, stab);
    verified = rep.slack >= -rep.eps_disc;
    os << rep.to_json() << '\n';
  } else if (which == "weighted") {
    const EstimateReport rep = weighted_dirichlet(sol, arg_d(job, "alpha", 1.5), delta, stab,
                                                  arg_i(job, "override", 0) != 0);
    os << rep.to_json() << '\n';
  } else if (which == "pipeline") {
    const auto links = dirichlet_pipeline(sol, arg_d(job, "alpha", 1.5), delta,
                                          arg_d(job, "epsilon", 0.1), stab);
    for (const auto& l : links) {
      if (l.slack < -l.eps_disc) verified = false;
      os << l.to_json() << '\n';
    }
  } else if (which == "potential") {
    os << potential_bound(sol, delta).to_json() << '\n';
  } else if (which == "linfty") {
    os << linfty_ratio(sol, delta).to_json() << '\n';
  } else if (which == "morrey") {
    const double norm = morrey_norm(sol, arg_i(job, "of-gradient", 1) != 0,
                                    arg_d(job, "p", 2.0), arg_d(job, "lam", 2.5));
    os << "{\"morrey_norm\":" << fmt_double(norm) << "}\n";
  } else if (which == "lp") {
    os << "{\"lp_norm\":" << fmt_double(lp_norm(sol, arg_d(job, "p", 2.0))) << "}\n";
  } else {
    throw std::invalid_argument("estimate: unknown which '" + which + "'");
  }
  return os.str();
}

std::string op_alpha_scan(const CampaignJob& job, bool& verified) {
  const int n_min = arg_i(job, "n-min", 2), n_max = arg_i(job, "n-max", 15);
  std::ostringstream os;
  os << "n,general_lo,general_hi,radial_lo,radial_hi\n";
  for (int n = n_min; n <= n_max; ++n) {
    const AlphaAdmissibility g = admissible_alpha(n, false);
    const AlphaAdmissibility r = admissible_alpha(n, true);
    os << n << ',';
    if (g.nonempty)
      os << fmt_double(g.lo) << ',' << fmt_double(g.hi);
    else
      os << ',';
    os << ',';
    if (r.nonempty)
      os << fmt_double(r.lo) << ',' << fmt_double(r.hi);
    else
      os << ',';
    os << '\n';
  }
  verified = true;
  return os.str();
}

std::string op_singular(const CampaignJob& job, bool& verified) {
  require_args(job, {"n"});
  const int n = arg_i(job, "n", 10);
  const SingularCheck chk = singular_solution_check(n);
  const bool expect_nonneg = 0.25 * (n - 2.0) * (n - 2.0) >= 2.0 * (n - 2.0);  // n >= 10
  verified = chk.max_residual <= 1e-8 && chk.form_nonnegative == expect_nonneg;
  std::ostringstream os;
  os << "{\"n\":" << n << ",\"max_residual\":" << fmt_double(chk.max_residual)
     << ",\"form_nonnegative\":" << (chk.form_nonnegative ? "true" : "false")
     << ",\"min_q\":" << fmt_double(chk.min_q) << ",\"witness_s\":" << fmt_double(chk.witness_s)
     << ",\"hardy_const\":" << fmt_double(chk.hardy_const)
     << ",\"nonlin_const\":" << fmt_double(chk.nonlin_const) << "}\n";
  return os.str();
}

using OpFn = std::string (*)(const CampaignJob&, bool&);

const std::map<std::string, OpFn>& op_table() {
  static const std::map<std::string, OpFn> table = {
      {"solve", op_solve},         {"branch", op_branch},   {"stability", op_stability},
      {"hardy", op_hardy},         {"geometry", op_geometry}, {"estimate", op_estimate},
      {"alpha-scan", op_alpha_scan}, {"singular", op_singular},
  };
  return table;
}

void validate_job(const CampaignJob& job) {
  if (!op_table().count(job.op))
    throw std::invalid_argument("job '" + job.name + "': unknown operation '" + job.op + "'");
  // parameter values must parse as numbers where numeric
  for (const auto& [k, v] : job.args) {
    if (k == "f" || k == "variant" || k == "which" || k == "check" || k == "field") continue;
    try {
      (void)std::stod(v);
    } catch (...) {
      throw std::invalid_argument("job '" + job.name + "': parameter '" + k +
                                  "' is not numeric: '" + v + "'");
    }
  }
}

}  // namespace

Campaign parse_campaign(std::istream& in) {
  Campaign c;
  std::string line, section;
  CampaignJob* current = nullptr;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      if (section.rfind("job:", 0) == 0) {
        c.jobs.push_back({});
        current = &c.jobs.back();
        current->name = trim(section.substr(4));
      } else {
        current = nullptr;
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("campaign config: expected key = value, got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (current == nullptr) {
      c.settings[key] = val;
    } else if (key == "op") {
      current->op = val;
    } else if (key == "output") {
      current->output = val;
    } else {
      current->args[key] = val;
    }
  }
  if (c.settings.count("parallelism")) c.parallelism = std::stoi(c.settings.at("parallelism"));
  return c;
}

Campaign load_campaign(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open campaign config: " + path);
  return parse_campaign(in);
}

std::string run_job(const CampaignJob& job, bool& verified) {
  validate_job(job);
  return op_table().at(job.op)(job, verified);
}

int default_parallelism() {
  if (const char* env = std::getenv("STABLAB_JOBS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

int run_campaign(const Campaign& campaign, const std::string& outdir, std::ostream& log) {
  // Validate everything before running anything.
  try {
    for (const auto& job : campaign.jobs) {
      validate_job(job);
      if (job.output.empty())
        throw std::invalid_argument("job '" + job.name + "': missing output path");
    }
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }

  const int pool = std::max(1, campaign.parallelism > 0 ? campaign.parallelism
                                                        : default_parallelism());
  std::vector<std::string> results(campaign.jobs.size());
  std::vector<std::string> errors(campaign.jobs.size());
  std::vector<char> ok(campaign.jobs.size(), 1);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= campaign.jobs.size()) return;
      bool verified = true;
      try {
        results[idx] = run_job(campaign.jobs[idx], verified);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
        verified = false;
      }
      ok[idx] = verified ? 1 : 0;
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  // Single collector writes outputs in job order.
  std::filesystem::create_directories(outdir);
  bool all_ok = true;
  for (std::size_t i = 0; i < campaign.jobs.size(); ++i) {
    const auto& job = campaign.jobs[i];
    if (!errors[i].empty()) {
      log << "job " << job.name << ": error: " << errors[i] << '\n';
      all_ok = false;
      continue;
    }
    std::ofstream os(std::filesystem::path(outdir) / job.output);
    os << results[i];
    log << "job " << job.name << ": " << (ok[i] ? "ok" : "verification FAILED") << " -> "
        << job.output << '\n';
    if (!ok[i]) all_ok = false;
  }
  return all_ok ? 0 : 1;
}

}  // namespace stablab

// Command-line front end: solves, scans, and verification campaigns.
//
// Exit codes: 0 success, 1 mathematical verification failure, 2 usage or
// configuration error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stablab/campaign.hpp"

namespace {

// Collects flags common to every subcommand into a CampaignJob.
struct JobCli {
  stablab::CampaignJob job;
  std::string output;

  void add_common(CLI::App* cmd) {
    cmd->add_option("--output,-o", output, "output file (default: stdout)");
  }
  void opt(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { job.args[key] = v; }, help);
  }
};

int emit(const stablab::CampaignJob& job, const std::string& output) {
  bool verified = true;
  const std::string text = stablab::run_job(job, verified);
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(output);
    if (!os) {
      std::cerr << "cannot open output file: " << output << '\n';
      return 2;
    }
    os << text;
  }
  if (!verified) {
    std::cerr << "verification failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stablab: stable radial solutions of -Delta u = lambda f(u) on the unit ball,\n"
               "level-set geometry, Hardy inequalities, and a priori estimate checks"};
  app.require_subcommand(1);

  std::vector<std::pair<std::string, JobCli>> clis;
  clis.reserve(16);

  auto add_job_cmd = [&](const std::string& name, const std::string& op,
                         const std::string& help) -> std::pair<CLI::App*, JobCli*> {
    CLI::App* cmd = app.add_subcommand(name, help);
    clis.emplace_back(name, JobCli{});
    JobCli* jc = &clis.back().second;
    jc->job.name = name;
    jc->job.op = op;
    jc->add_common(cmd);
    return {cmd, jc};
  };

  {
    auto [cmd, jc] = add_job_cmd("solve", "solve", "minimal-branch radial solve, CSV r,u,uprime");
    jc->opt(cmd, "--n", "n", "space dimension");
    jc->opt(cmd, "--f", "f", "nonlinearity, e.g. exp:1:1 | power:1:3 | affine:1:0 | tab:file.csv");
    jc->opt(cmd, "--lambda", "lambda", "parameter lambda");
    jc->opt(cmd, "--steps", "steps", "output grid cells (default 4096)");
    jc->opt(cmd, "--tol", "tol", "shooting tolerance (default 1e-9)");
  }
  {
    auto [cmd, jc] = add_job_cmd("branch", "branch", "branch continuation, CSV lambda,u0,mu1");
    jc->opt(cmd, "--n", "n", "space dimension");
    jc->opt(cmd, "--f", "f", "nonlinearity");
    jc->opt(cmd, "--lambda-cap", "lambda-cap", "stop when lambda exceeds this");
    jc->opt(cmd, "--points", "points", "continuation points (default 64)");
    jc->opt(cmd, "--m0-cap", "m0-cap", "largest center value (default 12)");
    jc->opt(cmd, "--steps", "steps", "integration grid");
    jc->opt(cmd, "--mu1", "mu1", "1 = attach principal eigenvalues (default)");
  }
  {
    auto [cmd, jc] = add_job_cmd("stability", "stability",
                                 "principal eigenvalue report as JSON");
    jc->opt(cmd, "--n", "n", "space dimension");
    jc->opt(cmd, "--f", "f", "nonlinearity");
    jc->opt(cmd, "--lambda", "lambda", "parameter lambda");
    jc->opt(cmd, "--modes", "modes", "number of low eigenvalues");
    jc->opt(cmd, "--steps", "steps", "integration grid");
  }
  {
    auto [cmd, jc] = add_job_cmd("hardy", "hardy", "Hardy inequality scans, CSV reports");
    jc->opt(cmd, "--variant", "variant", "surface | icosphere | radial");
    jc->opt(cmd, "--n", "n", "dimension (radial variant)");
    jc->opt(cmd, "--n-min", "n-min", "first dimension (surface scan)");
    jc->opt(cmd, "--n-max", "n-max", "last dimension (surface scan)");
    jc->opt(cmd, "--f", "f", "nonlinearity (radial variant)");
    jc->opt(cmd, "--lambda", "lambda", "parameter lambda (radial variant)");
    jc->opt(cmd, "--alpha", "alpha", "weight exponent");
    jc->opt(cmd, "--rho", "rho", "sphere radius (icosphere)");
    jc->opt(cmd, "--subdiv", "subdiv", "icosphere subdivision level");
  }
  {
    auto [cmd, jc] = add_job_cmd("geometry", "geometry", "coarea / integration-by-parts checks");
    jc->opt(cmd, "--check", "check", "coarea | ibp");
    jc->opt(cmd, "--field", "field", "ball2d | ball3d | square");
    jc->opt(cmd, "--grid", "grid", "nodes per axis");
    jc->opt(cmd, "--levels", "levels", "level slices (coarea)");
    jc->opt(cmd, "--axis", "axis", "axis index (ibp)");
    jc->opt(cmd, "--tol", "tol", "verification tolerance");
  }
  {
    auto [cmd, jc] = add_job_cmd("estimate", "estimate", "stability-driven estimate reports");
    jc->opt(cmd, "--which", "which",
            "sz | weighted | pipeline | potential | linfty | morrey | lp | alpha");
    jc->opt(cmd, "--n", "n", "space dimension");
    jc->opt(cmd, "--f", "f", "nonlinearity");
    jc->opt(cmd, "--lambda", "lambda", "parameter lambda");
    jc->opt(cmd, "--alpha", "alpha", "weight exponent");
    jc->opt(cmd, "--delta", "delta", "boundary collar width");
    jc->opt(cmd, "--epsilon", "epsilon", "absorption parameter (pipeline)");
    jc->opt(cmd, "--p", "p", "Lebesgue/Morrey exponent");
    jc->opt(cmd, "--lam", "lam", "Morrey exponent");
    jc->opt(cmd, "--radial", "radial", "1 = radial admissibility (alpha)");
    jc->opt(cmd, "--override", "override", "1 = override alpha admissibility");
  }
  {
    auto [cmd, jc] = add_job_cmd("alpha-scan", "alpha-scan",
                                 "admissible exponent intervals over a dimension range");
    jc->opt(cmd, "--n-min", "n-min", "first dimension (default 2)");
    jc->opt(cmd, "--n-max", "n-max", "last dimension (default 15)");
  }
  {
    auto [cmd, jc] = add_job_cmd("singular", "singular",
                                 "explicit singular pair residual and stability sweep");
    jc->opt(cmd, "--n", "n", "space dimension");
  }

  std::string campaign_config, campaign_outdir = ".";
  {
    CLI::App* cmd = app.add_subcommand("campaign", "run a job file");
    cmd->add_option("--config,-c", campaign_config, "INI-style campaign file")->required();
    cmd->add_option("--outdir,-d", campaign_outdir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (app.get_subcommand("campaign")->parsed()) {
      const stablab::Campaign c = stablab::load_campaign(campaign_config);
      return stablab::run_campaign(c, campaign_outdir, std::cerr);
    }
    for (auto& [name, jc] : clis)
      if (app.get_subcommand(name)->parsed()) return emit(jc.job, jc.output);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

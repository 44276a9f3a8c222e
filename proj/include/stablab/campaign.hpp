#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace stablab {

// One verification job: an operation name, its parameters, and the output
// file (relative to the campaign output directory).
struct CampaignJob {
  std::string name;
  std::string op;  // solve | branch | stability | hardy | geometry | estimate |
                   // alpha-scan | singular
  std::map<std::string, std::string> args;
  std::string output;
};

struct Campaign {
  std::map<std::string, std::string> settings;  // [settings] section
  std::vector<CampaignJob> jobs;
  int parallelism = 1;
};

// INI-style config:
//   [settings]
//   parallelism = 2
//   [job:name]
//   op = singular
//   n = 10
//   output = singular10.json
Campaign parse_campaign(std::istream& in);
Campaign load_campaign(const std::string& path);

// Validates every job (operation known, parameters parseable) before running
// anything, then runs jobs in a bounded pool and writes outputs in job order.
// Returns 0 on success, 1 when a job reports a verification failure, 2 on
// configuration errors.
int run_campaign(const Campaign& campaign, const std::string& outdir, std::ostream& log);

// Runs a single job and returns its rendered output; `verified` is cleared
// when the job's mathematical check fails. Shared by the CLI subcommands.
std::string run_job(const CampaignJob& job, bool& verified);

// Default parallelism from the environment (STABLAB_JOBS), else 1.
int default_parallelism();

}  // namespace stablab

// CLI front end: compute an invariant from a config file, probe a single
// initial state, or re-verify a result directory by trajectory replay.

#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include <rcis/rcis.hpp>

int main(int argc, char** argv) {
  CLI::App app{"robust controlled invariant sets for monotone systems"};
  app.require_subcommand(1);

  int rc = 0;

  std::string compute_config;
  double compute_epsilon = 0;
  std::string compute_out;
  std::size_t compute_threads = 0;
  auto* compute = app.add_subcommand(
      "compute", "approximate the maximal robust controlled invariant set");
  compute->add_option("--config", compute_config, "run configuration file")
      ->required();
  auto* eps_opt = compute->add_option("--epsilon", compute_epsilon,
                                      "override the target frontier gap");
  auto* out_opt = compute->add_option("--out", compute_out,
                                      "override the output directory");
  auto* thr_opt = compute->add_option(
      "--threads", compute_threads,
      "worker threads for sampling and replays (default: hardware)");
  compute->callback([&] {
    rcis::ComputeOverrides ov;
    if (*eps_opt) ov.epsilon = compute_epsilon;
    if (*out_opt) ov.out_dir = compute_out;
    if (*thr_opt)
      ov.threads = compute_threads;
    else
      ov.threads = std::max(1u, std::thread::hardware_concurrency());
    rc = rcis::cmd_compute(compute_config, ov);
  });

  std::string classify_config, classify_point;
  auto* classify = app.add_subcommand(
      "classify", "classify one initial state as feasible, unsafe, or unknown");
  classify->add_option("--config", classify_config, "run configuration file")
      ->required();
  classify
      ->add_option("--point", classify_point,
                   "initial state, comma separated: \"x1,x2\"")
      ->required();
  classify->callback(
      [&] { rc = rcis::cmd_classify(classify_config, classify_point); });

  std::string verify_dir;
  auto* verify = app.add_subcommand(
      "verify", "replay certificates of a result directory against disturbances");
  verify->add_option("--dir", verify_dir, "result directory written by compute")
      ->required();
  verify->callback([&] { rc = rcis::cmd_verify(verify_dir); });

  CLI11_PARSE(app, argc, argv);
  return rc;
}

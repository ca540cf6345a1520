#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "experiment.hpp"

namespace {

int run_batch(const std::string& dir, bool quiet) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    if (!quiet) std::cerr << "error: batch directory does not exist: " << dir << '\n';
    return album::cli::kExitError;
  }
  std::vector<std::string> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") configs.push_back(entry.path().string());
  }
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    if (!quiet) std::cerr << "error: no .json configs in " << dir << '\n';
    return album::cli::kExitError;
  }

  std::vector<int> codes(configs.size(), album::cli::kExitError);
  std::vector<std::string> logs(configs.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        std::ostringstream log;
        codes[i] = album::cli::run_config_file(configs[i], log, quiet);
        logs[i] = log.str();
      }
    });
  }
  for (auto& t : pool) t.join();

  int worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (!quiet) std::cerr << "[" << configs[i] << "] exit " << codes[i] << '\n' << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive augmented Lagrangian experiment runner"};
  std::string config;
  std::string batch;
  bool quiet = false;
  app.add_option("config", config, "Experiment config (JSON)");
  app.add_option("--batch", batch, "Run every .json config in a directory");
  app.add_flag("--quiet", quiet, "Suppress progress and error messages");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : album::cli::kExitError;
  }
  if (config.empty() == batch.empty()) {
    std::cerr << "error: give exactly one of a config path or --batch <dir>\n";
    return album::cli::kExitError;
  }
  if (!batch.empty()) return run_batch(batch, quiet);
  return album::cli::run_config_file(config, std::cerr, quiet);
}

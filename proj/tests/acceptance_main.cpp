// Acceptance suite runner: one line per criterion, nonzero exit on failure.
//
//   acceptance [--seed N] [--quick] [--workers N] [--out DIR]

#include "affrec/affrec.hpp"

#include <cstring>
#include <filesystem>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  affrec::AcceptanceOptions opts;
  opts.workers = affrec::resolve_workers(0);
  opts.output_dir = "acceptance_out";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quick") {
      opts.quick = true;
    } else if (a == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (a == "--workers" && i + 1 < argc) {
      opts.workers = std::atoi(argv[++i]);
    } else if (a == "--out" && i + 1 < argc) {
      opts.output_dir = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--seed N] [--quick] [--workers N] "
                   "[--out DIR]\n";
      return 2;
    }
  }
  std::filesystem::create_directories(opts.output_dir);
  auto results = affrec::run_acceptance(opts, std::cout);
  for (const auto& r : results)
    if (!r.pass) return 4;
  return 0;
}
